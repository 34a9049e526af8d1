#include "hconv/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>

#include "hconv/corpus.hpp"
#include "hconv/envelope.hpp"
#include "hconv/errors.hpp"
#include "hconv/io.hpp"
#include "hconv/parallel.hpp"
#include "hconv/reproduce.hpp"

namespace hconv {

namespace fs = std::filesystem;

namespace {

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::vector<double> parse_numbers(const std::string& s, std::size_t count, const char* what) {
  std::vector<double> v;
  std::stringstream in(s);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw UsageError(std::string(what) + ": '" + tok + "' is not a number");
    }
  }
  if (v.size() != count) {
    throw UsageError(std::string(what) + " expects " + std::to_string(count) +
                     " comma-separated numbers");
  }
  return v;
}

Box parse_box(const std::string& s) {
  const auto v = parse_numbers(s, 6, "--box/--region");
  return {{v[0], v[1], v[2]}, {v[3], v[4], v[5]}};
}

WindowSpec parse_window(const std::string& s) {
  const auto v = parse_numbers(s, 2, "--window");
  if (v[1] != std::floor(v[1])) throw UsageError("--window samples must be an integer");
  WindowSpec w{v[0], static_cast<int>(v[1])};
  try {
    w.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return w;
}

Side parse_side(const std::string& s) {
  if (s == "left") return Side::left;
  if (s == "right") return Side::right;
  throw UsageError("--side must be left or right");
}

/// A corpus field or field document, or a grid read from its header.
struct FieldArg {
  ScalarField field;
  std::optional<GridField> grid;
};

FieldArg load_field(const std::string& arg) {
  const std::string id = arg.substr(0, arg.find('/'));
  if (!has_corpus_entry(id) && fs::exists(arg)) {
    const json doc = read_json_file(arg);
    if (doc.is_object() && doc.value("format", "") == "hconv-grid") {
      GridField g = read_grid(arg);
      auto shared = std::make_shared<const GridField>(g);
      return {as_scalar_field(shared, fs::path(arg).stem().string()), std::move(g)};
    }
  }
  return {resolve_field(arg), std::nullopt};
}

std::vector<Point> read_points(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read points file " + path);
  std::vector<Point> pts;
  std::string line;
  while (std::getline(in, line)) {
    for (char& ch : line) {
      if (ch == ',') ch = ' ';
    }
    std::istringstream ls(line);
    Point p;
    if (!(ls >> p.x)) continue;  // blank or comment line
    if (!(ls >> p.y >> p.z)) throw UsageError("points file: expected 'x y z' per line");
    pts.push_back(p);
  }
  return pts;
}

void emit(const json& j, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << j.dump(2) << '\n';
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw UsageError("cannot write " + out_path);
  f << j.dump(2) << '\n';
}

fs::path default_grid_path(const std::string& out_path) {
  fs::path p(out_path);
  return p.parent_path() / (p.stem().string() + "_grid.json");
}

struct GridOptions {
  std::string field;
  std::string box = "0,0,0,2,2,2";
  int res = 41;
  std::string window = "4,41";
  std::string side = "left";
  std::string out;
  std::string grid_out;
  std::string grid_format = "f64le";
};

void add_grid_options(CLI::App* cmd, GridOptions& o) {
  cmd->add_option("--field", o.field, "corpus id, id/extra, field document or grid header")
      ->required();
  cmd->add_option("--box", o.box, "cx,cy,cz,hx,hy,hz (ignored for grid inputs)");
  cmd->add_option("--res", o.res, "nodes per axis (ignored for grid inputs)");
  cmd->add_option("--window", o.window, "plane window radius,samples");
  cmd->add_option("--side", o.side, "left or right");
  cmd->add_option("--out", o.out, "report path (stdout when omitted)");
  cmd->add_option("--grid-out", o.grid_out, "grid header path (default <out>_grid.json)");
  cmd->add_option("--grid-format", o.grid_format, "csv or f64le");
}

void write_result_grid(const GridField& g, const GridOptions& o, json& report) {
  fs::path path = o.grid_out;
  if (path.empty() && !o.out.empty()) path = default_grid_path(o.out);
  if (path.empty()) return;
  write_grid(g, path, payload_encoding_from_string(o.grid_format));
  report["grid"] = path.string();
}

int cmd_envelope(const GridOptions& o, double tol, int max_iter, std::ostream& out) {
  const FieldArg f = load_field(o.field);
  EnvelopeOptions opts;
  opts.window = parse_window(o.window);
  opts.side = parse_side(o.side);
  opts.tol = tol;
  opts.max_iter = max_iter;
  EnvelopeReport rep = f.grid ? iterate_envelope(*f.grid, opts)
                              : iterate_envelope(f.field, parse_box(o.box),
                                                 Resolution::uniform(o.res), opts);
  const ObstacleResidual ob = obstacle_residual(rep.final, f.field);
  rep.obstacle_residual = ob.residual;

  json report = to_json(rep);
  report["field"] = o.field;
  report["obstacle"] = to_json(ob);
  if (has_corpus_entry(o.field) && corpus_entry(o.field).reference_envelope) {
    report["reference_compare"] =
        to_json(reference_compare(rep.final, *corpus_entry(o.field).reference_envelope));
  }
  write_result_grid(rep.final, o, report);
  emit(report, o.out, out);
  return rep.converged ? kExitPass : kExitFactFailure;
}

int cmd_s_apply(const GridOptions& o, const std::string& trace, std::ostream& out) {
  const FieldArg f = load_field(o.field);
  const WindowSpec w = parse_window(o.window);
  const Side side = parse_side(o.side);
  const GridField input = f.grid ? *f.grid : sample_to_grid(f.field, parse_box(o.box),
                                                            Resolution::uniform(o.res));
  ApplyStats stats;
  const ApplyOptions ao;
  const GridField result = f.grid ? apply_s(input, w, side, ao, &stats)
                                  : apply_s(f.field, input, w, side, ao, &stats);
  double sup = 0.0, inc = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n < input.size(); ++n) {
    sup = std::max(sup, std::abs(result.values()[n] - input.values()[n]));
    inc = std::max(inc, result.values()[n] - input.values()[n]);
  }
  json report{{"field", o.field},
              {"sup_delta", sup},
              {"max_increase", inc},
              {"window_limited_nodes", stats.window_limited_nodes}};
  if (!trace.empty()) {
    const bool adaptive = f.field.certificate() && f.field.certificate()->superlinear();
    json dumps = json::array();
    for (const Point& p : read_points(trace)) {
      const WindowSpec win = adaptive ? choose_window(f.field, p, w.samples_per_axis) : w;
      dumps.push_back(to_json(s_side_point(side, f.field, p, win, ao.growth)));
    }
    report["trace"] = dumps;
  }
  write_result_grid(result, o, report);
  emit(report, o.out, out);
  return kExitPass;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Horizontal convexification on the Heisenberg group", "hconv"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "worker threads (0 = hardware concurrency)");

  GridOptions env_opts;
  double env_tol = 1e-3;
  int env_max_iter = 50;
  auto* env = app.add_subcommand("envelope", "iterate S to the h-convex envelope");
  add_grid_options(env, env_opts);
  env->add_option("--tol", env_tol, "sup-norm convergence tolerance");
  env->add_option("--max-iter", env_max_iter, "maximum number of applications");

  GridOptions apply_opts;
  std::string trace;
  auto* sapply = app.add_subcommand("s-apply", "apply S once");
  add_grid_options(sapply, apply_opts);
  sapply->add_option("--trace", trace, "points file (x y z per line) to dump combinations for");

  std::string chk_field, chk_region = "0,0,0,2,2,2", chk_side = "left", chk_out;
  double chk_tol = 1e-6, chk_h = 1.0;
  int chk_samples = 2000;
  std::uint64_t chk_seed = 1234;
  auto* chk = app.add_subcommand("check-hconvex", "sampled h-convexity scan");
  chk->add_option("--field", chk_field, "corpus id, id/extra, field document or grid header")
      ->required();
  chk->add_option("--region", chk_region, "cx,cy,cz,hx,hy,hz");
  chk->add_option("--tol", chk_tol, "allowed negative defect");
  chk->add_option("--samples", chk_samples, "sampled points");
  chk->add_option("--h-radius", chk_h, "radius of the horizontal increments");
  chk->add_option("--side", chk_side, "left or right");
  chk->add_option("--seed", chk_seed, "sampling seed");
  chk->add_option("--out", chk_out, "report path");

  std::string pde_spec, pde_solution, pde_region = "0,0,0,2,2,2", pde_out;
  int pde_samples = 100;
  double pde_tol = 1e-4, pde_step = kDefaultStep;
  std::uint64_t pde_seed = 1234;
  auto* pde = app.add_subcommand("pde-residual", "finite-difference residual of a solution");
  pde->add_option("--spec", pde_spec, "equation document (JSON)")->required();
  pde->add_option("--solution", pde_solution, "corpus id, field document or grid header")
      ->required();
  pde->add_option("--samples", pde_samples, "random points");
  pde->add_option("--region", pde_region, "cx,cy,cz,hx,hy,hz");
  pde->add_option("--tol", pde_tol, "allowed |residual|");
  pde->add_option("--step", pde_step, "finite-difference step");
  pde->add_option("--seed", pde_seed, "sampling seed");
  pde->add_option("--out", pde_out, "report path");

  std::string rep_id, rep_config, rep_out;
  auto* rep = app.add_subcommand("reproduce", "check a corpus entry against its expected facts");
  rep->add_option("id", rep_id, "corpus id")->required();
  rep->add_option("--config", rep_config, "JSON config file");
  rep->add_option("--out", rep_out, "report path");

  auto* corpus = app.add_subcommand("corpus", "built-in examples");
  corpus->require_subcommand(1);
  auto* corpus_list_cmd = corpus->add_subcommand("list", "list corpus ids");

  std::vector<std::string> argv(args.rbegin(), args.rend());
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (threads > 0) set_thread_count(threads);
    if (env->parsed()) return cmd_envelope(env_opts, env_tol, env_max_iter, out);
    if (sapply->parsed()) return cmd_s_apply(apply_opts, trace, out);
    if (chk->parsed()) {
      const FieldArg f = load_field(chk_field);
      ScanOptions o;
      o.tol = chk_tol;
      o.n_samples = chk_samples;
      o.h_radius = chk_h;
      o.side = parse_side(chk_side);
      o.seed = chk_seed;
      const ConvexityReport r = hconvexity_scan(f.field, parse_box(chk_region), o);
      json j = to_json(r);
      j["field"] = chk_field;
      emit(j, chk_out, out);
      return r.pass ? kExitPass : kExitFactFailure;
    }
    if (pde->parsed()) {
      const EquationData eq = equation_from_json(read_json_file(pde_spec), fs::path(pde_spec).parent_path());
      const FieldArg u = load_field(pde_solution);
      const Box region = parse_box(pde_region);
      std::mt19937_64 rng(pde_seed);
      std::uniform_real_distribution<double> ux(region.lo(0), region.hi(0));
      std::uniform_real_distribution<double> uy(region.lo(1), region.hi(1));
      std::uniform_real_distribution<double> uz(region.lo(2), region.hi(2));
      double worst = 0.0;
      Point worst_point;
      for (int i = 0; i < pde_samples; ++i) {
        const double x = ux(rng);
        const double y = uy(rng);
        const Point p{x, y, uz(rng)};
        double r = 0.0;
        switch (eq.kind) {
          case EquationKind::semilinear:
            r = semilinear_residual(eq.semilinear(), u.field, p, pde_step);
            break;
          case EquationKind::linear_transport:
            r = linear_transport_residual(eq.directions, eq.rhs, u.field, p, pde_step);
            break;
          case EquationKind::gradient_square:
            r = gradient_square_residual(eq.rhs, u.field, p, pde_step);
            break;
          case EquationKind::none:
            throw UsageError("spec document has no equation");
        }
        if (i == 0 || std::abs(r) > worst) {
          worst = std::abs(r);
          worst_point = p;
        }
      }
      const bool pass = worst <= pde_tol;
      emit({{"equation", to_string(eq.kind)},
            {"solution", pde_solution},
            {"samples", pde_samples},
            {"max_abs_residual", worst},
            {"worst_point", to_json(worst_point)},
            {"tolerance", pde_tol},
            {"pass", pass}},
           pde_out, out);
      return pass ? kExitPass : kExitFactFailure;
    }
    if (rep->parsed()) {
      if (!has_corpus_entry(rep_id)) throw UsageError("unknown corpus id '" + rep_id + "'");
      ReproduceConfig config;
      if (!rep_config.empty()) config = reproduce_config_from_json(read_json_file(rep_config));
      const ReproduceReport r = reproduce(rep_id, config);
      emit(to_json(r), rep_out, out);
      if (const FactResult* bad = r.first_failure()) {
        err << "fact failed: " << bad->name << " (" << bad->criterion << ", measured "
            << bad->measured << ")\n";
        return kExitFactFailure;
      }
      return kExitPass;
    }
    if (corpus_list_cmd->parsed()) {
      json list = json::array();
      for (const auto& [id, description] : corpus_list()) {
        list.push_back({{"id", id}, {"description", description}});
      }
      out << list.dump(2) << '\n';
      return kExitPass;
    }
  } catch (const WindowTooSmall& e) {
    err << "error: " << e.what() << '\n';
    return kExitWindow;
  } catch (const NoCertificate& e) {
    err << "error: " << e.what() << '\n';
    return kExitWindow;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace hconv
