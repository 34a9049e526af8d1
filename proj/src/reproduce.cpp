#include "hconv/reproduce.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "hconv/differential.hpp"
#include "hconv/envelope.hpp"
#include "hconv/io.hpp"
#include "hconv/pde.hpp"

namespace hconv {

namespace {

std::string fmt(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

class Recorder {
 public:
  Recorder(const CorpusEntry& e, std::vector<FactResult>& out) : entry_(e), out_(out) {}

  void check(const std::string& name, bool passed, double measured, std::string criterion,
             json details = json::object()) {
    const auto it = std::find_if(entry_.expected.begin(), entry_.expected.end(),
                                 [&](const ExpectedFact& f) { return f.name == name; });
    if (it == entry_.expected.end()) {
      throw std::logic_error("fact '" + name + "' is not declared for '" + entry_.id + "'");
    }
    out_.push_back({name, it->provenance, it->statement, passed, measured, std::move(criterion),
                    std::move(details)});
  }

  void at_most(const std::string& name, double measured, double bound, json details = json::object()) {
    check(name, measured <= bound, measured, "<= " + fmt(bound), std::move(details));
  }

 private:
  const CorpusEntry& entry_;
  std::vector<FactResult>& out_;
};

std::vector<Point> random_points(const Box& box, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(box.lo(0), box.hi(0));
  std::uniform_real_distribution<double> uy(box.lo(1), box.hi(1));
  std::uniform_real_distribution<double> uz(box.lo(2), box.hi(2));
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double x = ux(rng);
    const double y = uy(rng);
    pts.push_back({x, y, uz(rng)});
  }
  return pts;
}

double max_abs(const std::vector<Point>& pts, const std::function<double(const Point&)>& g,
               Point* worst = nullptr) {
  double m = 0.0;
  for (const Point& p : pts) {
    const double v = std::abs(g(p));
    if (v > m) {
      m = v;
      if (worst) *worst = p;
    }
  }
  return m;
}

double matrix_distance(const Sym2& a, const Sym2& b) {
  return std::max({std::abs(a.a11 - b.a11), std::abs(a.a12 - b.a12), std::abs(a.a22 - b.a22)});
}

ScanOptions scan_options(const ReproduceConfig& c, Side side = Side::left) {
  ScanOptions o;
  o.n_samples = c.scan_samples;
  o.seed = c.seed;
  o.side = side;
  return o;
}

const ScalarField& extra(const CorpusEntry& e, const std::string& name) {
  for (const auto& [n, f] : e.extras) {
    if (n == name) return f;
  }
  throw std::logic_error("corpus entry '" + e.id + "' lacks extra '" + name + "'");
}

EnvelopeOptions envelope_options(const ReproduceConfig& c, bool keep_iterates) {
  EnvelopeOptions o;
  o.window = c.window;
  o.tol = c.tol;
  o.max_iter = c.max_iter;
  o.keep_iterates = keep_iterates;
  return o;
}

bool on_axis(const Point& p) { return std::abs(p.x) < 1e-12 && std::abs(p.y) < 1e-12; }

void envelope_facts(Recorder& rec, const CorpusEntry& e, const ReproduceConfig& c,
                    const EnvelopeReport& rep) {
  const CompareResult cmp = reference_compare(rep.final, *e.reference_envelope, 2);
  rec.at_most("envelope_sup_error", cmp.sup_error, c.envelope_tolerance, to_json(cmp));
  const ObstacleResidual ob = obstacle_residual(rep.final, e.field);
  rec.at_most("obstacle_residual", ob.residual, c.envelope_tolerance, to_json(ob));
}

void check_iterations(Recorder& rec, const EnvelopeReport& rep, int expected) {
  rec.check("envelope_iterations", rep.converged && rep.iterations == expected, rep.iterations,
            "converged with iterations == " + std::to_string(expected), to_json(rep));
}

void reproduce_one_step(Recorder& rec, const CorpusEntry& e, const ReproduceConfig& c) {
  const ScalarField& u = e.field;
  rec.at_most("value_at_(1,0,0)", std::abs(u({1, 0, 0})), 1e-12);

  const Point q{0, 0, 0.5};
  const ConvexCombination s = s_point(u, q, choose_window(u, q, c.window.samples_per_axis));
  rec.at_most("s_at_(0,0,0.5)", s.value, c.envelope_tolerance, to_json(s));

  const EnvelopeReport rep = iterate_envelope(u, c.box, Resolution::uniform(c.resolution),
                                              envelope_options(c, false));
  check_iterations(rec, rep, 1);
  envelope_facts(rec, e, c, rep);
}

void reproduce_two_step(Recorder& rec, const CorpusEntry& e, const ReproduceConfig& c) {
  const ScalarField& u = e.field;
  rec.at_most("value_at_origin", std::abs(u({0, 0, 0}) - 1.0), 1e-12);

  const EnvelopeReport rep = iterate_envelope(u, c.box, Resolution::uniform(c.resolution),
                                              envelope_options(c, true));
  const GridField& first = rep.iterates.at(0);
  double axis_dev = 0.0, off_axis = 0.0;
  for (std::size_t n = 0; n < first.size(); ++n) {
    const Point p = first.node_point(n);
    const double v = first.values()[n];
    if (on_axis(p)) {
      axis_dev = std::max(axis_dev, std::abs(v - u(p)));
    } else if (std::abs(p.z) <= 1.0 + 1e-12) {
      off_axis = std::max(off_axis, v);
    }
  }
  rec.at_most("first_pass_axis", axis_dev, 1e-3,
              {{"value_at_(0,0,0.5)", first.interpolate({0, 0, 0.5})}});
  rec.at_most("first_pass_off_axis", off_axis, c.envelope_tolerance,
              {{"value_at_(1,0,0.5)", first.interpolate({1, 0, 0.5})}});

  double second_axis = std::numeric_limits<double>::infinity();
  if (rep.iterates.size() >= 2) {
    const GridField& second = rep.iterates[1];
    second_axis = 0.0;
    for (std::size_t n = 0; n < second.size(); ++n) {
      const Point p = second.node_point(n);
      if (on_axis(p) && std::abs(p.z) <= 1.0 + 1e-12) {
        second_axis = std::max(second_axis, second.values()[n]);
      }
    }
  }
  rec.at_most("second_pass_axis", second_axis, c.envelope_tolerance);
  check_iterations(rec, rep, 2);
  envelope_facts(rec, e, c, rep);

  const GrowthPolicy growth = ApplyOptions{}.growth;
  double worst_excess = -std::numeric_limits<double>::infinity();
  double worst_gap = 0.0;
  json worst;
  for (const Point& p : random_points(Box::cube(1.5), 2 * c.samples, c.seed + 7)) {
    const double gap =
        std::abs(s_point(u, p, c.window, growth).value - s_tilde_point(u, p, c.window, growth).value);
    const double tol = left_right_lattice_tolerance(u, p, c.window, growth);
    worst_gap = std::max(worst_gap, gap);
    if (gap - 2.0 * tol > worst_excess) {
      worst_excess = gap - 2.0 * tol;
      worst = {{"point", to_json(p)}, {"gap", gap}, {"lattice_tolerance", tol}};
    }
  }
  rec.check("left_right_equivalence", worst_excess <= 0.0, worst_gap,
            "|s - s~| <= 2 x lattice tolerance at every point", worst);
}

void reproduce_failure(Recorder& rec, const CorpusEntry& e, const ReproduceConfig&) {
  const ScalarField& u = e.field;
  const double t = 0.1;
  // Spacing 0.05 puts the witness offsets (+-t, -+t) on the lattice.
  const WindowSpec w{1.0, 41};
  const ConvexCombination s0 = s_point(u, {0, 0, 0}, w);
  const ConvexCombination sh = s_point(u, {t, t, 0}, w);
  const ConvexCombination si = s_point(u, {-t, -t, 0}, w);

  rec.at_most("value_at_origin", std::max(std::abs(u({0, 0, 0})), std::abs(s0.value)), 1e-12,
              to_json(s0));
  const double bound = -2 * t * t * t + 4 * std::pow(t, 6) + 17 * std::pow(t, 4);
  rec.at_most("s_at_h_t", sh.value, bound + 1e-4, to_json(sh));
  rec.check("s_at_h_t_inverse", si.value >= 0.0 && si.value <= 4 * std::pow(t, 4) + 1e-12, si.value,
            "in [0, 4t^4]", to_json(si));
  // The refined lattice brings S[u](h_t) close to its infimum; the sum with
  // S[u](h_t^-1) = 4t^4 (u is convex on that plane) stays positive at t = 0.1.
  const WindowSpec fine{0.4, 801};
  const double refined = s_point(u, {t, t, 0}, fine).value + s_point(u, {-t, -t, 0}, fine).value;
  const double defect = sh.value + si.value - 2.0 * s0.value;
  rec.check("midpoint_defect", defect < 0.0, defect, "< 0", {{"refined_lattice_defect", refined}});

  const double t2 = 0.09;
  const double d2 = s_point(u, {t2, t2, 0}, fine).value + s_point(u, {-t2, -t2, 0}, fine).value -
                    2.0 * s_point(u, {0, 0, 0}, fine).value;
  rec.check("midpoint_defect_t_0.09", d2 < 0.0, d2, "< 0");
}

void not_hconvex_near_origin(Recorder& rec, const ScalarField& u, const ReproduceConfig& c) {
  ScanOptions o = scan_options(c);
  o.h_radius = 0.5;
  const ConvexityReport r = hconvexity_scan(u, Box::cube(0.1), o);
  rec.check("u_not_hconvex", !r.pass && euclidean_norm(r.worst_point) <= 0.2, r.worst_value,
            "scan fails with worst point within 0.2 of the origin", to_json(r));
}

void hconvex_scan(Recorder& rec, const std::string& name, const ScalarField& f,
                  const ReproduceConfig& c, Side side = Side::left) {
  const ConvexityReport r = hconvexity_scan(f, c.box, scan_options(c, side));
  rec.check(name, r.pass, r.worst_value, "scan passes", to_json(r));
}

void reproduce_no_symmetry(Recorder& rec, const CorpusEntry& e, const ReproduceConfig& c) {
  const ScalarField& u = e.field;
  const ScalarField& f = extra(e, "f");
  const Sym2 hu = symmetrized_horizontal_hessian(u, {0, 0, 0});
  const Sym2 hf = symmetrized_horizontal_hessian(f, {0, 0, 0});
  rec.at_most("hessian_u_origin", matrix_distance(hu, {-2, 0, 3}), 1e-6, to_json(hu));
  rec.at_most("hessian_f_origin", matrix_distance(hf, {0, 0, 3}), 1e-6, to_json(hf));
  not_hconvex_near_origin(rec, u, c);
  hconvex_scan(rec, "f_hconvex", f, c);

  const Vec2 zeta{0.0, 2.0};
  Point worst;
  const double r = max_abs(random_points(c.box, c.samples, c.seed),
                           [&](const Point& p) { return linear_transport_residual(zeta, f, u, p); },
                           &worst);
  rec.at_most("linear_residual", r, c.residual_tolerance, {{"worst_point", to_json(worst)}});
  rec.at_most("midpoint_origin", std::abs(midpoint_check(u, {0, 0, 0}, {1, 0}) + 1.5), 1e-12);
}

void reproduce_no_symmetry2(Recorder& rec, const CorpusEntry& e, const ReproduceConfig& c) {
  const ScalarField& u = e.field;
  const ScalarField& f = extra(e, "f");
  const auto& dirs = e.equation->directions;
  std::vector<Point> pts = random_points(c.box, c.samples, c.seed);
  for (Point& p : pts) p.y = std::abs(p.y);
  Point worst;
  const double r = max_abs(
      pts, [&](const Point& p) { return linear_transport_residual(dirs, f, u, p); }, &worst);
  rec.at_most("abs_residual_upper_half", r, c.residual_tolerance,
              {{"worst_point", to_json(worst)},
               {"residual_at_(1,1,1)", linear_transport_residual(dirs, f, u, {1, 1, 1})},
               {"residual_at_(1,-1,1)", linear_transport_residual(dirs, f, u, {1, -1, 1})}});
  not_hconvex_near_origin(rec, u, c);
  hconvex_scan(rec, "f_hconvex", f, c);
  const double defect = symmetry_defect(f, c.box, 1000, c.seed);
  rec.check("f_not_symmetric", defect > 1e-3, defect, "> 0.001");
}

void reproduce_hconvex_sol(Recorder& rec, const CorpusEntry& e, const ReproduceConfig& c) {
  const ScalarField& u = e.field;
  const SemilinearSpec spec = e.equation->semilinear();
  const double r = max_abs(random_points(c.box, c.samples, c.seed),
                           [&](const Point& p) { return semilinear_residual(spec, u, p); });
  rec.at_most("semilinear_residual", r, c.residual_tolerance);
  const Sym2 h = symmetrized_horizontal_hessian(u, {1, 1, 0});
  rec.at_most("hessian_u_(1,1,0)", matrix_distance(h, {5, 3, 5}), 1e-6, to_json(h));
  hconvex_scan(rec, "u_hconvex", u, c);

  // Trilinear error bound with u_xx = 2 + 2y^2, u_yy = 2 + 2x^2, u_zz = 4.
  const GridField g = sample_to_grid(u, c.box, Resolution::uniform(c.resolution));
  const double xm = std::max(std::abs(c.box.lo(0)), std::abs(c.box.hi(0)));
  const double ym = std::max(std::abs(c.box.lo(1)), std::abs(c.box.hi(1)));
  const double bound = trilinear_error_bound(g, {2 + 2 * ym * ym, 2 + 2 * xm * xm, 4.0});
  const GridField once = apply_s(g, c.window, Side::left);
  double change = 0.0;
  for (std::size_t n = 0; n < g.size(); ++n) {
    change = std::max(change, std::abs(once.values()[n] - g.values()[n]));
  }
  rec.at_most("fixed_point", change, bound, {{"interpolation_error_bound", bound}});
  rec.at_most("symmetric", symmetry_defect(u, c.box, 1000, c.seed), 1e-12);
}

void reproduce_euclid_convex_sol(Recorder& rec, const CorpusEntry& e, const ReproduceConfig& c) {
  const ScalarField& u = e.field;
  const SemilinearSpec spec = e.equation->semilinear();
  const double r = max_abs(random_points(c.box, c.samples, c.seed),
                           [&](const Point& p) { return semilinear_residual(spec, u, p); });
  rec.at_most("semilinear_residual", r, c.residual_tolerance);
  const WindowSpec w3{2.0, 21};
  const double gap = max_abs(random_points(c.box, 20, c.seed + 1), [&](const Point& p) {
    return (euclid_envelope_point(u, p, w3).value - u(p)) / std::max(1.0, std::abs(u(p)));
  });
  rec.at_most("euclidean_fixed_point", gap, 1e-9);
  hconvex_scan(rec, "u_hconvex", u, c);
}

void reproduce_strong_concavity(Recorder& rec, const CorpusEntry& e, const ReproduceConfig& c) {
  const ScalarField& u = e.field;
  const ScalarField& f = extra(e, "f");
  const ScalarField& nominal = extra(e, "f_nominal");
  const double eps = 0.1;
  const auto pts = random_points(c.box, c.samples, c.seed);
  rec.at_most("gradient_square_residual",
              max_abs(pts, [&](const Point& p) { return gradient_square_residual(f, u, p); }),
              c.residual_tolerance,
              {{"residual_at_(1,2,0)", gradient_square_residual(f, u, {1, 2, 0})}});
  const double gap_error = max_abs(pts, [&](const Point& p) {
    return gradient_square_residual(nominal, u, p) + eps * (p.x * p.x + p.y * p.y);
  });
  rec.at_most("nominal_rhs_gap", gap_error, c.residual_tolerance,
              {{"nominal_residual_at_(1,2,0)", gradient_square_residual(nominal, u, {1, 2, 0})}});

  const ConvexityReport left = hconvexity_scan(u, c.box, scan_options(c, Side::left));
  const ConvexityReport right = hconvexity_scan(u, c.box, scan_options(c, Side::right));
  rec.check("u_not_hconvex", !left.pass && !right.pass, std::max(left.worst_value, right.worst_value),
            "left and right scans fail", {{"left", to_json(left)}, {"right", to_json(right)}});
  const ConvexityReport fl = hconvexity_scan(f, c.box, scan_options(c, Side::left));
  const ConvexityReport fr = hconvexity_scan(f, c.box, scan_options(c, Side::right));
  rec.check("f_hconvex", fl.pass && fr.pass, std::min(fl.worst_value, fr.worst_value),
            "left and right scans pass", {{"left", to_json(fl)}, {"right", to_json(fr)}});
}

void reproduce_hconvex_right(Recorder& rec, const CorpusEntry& e, const ReproduceConfig& c) {
  const ScalarField& u = e.field;
  hconvex_scan(rec, "u_hconvex", u, c, Side::left);
  hconvex_scan(rec, "u_right_hconvex", u, c, Side::right);
  rec.at_most("midpoint_(1,1,0)", std::abs(midpoint_check(u, {1, 1, 0}, {1, -1}) - 2.0), 1e-12);
  const double gap = max_abs(random_points(c.box, c.samples, c.seed), [&](const Point& p) {
    return (s_tilde_point(u, p, c.window).value - u(p)) / std::max(1.0, std::abs(u(p)));
  });
  rec.at_most("right_fixed_point", gap, 1e-9);
}

using Pipeline = void (*)(Recorder&, const CorpusEntry&, const ReproduceConfig&);

const std::map<std::string, Pipeline>& pipelines() {
  static const std::map<std::string, Pipeline> p = {
      {"one_step", reproduce_one_step},
      {"two_step", reproduce_two_step},
      {"failure", reproduce_failure},
      {"no_symmetry", reproduce_no_symmetry},
      {"no_symmetry2", reproduce_no_symmetry2},
      {"hconvex_sol", reproduce_hconvex_sol},
      {"euclid_convex_sol", reproduce_euclid_convex_sol},
      {"strong_concavity", reproduce_strong_concavity},
      {"hconvex_right_example", reproduce_hconvex_right},
  };
  return p;
}

}  // namespace

double left_right_lattice_tolerance(const ScalarField& f, const Point& p, const WindowSpec& w,
                                    const GrowthPolicy& growth) {
  const WindowSpec fine{w.radius, 2 * (w.samples_per_axis - 1) + 1};
  const double dl = std::abs(s_point(f, p, w, growth).value - s_point(f, p, fine, growth).value);
  const double dr =
      std::abs(s_tilde_point(f, p, w, growth).value - s_tilde_point(f, p, fine, growth).value);
  return std::max({dl, dr, 1e-9});
}

bool ReproduceReport::passed() const { return first_failure() == nullptr; }

const FactResult* ReproduceReport::first_failure() const {
  for (const FactResult& f : facts) {
    if (!f.passed) return &f;
  }
  return nullptr;
}

ReproduceReport reproduce(const std::string& id, const ReproduceConfig& config) {
  const CorpusEntry& e = corpus_entry(id);
  ReproduceReport rep;
  rep.id = id;
  rep.config = config;
  Recorder rec(e, rep.facts);
  pipelines().at(id)(rec, e, config);
  for (const ExpectedFact& f : e.expected) {
    const bool seen = std::any_of(rep.facts.begin(), rep.facts.end(),
                                  [&](const FactResult& r) { return r.name == f.name; });
    if (!seen) rep.facts.push_back({f.name, f.provenance, f.statement, false, 0.0, "not evaluated", {}});
  }
  return rep;
}

ReproduceConfig reproduce_config_from_json(const json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("reproduce config must be a JSON object");
  ReproduceConfig c;
  for (const auto& [key, v] : doc.items()) {
    if (key == "box") {
      if (v.is_number()) {
        c.box = Box::cube(v.get<double>());
      } else if (v.is_array() && v.size() == 6) {
        c.box = {{v[0].get<double>(), v[1].get<double>(), v[2].get<double>()},
                 {v[3].get<double>(), v[4].get<double>(), v[5].get<double>()}};
      } else {
        throw std::invalid_argument("config 'box' must be a half-width or [cx,cy,cz,hx,hy,hz]");
      }
    } else if (key == "res") {
      c.resolution = v.get<int>();
    } else if (key == "window") {
      if (!v.is_array() || v.size() != 2) {
        throw std::invalid_argument("config 'window' must be [radius, samples]");
      }
      c.window = {v[0].get<double>(), v[1].get<int>()};
    } else if (key == "tol") {
      c.tol = v.get<double>();
    } else if (key == "max_iter") {
      c.max_iter = v.get<int>();
    } else if (key == "samples") {
      c.samples = v.get<int>();
    } else if (key == "scan_samples") {
      c.scan_samples = v.get<int>();
    } else if (key == "seed") {
      c.seed = v.get<std::uint64_t>();
    } else if (key == "envelope_tolerance") {
      c.envelope_tolerance = v.get<double>();
    } else if (key == "residual_tolerance") {
      c.residual_tolerance = v.get<double>();
    } else {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
  c.window.validate();
  if (c.resolution < 3) throw std::invalid_argument("config 'res' must be at least 3");
  if (c.samples < 1 || c.scan_samples < 1) throw std::invalid_argument("sample counts must be positive");
  return c;
}

json to_json(const ReproduceConfig& c) {
  return {{"box", {c.box.center.x, c.box.center.y, c.box.center.z, c.box.half[0], c.box.half[1], c.box.half[2]}},
          {"res", c.resolution},
          {"window", {c.window.radius, c.window.samples_per_axis}},
          {"tol", c.tol},
          {"max_iter", c.max_iter},
          {"samples", c.samples},
          {"scan_samples", c.scan_samples},
          {"seed", c.seed},
          {"envelope_tolerance", c.envelope_tolerance},
          {"residual_tolerance", c.residual_tolerance}};
}

json to_json(const ReproduceReport& r) {
  json facts = json::array();
  for (const FactResult& f : r.facts) {
    facts.push_back({{"name", f.name},
                     {"provenance", to_string(f.provenance)},
                     {"statement", f.statement},
                     {"passed", f.passed},
                     {"measured", f.measured},
                     {"criterion", f.criterion},
                     {"details", f.details}});
  }
  json j{{"id", r.id}, {"config", to_json(r.config)}, {"passed", r.passed()}, {"facts", facts}};
  const FactResult* bad = r.first_failure();
  j["first_failure"] = bad ? json(bad->name) : json(nullptr);
  return j;
}

}  // namespace hconv
