#include "hconv/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hconv {

namespace fs = std::filesystem;

json to_json(const Point& p) { return json::array({p.x, p.y, p.z}); }

json to_json(const Sym2& s) {
  return json::array({json::array({s.a11, s.a12}), json::array({s.a12, s.a22})});
}

json to_json(const ConvexCombination& c) {
  json j;
  j["kind"] = to_string(c.kind);
  j["query"] = to_json(c.query);
  j["weights"] = c.weights;
  json coords = json::array();
  for (const PlaneCoord& h : c.coords) coords.push_back(json::array({h.a, h.b}));
  j["coords"] = coords;
  json points = json::array();
  for (const Point& q : c.points) points.push_back(to_json(q));
  j["points"] = points;
  j["value"] = c.value;
  if (c.kind == CombinationKind::penalized_right) j["penalty"] = c.penalty;
  j["window_radius"] = c.radius;
  j["lattice_spacing"] = c.spacing;
  j["pivots"] = c.pivots;
  j["window_limited"] = c.window_limited;
  return j;
}

json to_json(const ConvexityReport& r) {
  return {{"pass", r.pass},
          {"worst_point", to_json(r.worst_point)},
          {"worst_value", r.worst_value},
          {"worst_test", r.worst_test},
          {"samples_checked", r.samples_checked},
          {"kink_samples", r.kink_samples}};
}

json to_json(const ObstacleResidual& r) {
  return {{"residual", r.residual},
          {"above_obstacle", r.above_obstacle},
          {"concavity", r.concavity},
          {"noncontact_curvature", r.noncontact_curvature},
          {"nodes_checked", r.nodes_checked},
          {"nodes_screened_out", r.nodes_screened_out}};
}

json to_json(const CompareResult& r) {
  return {{"sup_error", r.sup_error},
          {"mean_error", r.mean_error},
          {"nodes", r.nodes},
          {"worst_node", to_json(r.worst_node)}};
}

json to_json(const SpotcheckReport& r) {
  json violations = json::array();
  for (const auto& v : r.violations) {
    violations.push_back({{"node", to_json(v.node)}, {"residual", v.residual}});
  }
  return {{"passed", r.passed()},
          {"nodes_requested", r.nodes_requested},
          {"nodes_checked", r.nodes_checked},
          {"nodes_screened_out", r.nodes_screened_out},
          {"min_residual", r.min_residual},
          {"violations", violations}};
}

json to_json(const EnvelopeReport& r) {
  json j{{"iterations", r.iterations},
         {"passes", r.passes},
         {"converged", r.converged},
         {"sup_deltas", r.sup_deltas},
         {"max_increase", r.max_increase},
         {"window_limited_nodes", r.window_limited_nodes}};
  j["obstacle_residual"] = r.obstacle_residual ? json(*r.obstacle_residual) : json(nullptr);
  return j;
}

std::string to_string(PayloadEncoding e) { return e == PayloadEncoding::csv ? "csv" : "f64le"; }

PayloadEncoding payload_encoding_from_string(const std::string& s) {
  if (s == "csv") return PayloadEncoding::csv;
  if (s == "f64le" || s == "binary") return PayloadEncoding::f64le;
  throw std::invalid_argument("unknown payload encoding '" + s + "' (csv, f64le)");
}

namespace {

json certificate_json(const CoercivityCertificate& c) {
  return {{"c1", c.c1}, {"c2", c.c2}, {"exponent", c.exponent}};
}

CoercivityCertificate certificate_from_json(const json& j) {
  return {j.at("c1").get<double>(), j.at("c2").get<double>(), j.value("exponent", 1.0)};
}

std::array<double, 3> triple(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) {
    throw std::runtime_error(std::string("grid header: '") + what + "' must hold three numbers");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return r;
  }
  return v;
}

}  // namespace

void write_grid(const GridField& g, const fs::path& header_path, PayloadEncoding encoding) {
  fs::path payload = header_path;
  payload.replace_extension(encoding == PayloadEncoding::csv ? ".csv" : ".f64");

  json h;
  h["format"] = "hconv-grid";
  h["version"] = 1;
  h["box"] = {{"center", to_json(g.box().center)},
              {"half", {g.box().half[0], g.box().half[1], g.box().half[2]}}};
  h["resolution"] = {g.resolution().nx, g.resolution().ny, g.resolution().nz};
  h["order"] = "x-fastest";
  h["fill_mode"] = to_string(g.fill_mode());
  h["certificate"] = g.certificate() ? certificate_json(*g.certificate()) : json(nullptr);
  std::optional<json> exterior;
  if (g.exterior()) exterior = field_document(*g.exterior());
  h["exterior_field"] = exterior ? *exterior : json(nullptr);
  h["payload"] = {{"encoding", to_string(encoding)}, {"file", payload.filename().string()}};

  if (encoding == PayloadEncoding::csv) {
    std::ofstream out(payload);
    if (!out) throw std::runtime_error("cannot write " + payload.string());
    out.precision(17);
    for (double v : g.values()) out << v << '\n';
  } else {
    std::ofstream out(payload, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + payload.string());
    for (double v : g.values()) {
      const std::uint64_t bits = to_little_endian(std::bit_cast<std::uint64_t>(v));
      out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
    }
  }
  std::ofstream out(header_path);
  if (!out) throw std::runtime_error("cannot write " + header_path.string());
  out << h.dump(2) << '\n';
}

GridField read_grid(const fs::path& header_path) {
  const json h = read_json_file(header_path);
  if (h.value("format", "") != "hconv-grid") {
    throw std::runtime_error(header_path.string() + " is not a grid header");
  }
  if (h.value("order", "x-fastest") != "x-fastest") {
    throw std::runtime_error("grid header: only x-fastest order is supported");
  }
  Box box;
  const auto c = triple(h.at("box").at("center"), "center");
  box.center = {c[0], c[1], c[2]};
  box.half = triple(h.at("box").at("half"), "half");
  const json& r = h.at("resolution");
  if (!r.is_array() || r.size() != 3) throw std::runtime_error("grid header: bad resolution");
  const Resolution res{r[0].get<int>(), r[1].get<int>(), r[2].get<int>()};
  if (res.nx < 3 || res.ny < 3 || res.nz < 3) {
    throw std::runtime_error("grid header: resolution must be at least 3 per axis");
  }
  const FillMode fill = fill_mode_from_string(h.value("fill_mode", "clamp"));
  std::optional<CoercivityCertificate> cert;
  if (h.contains("certificate") && !h["certificate"].is_null()) {
    cert = certificate_from_json(h["certificate"]);
  }

  const json& pl = h.at("payload");
  const PayloadEncoding enc = payload_encoding_from_string(pl.at("encoding").get<std::string>());
  const fs::path payload = header_path.parent_path() / pl.at("file").get<std::string>();
  std::vector<double> values;
  values.reserve(res.count());
  if (enc == PayloadEncoding::csv) {
    std::ifstream in(payload);
    if (!in) throw std::runtime_error("cannot read " + payload.string());
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(line, &used);
      } catch (const std::exception&) {
        throw std::runtime_error("grid payload: bad number '" + line + "'");
      }
      if (line.find_first_not_of(" \t\r", used) != std::string::npos) {
        throw std::runtime_error("grid payload: bad number '" + line + "'");
      }
      values.push_back(v);
    }
  } else {
    std::ifstream in(payload, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + payload.string());
    std::uint64_t bits = 0;
    while (in.read(reinterpret_cast<char*>(&bits), sizeof bits)) {
      values.push_back(std::bit_cast<double>(to_little_endian(bits)));
    }
    if (in.gcount() != 0) throw std::runtime_error("grid payload: truncated value");
  }
  if (values.size() != res.count()) {
    throw std::runtime_error("grid payload holds " + std::to_string(values.size()) +
                             " values, header expects " + std::to_string(res.count()));
  }
  GridField g(box, res, std::move(values), fill, cert);
  if (h.contains("exterior_field") && !h["exterior_field"].is_null()) {
    g = g.with_exterior(field_from_json(h["exterior_field"], header_path.parent_path()));
  }
  return g;
}

namespace {

ScalarField corpus_field(const std::string& ref) {
  const auto slash = ref.find('/');
  const std::string id = ref.substr(0, slash);
  if (!has_corpus_entry(id)) throw std::invalid_argument("unknown corpus id '" + id + "'");
  const CorpusEntry& e = corpus_entry(id);
  if (slash == std::string::npos) return e.field;
  const std::string extra = ref.substr(slash + 1);
  for (const auto& [name, f] : e.extras) {
    if (name == extra) return f;
  }
  throw std::invalid_argument("corpus entry '" + id + "' has no field named '" + extra + "'");
}

}  // namespace

ScalarField field_from_json(const json& doc, const fs::path& base_dir) {
  if (doc.is_string()) return corpus_field(doc.get<std::string>());
  if (!doc.is_object()) throw std::invalid_argument("field document must be a string or object");
  if (doc.contains("corpus")) {
    std::string ref = doc["corpus"].get<std::string>();
    if (doc.contains("extra")) ref += "/" + doc["extra"].get<std::string>();
    return corpus_field(ref);
  }
  if (doc.contains("grid")) {
    const fs::path header = base_dir / doc["grid"].get<std::string>();
    auto g = std::make_shared<const GridField>(read_grid(header));
    return as_scalar_field(g, header.stem().string());
  }
  if (doc.contains("terms")) {
    std::vector<Monomial> terms;
    for (const json& t : doc["terms"]) {
      Monomial m;
      m.coef = t.at("coef").get<double>();
      m.ex = t.value("x", 0);
      m.ey = t.value("y", 0);
      m.ez = t.value("z", 0);
      m.eabs_y = t.value("abs_y", 0);
      if (m.ex < 0 || m.ey < 0 || m.ez < 0 || m.eabs_y < 0) {
        throw std::invalid_argument("polynomial exponents must be nonnegative");
      }
      terms.push_back(m);
    }
    ScalarField f = polynomial_field(std::move(terms), doc.value("name", "polynomial"));
    if (doc.contains("certificate")) f = f.certified(certificate_from_json(doc["certificate"]));
    return f;
  }
  throw std::invalid_argument("field document needs 'corpus', 'grid' or 'terms'");
}

std::optional<json> field_document(const ScalarField& f) {
  for (const auto& [id, description] : corpus_list()) {
    const CorpusEntry& e = corpus_entry(id);
    if (e.field.name() == f.name()) return json(id);
    for (const auto& [name, extra] : e.extras) {
      if (extra.name() == f.name()) return json(id + "/" + name);
    }
  }
  return std::nullopt;
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

ScalarField resolve_field(const std::string& arg) {
  const std::string id = arg.substr(0, arg.find('/'));
  if (has_corpus_entry(id)) return corpus_field(arg);
  const fs::path path(arg);
  if (!fs::exists(path)) {
    throw std::invalid_argument("'" + arg + "' is neither a corpus id nor an existing file");
  }
  const json doc = read_json_file(path);
  if (doc.is_object() && doc.value("format", "") == "hconv-grid") {
    auto g = std::make_shared<const GridField>(read_grid(path));
    return as_scalar_field(g, path.stem().string());
  }
  return field_from_json(doc, path.parent_path());
}

namespace {

std::vector<Vec2> directions_from_json(const json& doc) {
  std::vector<Vec2> dirs;
  if (!doc.contains("directions")) return dirs;
  for (const json& d : doc["directions"]) {
    if (!d.is_array() || d.size() != 2) {
      throw std::invalid_argument("each direction must be a pair [z1, z2]");
    }
    dirs.push_back({d[0].get<double>(), d[1].get<double>()});
  }
  return dirs;
}

}  // namespace

SemilinearSpec semilinear_spec_from_json(const json& doc, const fs::path& base_dir) {
  if (!doc.contains("f")) throw std::invalid_argument("spec document needs 'f'");
  return SemilinearSpec(doc.value("alpha", 0.0), doc.value("beta", 0.0), directions_from_json(doc),
                        field_from_json(doc["f"], base_dir));
}

EquationData equation_from_json(const json& doc, const fs::path& base_dir) {
  if (!doc.contains("f")) throw std::invalid_argument("spec document needs 'f'");
  EquationData eq;
  const std::string kind = doc.value("equation", "semilinear");
  eq.rhs = field_from_json(doc["f"], base_dir);
  eq.directions = directions_from_json(doc);
  if (kind == "semilinear") {
    eq.kind = EquationKind::semilinear;
    eq.alpha = doc.value("alpha", 0.0);
    eq.beta = doc.value("beta", 0.0);
    eq.semilinear();  // validates
  } else if (kind == "linear_transport") {
    eq.kind = EquationKind::linear_transport;
    if (eq.directions.empty()) {
      throw std::invalid_argument("linear_transport spec needs at least one direction");
    }
  } else if (kind == "gradient_square") {
    eq.kind = EquationKind::gradient_square;
  } else {
    throw std::invalid_argument("unknown equation kind '" + kind + "'");
  }
  return eq;
}

}  // namespace hconv
