#include "hconv/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "hconv/errors.hpp"

namespace hconv {

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::reference:
      return "reference";
    case Provenance::trivial:
      return "trivial";
    case Provenance::derived:
      return "derived";
  }
  return "?";
}

const char* to_string(EquationKind kind) {
  switch (kind) {
    case EquationKind::none:
      return "none";
    case EquationKind::semilinear:
      return "semilinear";
    case EquationKind::linear_transport:
      return "linear_transport";
    case EquationKind::gradient_square:
      return "gradient_square";
  }
  return "?";
}

SemilinearSpec EquationData::semilinear() const {
  return SemilinearSpec(alpha, beta, directions, rhs);
}

ScalarField one_step_field() {
  return ScalarField(
             [](const Point& p) {
               const double t = p.x * p.x + p.y * p.y + p.z * p.z;
               return (t - 1.0) * (t - 1.0);
             },
             "one_step", std::nullopt, 0.0)
      .certified({0.5, 1.0, 4.0});
}

ScalarField two_step_field() {
  return ScalarField(
      [](const Point& p) {
        const double s = p.z * p.z - 1.0;
        return s * s;
      },
      "two_step", std::nullopt, 0.0);
}

ScalarField failure_field() {
  // (x - y) z + ((x - y) z)^2 >= -1/4 and rho^4 >= rho^2 - 1/4 give
  // u >= |p|^2 - 1/2.
  return ScalarField(
             [](const Point& p) {
               const double w = (p.x - p.y) * p.z;
               const double r2 = p.x * p.x + p.y * p.y;
               return w + w * w + r2 * r2 + p.z * p.z;
             },
             "failure", std::nullopt, -0.25)
      .certified({1.0, 0.5, 2.0});
}

ScalarField no_symmetry_field() {
  return polynomial_field({{2.0, 1, 0, 1}, {1.0, 2, 1, 0}, {0.25, 4, 0, 0}, {-1.0, 2, 0, 0},
                           {1.5, 0, 2, 0}},
                          "no_symmetry");
}

ScalarField no_symmetry_rhs() {
  return polynomial_field({{2.0, 1, 0, 1}, {1.0, 2, 1, 0}, {0.25, 4, 0, 0}, {1.5, 0, 2, 0},
                           {6.0, 0, 1, 0}, {-1.0, 0, 0, 0}},
                          "no_symmetry_rhs");
}

ScalarField no_symmetry2_rhs() {
  Monomial abs_y{6.0, 0, 0, 0, 1};
  return polynomial_field({{2.0, 1, 0, 1}, {1.0, 2, 1, 0}, {0.25, 4, 0, 0}, {1.5, 0, 2, 0},
                           abs_y, {-1.0, 0, 0, 0}},
                          "no_symmetry2_rhs");
}

ScalarField hconvex_sol_field() {
  return ScalarField(
             [](const Point& p) {
               return p.x * p.x + p.y * p.y + p.x * p.x * p.y * p.y + 2.0 * p.z * p.z;
             },
             "hconvex_sol", std::nullopt, 0.0)
      .certified({1.0, 0.0, 2.0});
}

ScalarField hconvex_sol_rhs(double alpha) {
  return ScalarField(
      [alpha](const Point& p) {
        return (1.0 - 3.0 * alpha) * (p.x * p.x + p.y * p.y) + p.x * p.x * p.y * p.y +
               2.0 * p.z * p.z - 4.0 * alpha;
      },
      "hconvex_sol_rhs");
}

ScalarField euclid_convex_sol_field(double eps) {
  return ScalarField(
             [eps](const Point& p) {
               return (1.0 + eps) * (p.x * p.x + p.y * p.y + 4.0) + p.x + 2.0 * p.z * p.z;
             },
             "euclid_convex_sol")
      .certified({1.0, 0.0, 2.0});
}

ScalarField euclid_convex_sol_rhs(double eps) {
  return ScalarField(
      [eps](const Point& p) { return p.x + 2.0 * p.z * p.z + eps * (p.x * p.x + p.y * p.y); },
      "euclid_convex_sol_rhs");
}

ScalarField strong_concavity_field(double eps) {
  return ScalarField([eps](const Point& p) { return -eps * (p.x * p.x + p.y * p.y) + 2.0 * p.z; },
                     "strong_concavity");
}

ScalarField strong_concavity_rhs(double eps) {
  // X u = -2 eps x - y, Y u = -2 eps y + x, so |grad_H u|^2 = (4 eps^2 + 1)(x^2 + y^2).
  return ScalarField(
      [eps](const Point& p) {
        return (4.0 * eps * eps + 1.0 - eps) * (p.x * p.x + p.y * p.y) + 2.0 * p.z;
      },
      "strong_concavity_rhs");
}

ScalarField strong_concavity_nominal_rhs(double eps) {
  return ScalarField(
      [eps](const Point& p) { return (4.0 * eps * eps + 1.0) * (p.x * p.x + p.y * p.y) + 2.0 * p.z; },
      "strong_concavity_nominal_rhs");
}

ScalarField hconvex_right_field() {
  return ScalarField([](const Point& p) { return p.x * p.x * p.y * p.y + 2.0 * p.z * p.z; },
                     "hconvex_right_example", std::nullopt, 0.0);
}

namespace {

constexpr double kHconvexAlpha = 0.2;
constexpr double kEuclidEps = 0.5;
constexpr double kConcavityEps = 0.1;

std::vector<CorpusEntry> build_corpus() {
  std::vector<CorpusEntry> c;

  {
    CorpusEntry e;
    e.id = "one_step";
    e.description = "u = (x^2+y^2+z^2-1)^2; minimizers on the unit sphere, S[u] is the envelope";
    e.field = one_step_field();
    e.reference_envelope = ScalarField(
        [u = e.field](const Point& p) {
          return p.x * p.x + p.y * p.y + p.z * p.z <= 1.0 ? 0.0 : u(p);
        },
        "one_step_envelope");
    e.h_convex = false;
    e.z_symmetric = true;
    e.iterations_to_converge = 1;
    e.expected = {
        {"value_at_(1,0,0)", Provenance::reference, "u(1,0,0) = 0"},
        {"s_at_(0,0,0.5)", Provenance::reference, "S[u](0,0,0.5) = 0 inside the unit sphere"},
        {"envelope_iterations", Provenance::reference, "S[u] = Gamma u: converges after one application"},
        {"envelope_sup_error", Provenance::derived, "sup |S^n[u] - Gamma u| <= 5e-2 on interior nodes"},
        {"obstacle_residual", Provenance::derived, "min(-lambda*, env - u) <= 5e-2"},
    };
    c.push_back(std::move(e));
  }
  {
    CorpusEntry e;
    e.id = "two_step";
    e.description = "u = (z^2-1)^2; S must be applied twice";
    e.field = two_step_field();
    e.reference_envelope = ScalarField(
        [u = e.field](const Point& p) { return std::abs(p.z) <= 1.0 ? 0.0 : u(p); },
        "two_step_envelope");
    e.z_symmetric = true;
    e.iterations_to_converge = 2;
    e.expected = {
        {"value_at_origin", Provenance::reference, "u(0,0,0) = 1"},
        {"first_pass_axis", Provenance::reference, "S[u](0,0,z) = (z^2-1)^2"},
        {"first_pass_off_axis", Provenance::reference, "S[u] = 0 for |z| <= 1, (x,y) != 0"},
        {"second_pass_axis", Provenance::reference, "S^2[u](0,0,z) = 0 for |z| <= 1"},
        {"envelope_iterations", Provenance::reference, "Gamma u = S^2[u]"},
        {"envelope_sup_error", Provenance::derived, "sup |S^n[u] - Gamma u| <= 5e-2 on interior nodes"},
        {"obstacle_residual", Provenance::derived, "min(-lambda*, env - u) <= 5e-2"},
        {"left_right_equivalence", Provenance::reference, "S[u] = S~[u] for z-axis symmetric u"},
    };
    c.push_back(std::move(e));
  }
  {
    CorpusEntry e;
    e.id = "failure";
    e.description = "u = (x-y)z + (x-y)^2 z^2 + (x^2+y^2)^2 + z^2; S[u] is not h-convex";
    e.field = failure_field();
    e.expected = {
        {"value_at_origin", Provenance::reference, "u(0) = 0 and S[u](0) = 0"},
        {"s_at_h_t", Provenance::reference, "S[u](h_t) <= -2t^3 + 4t^6 + 17t^4 at t = 0.1"},
        {"s_at_h_t_inverse", Provenance::reference, "0 <= S[u](h_t^-1) <= 4t^4"},
        {"midpoint_defect", Provenance::reference, "S[u](h_t) + S[u](h_t^-1) < 2 S[u](0)"},
        {"midpoint_defect_t_0.09", Provenance::derived,
         "S[u](h_t) + S[u](h_t^-1) < 2 S[u](0) at t = 0.09"},
    };
    c.push_back(std::move(e));
  }
  {
    CorpusEntry e;
    e.id = "no_symmetry";
    e.description = "u = 2xz + x^2 y + x^4/4 - x^2 + 3y^2/2 solves u - Delta_H u + <(0,2), grad_H u> = f";
    e.field = no_symmetry_field();
    EquationData eq;
    eq.kind = EquationKind::linear_transport;
    eq.rhs = no_symmetry_rhs();
    eq.directions = {{0.0, 2.0}};
    e.equation = eq;
    e.extras = {{"f", no_symmetry_rhs()}};
    e.expected = {
        {"hessian_u_origin", Provenance::reference, "(grad_H^2 u)* (0) = [[-2,0],[0,3]]"},
        {"hessian_f_origin", Provenance::reference, "(grad_H^2 f)* (0) = [[0,0],[0,3]]"},
        {"u_not_hconvex", Provenance::reference, "u is not h-convex at the origin"},
        {"f_hconvex", Provenance::reference, "f is h-convex"},
        {"linear_residual", Provenance::reference, "u solves the linear equation"},
        {"midpoint_origin", Provenance::derived, "u(1,0,0) + u(-1,0,0) - 2u(0) = -3/2"},
    };
    c.push_back(std::move(e));
  }
  {
    CorpusEntry e;
    e.id = "no_symmetry2";
    e.description = "same u with |<(0,2), grad_H u>| and f containing 6|y|";
    e.field = no_symmetry_field().with_name("no_symmetry2");
    EquationData eq;
    eq.kind = EquationKind::linear_transport;
    eq.rhs = no_symmetry2_rhs();
    eq.alpha = 1.0;
    eq.beta = 1.0;
    eq.directions = {{0.0, 2.0}, {0.0, -2.0}};
    e.equation = eq;
    e.extras = {{"f", no_symmetry2_rhs()}};
    e.expected = {
        {"abs_residual_upper_half", Provenance::reference,
         "u - Delta_H u + |<(0,2), grad_H u>| = f where y >= 0"},
        {"u_not_hconvex", Provenance::reference, "u is not h-convex at the origin"},
        {"f_hconvex", Provenance::reference, "f is h-convex"},
        {"f_not_symmetric", Provenance::reference, "f is not z-axis symmetric"},
    };
    c.push_back(std::move(e));
  }
  {
    CorpusEntry e;
    e.id = "hconvex_sol";
    e.description = "u = x^2 + y^2 + x^2 y^2 + 2z^2 solves the semilinear equation with alpha = 0.2";
    e.field = hconvex_sol_field();
    e.reference_envelope = e.field.with_name("hconvex_sol_envelope");
    EquationData eq;
    eq.kind = EquationKind::semilinear;
    eq.rhs = hconvex_sol_rhs(kHconvexAlpha);
    eq.alpha = kHconvexAlpha;
    e.equation = eq;
    e.extras = {{"f", hconvex_sol_rhs(kHconvexAlpha)}};
    e.h_convex = true;
    e.z_symmetric = true;
    e.iterations_to_converge = 1;
    e.expected = {
        {"semilinear_residual", Provenance::reference, "u = alpha Delta_H u + f"},
        {"hessian_u_(1,1,0)", Provenance::derived, "(grad_H^2 u)* (1,1,0) = [[5,3],[3,5]]"},
        {"u_hconvex", Provenance::reference, "u is h-convex"},
        {"fixed_point", Provenance::reference, "S[u] = u"},
        {"symmetric", Provenance::derived, "u(x,y,z) = u(-x,-y,z)"},
    };
    c.push_back(std::move(e));
  }
  {
    CorpusEntry e;
    e.id = "euclid_convex_sol";
    e.description = "u = (1+eps)(x^2+y^2+4) + x + 2z^2 solves u = Delta_H u + f, eps = 0.5";
    e.field = euclid_convex_sol_field(kEuclidEps);
    e.reference_envelope = e.field.with_name("euclid_convex_sol_envelope");
    EquationData eq;
    eq.kind = EquationKind::semilinear;
    eq.rhs = euclid_convex_sol_rhs(kEuclidEps);
    eq.alpha = 1.0;
    e.equation = eq;
    e.extras = {{"f", euclid_convex_sol_rhs(kEuclidEps)}};
    e.h_convex = true;
    e.iterations_to_converge = 1;
    e.expected = {
        {"semilinear_residual", Provenance::reference, "u = Delta_H u + f"},
        {"euclidean_fixed_point", Provenance::trivial, "Gamma_E u = u (u is convex)"},
        {"u_hconvex", Provenance::reference, "Euclidean convexity implies h-convexity"},
    };
    c.push_back(std::move(e));
  }
  {
    CorpusEntry e;
    e.id = "strong_concavity";
    e.description = "u = -eps(x^2+y^2) + 2z solves u + |grad_H u|^2 = f, eps = 0.1";
    e.field = strong_concavity_field(kConcavityEps);
    EquationData eq;
    eq.kind = EquationKind::gradient_square;
    eq.rhs = strong_concavity_rhs(kConcavityEps);
    e.equation = eq;
    e.extras = {{"f", strong_concavity_rhs(kConcavityEps)},
                {"f_nominal", strong_concavity_nominal_rhs(kConcavityEps)}};
    e.expected = {
        {"gradient_square_residual", Provenance::derived,
         "u + |grad_H u|^2 = (4eps^2+1-eps)(x^2+y^2) + 2z"},
        {"nominal_rhs_gap", Provenance::derived,
         "the nominal f = (4eps^2+1)(x^2+y^2)+2z exceeds u + |grad_H u|^2 by eps(x^2+y^2)"},
        {"u_not_hconvex", Provenance::reference, "u is neither h-convex nor right h-convex"},
        {"f_hconvex", Provenance::reference, "f is h-convex and right h-convex"},
    };
    c.push_back(std::move(e));
  }
  {
    CorpusEntry e;
    e.id = "hconvex_right_example";
    e.description = "u = x^2 y^2 + 2z^2: h-convex and right h-convex, not Euclidean convex";
    e.field = hconvex_right_field();
    e.reference_envelope = e.field.with_name("hconvex_right_envelope");
    e.h_convex = true;
    e.z_symmetric = true;
    e.expected = {
        {"u_hconvex", Provenance::reference, "u is h-convex"},
        {"u_right_hconvex", Provenance::reference, "u is right h-convex"},
        {"midpoint_(1,1,0)", Provenance::derived, "u(p.h) + u(p.h^-1) - 2u(p) = 2 at p=(1,1,0), h=(1,-1)"},
        {"right_fixed_point", Provenance::reference, "S~[u] = u"},
    };
    c.push_back(std::move(e));
  }
  return c;
}

const std::vector<CorpusEntry>& corpus() {
  static const std::vector<CorpusEntry> entries = build_corpus();
  return entries;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> corpus_list() {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& e : corpus()) out.emplace_back(e.id, e.description);
  return out;
}

bool has_corpus_entry(const std::string& id) {
  const auto& c = corpus();
  return std::any_of(c.begin(), c.end(), [&](const CorpusEntry& e) { return e.id == id; });
}

const CorpusEntry& corpus_entry(const std::string& id) {
  for (const auto& e : corpus()) {
    if (e.id == id) return e;
  }
  throw std::out_of_range("unknown corpus id '" + id + "'");
}

double reference_envelope_value(const std::string& id, const Point& p) {
  const CorpusEntry& e = corpus_entry(id);
  if (!e.reference_envelope) throw NoReference("corpus entry '" + id + "' has no closed-form envelope");
  return (*e.reference_envelope)(p);
}

}  // namespace hconv
