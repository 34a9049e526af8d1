#include "hconv/pde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "hconv/envelope.hpp"
#include "hconv/parallel.hpp"

namespace hconv {

namespace {

bool symmetric_set(const std::vector<Vec2>& dirs) {
  for (const Vec2& d : dirs) {
    const bool has_mirror = std::any_of(dirs.begin(), dirs.end(), [&](const Vec2& e) {
      return std::abs(e[0] + d[0]) <= 1e-12 && std::abs(e[1] + d[1]) <= 1e-12;
    });
    if (!has_mirror) return false;
  }
  return true;
}

}  // namespace

SemilinearSpec::SemilinearSpec(double alpha, double beta, std::vector<Vec2> directions,
                               ScalarField f)
    : alpha_(alpha), beta_(beta), directions_(std::move(directions)), f_(std::move(f)) {
  if (!(alpha_ >= 0.0) || !(beta_ >= 0.0)) {
    throw std::invalid_argument("semilinear spec needs alpha >= 0 and beta >= 0");
  }
  if (beta_ > 0.0 && directions_.empty()) {
    throw std::invalid_argument("semilinear spec with beta > 0 needs at least one direction");
  }
  if (!f_.valid()) throw std::invalid_argument("semilinear spec needs a right-hand side");
  symmetric_ = symmetric_set(directions_);
}

double support_function(std::span<const Vec2> directions, const Gradient2& g) {
  if (directions.empty()) return 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (const Vec2& d : directions) best = std::max(best, d[0] * g.x + d[1] * g.y);
  return best;
}

double horizontal_laplacian(const ScalarField& u, const Point& p, double step) {
  return symmetrized_horizontal_hessian(u, p, step).trace();
}

double semilinear_residual(const SemilinearSpec& spec, const ScalarField& u, const Point& p,
                           double step) {
  double r = u(p) - spec.f()(p);
  if (spec.alpha() != 0.0) r -= spec.alpha() * horizontal_laplacian(u, p, step);
  if (spec.beta() != 0.0) {
    r -= spec.beta() * support_function(spec.directions(), horizontal_gradient(u, p, step));
  }
  return r;
}

double linear_transport_residual(const Vec2& zeta, const ScalarField& f, const ScalarField& u,
                                 const Point& p, double step) {
  const Gradient2 g = horizontal_gradient(u, p, step);
  return u(p) - horizontal_laplacian(u, p, step) + zeta[0] * g.x + zeta[1] * g.y - f(p);
}

double linear_transport_residual(std::span<const Vec2> directions, const ScalarField& f,
                                 const ScalarField& u, const Point& p, double step) {
  const Gradient2 g = horizontal_gradient(u, p, step);
  return u(p) - horizontal_laplacian(u, p, step) + support_function(directions, g) - f(p);
}

double gradient_square_residual(const ScalarField& f, const ScalarField& u, const Point& p,
                                double step) {
  const Gradient2 g = horizontal_gradient(u, p, step);
  return u(p) + g.x * g.x + g.y * g.y - f(p);
}

ResidualFn semilinear_operator(const SemilinearSpec& spec) {
  return [spec](const ScalarField& u, const Point& p, double step) {
    return semilinear_residual(spec, u, p, step);
  };
}

SpotcheckReport supersolution_spotcheck(const ResidualFn& residual, const GridField& v,
                                        std::span<const std::size_t> sample_nodes, double step,
                                        double tol) {
  const double s = std::max(step, 2.0 * v.max_spacing());
  const ScalarField field = as_scalar_field(std::make_shared<const GridField>(v), "candidate");

  struct NodeResult {
    enum { skipped, screened, checked } state = skipped;
    double residual = 0.0;
  };
  std::vector<NodeResult> out(sample_nodes.size());
  parallel_for(sample_nodes.size(), [&](std::size_t i) {
    const std::size_t n = sample_nodes[i];
    if (n >= v.size() || !v.is_interior(n, 2)) return;
    const Point p = v.node_point(n);
    if (is_grid_kink(field, p, s)) {
      out[i].state = NodeResult::screened;
      return;
    }
    out[i].state = NodeResult::checked;
    out[i].residual = residual(field, p, s);
  });

  SpotcheckReport rep;
  rep.nodes_requested = static_cast<int>(sample_nodes.size());
  rep.min_residual = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i].state == NodeResult::screened) ++rep.nodes_screened_out;
    if (out[i].state != NodeResult::checked) continue;
    ++rep.nodes_checked;
    rep.min_residual = std::min(rep.min_residual, out[i].residual);
    if (out[i].residual < -tol) {
      rep.violations.push_back({v.node_point(sample_nodes[i]), out[i].residual});
    }
  }
  if (rep.nodes_checked == 0) rep.min_residual = 0.0;
  return rep;
}

SpotcheckReport supersolution_spotcheck(const SemilinearSpec& spec, const GridField& v,
                                        std::span<const std::size_t> sample_nodes, double step,
                                        double tol) {
  return supersolution_spotcheck(semilinear_operator(spec), v, sample_nodes, step, tol);
}

}  // namespace hconv
