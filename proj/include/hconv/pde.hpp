#pragma once

// Finite-difference residuals of the sub-elliptic equations
//   u = alpha Delta_H u + beta sup_{zeta in A} <zeta, grad_H u> + f      (semilinear)
//   u - Delta_H u + <zeta, grad_H u> = f                                  (linear transport)
//   u + |grad_H u|^2 = f                                                  (gradient square)

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hconv/differential.hpp"
#include "hconv/fields.hpp"

namespace hconv {

using Vec2 = std::array<double, 2>;

/// A is stored through its extreme points; the support function
/// sup_{zeta in A} <zeta, g> is the max over them.
class SemilinearSpec {
 public:
  SemilinearSpec(double alpha, double beta, std::vector<Vec2> directions, ScalarField f);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  const std::vector<Vec2>& directions() const { return directions_; }
  const ScalarField& f() const { return f_; }
  /// A is invariant under zeta -> -zeta.
  bool symmetric() const { return symmetric_; }

 private:
  double alpha_;
  double beta_;
  std::vector<Vec2> directions_;
  ScalarField f_;
  bool symmetric_;
};

/// max over the listed directions of <zeta, g> (0 for an empty list).
double support_function(std::span<const Vec2> directions, const Gradient2& g);

double horizontal_laplacian(const ScalarField& u, const Point& p, double step = kDefaultStep);

/// u - alpha Delta_H u - beta max_zeta <zeta, grad_H u> - f.
double semilinear_residual(const SemilinearSpec& spec, const ScalarField& u, const Point& p,
                           double step = kDefaultStep);

/// u - Delta_H u + <zeta, grad_H u> - f.
double linear_transport_residual(const Vec2& zeta, const ScalarField& f, const ScalarField& u,
                                 const Point& p, double step = kDefaultStep);

/// u - Delta_H u + max_{zeta in A} <zeta, grad_H u> - f; with A = {zeta, -zeta}
/// the transport term is |<zeta, grad_H u>|.
double linear_transport_residual(std::span<const Vec2> directions, const ScalarField& f,
                                 const ScalarField& u, const Point& p,
                                 double step = kDefaultStep);

/// u + |grad_H u|^2 - f.
double gradient_square_residual(const ScalarField& f, const ScalarField& u, const Point& p,
                                double step = kDefaultStep);

/// Residual callback for a general operator F(p, u, grad_H u, (grad_H^2 u)*);
/// a supersolution has residual >= 0.
using ResidualFn = std::function<double(const ScalarField& u, const Point& p, double step)>;

ResidualFn semilinear_operator(const SemilinearSpec& spec);

struct SpotcheckViolation {
  Point node;
  double residual = 0.0;
};

struct SpotcheckReport {
  int nodes_requested = 0;
  int nodes_checked = 0;
  int nodes_screened_out = 0;
  double min_residual = 0.0;
  std::vector<SpotcheckViolation> violations;

  bool passed() const { return violations.empty(); }
};

/// Evaluates the residual at the given grid nodes, skipping kink nodes
/// (see is_grid_kink) and nodes closer than two cells to the boundary; reports
/// residual < -tol as a violation. The step is clamped to at least twice the
/// grid spacing.
SpotcheckReport supersolution_spotcheck(const ResidualFn& residual, const GridField& v,
                                        std::span<const std::size_t> sample_nodes, double step,
                                        double tol);

SpotcheckReport supersolution_spotcheck(const SemilinearSpec& spec, const GridField& v,
                                        std::span<const std::size_t> sample_nodes, double step,
                                        double tol);

}  // namespace hconv
