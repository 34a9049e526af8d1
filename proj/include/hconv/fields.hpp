#pragma once

// Scalar functions on H: analytic oracles and grid-backed trilinear fields.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hconv/heisenberg.hpp"

namespace hconv {

/// Declares u(p) >= c1 * |p|_E^exponent - c2 for every p.
/// Coercivity in the superlinear sense needs exponent > 1.
struct CoercivityCertificate {
  double c1 = 0.0;
  double c2 = 0.0;
  double exponent = 1.0;

  double minorant(const Point& p) const;
  bool superlinear() const { return c1 > 0.0 && exponent > 1.0; }
};

class ScalarField {
 public:
  using Eval = std::function<double(const Point&)>;

  ScalarField() = default;
  explicit ScalarField(Eval eval, std::string name = {},
                       std::optional<CoercivityCertificate> certificate = std::nullopt,
                       std::optional<double> lower_bound = std::nullopt);

  double operator()(const Point& p) const { return eval_(p); }
  double evaluate(const Point& p) const { return eval_(p); }

  const std::string& name() const { return name_; }
  const std::optional<CoercivityCertificate>& certificate() const { return certificate_; }
  std::optional<double> lower_bound() const { return lower_bound_; }
  bool valid() const { return static_cast<bool>(eval_); }

  ScalarField with_name(std::string name) const;

  /// Attaches a certificate after checking it at `samples` pseudo-random
  /// points in [-radius, radius]^3. Throws std::invalid_argument on a
  /// violated bound.
  ScalarField certified(const CoercivityCertificate& cert, double radius = 10.0,
                        int samples = 4000, std::uint64_t seed = 7) const;
  ScalarField without_certificate() const;

 private:
  Eval eval_;
  std::string name_;
  std::optional<CoercivityCertificate> certificate_;
  std::optional<double> lower_bound_;
};

/// Returns the largest violation of the certificate found by sampling
/// (<= 0 when the bound holds on every sample).
double certificate_violation(const ScalarField& f, const CoercivityCertificate& cert,
                             double radius, int samples, std::uint64_t seed);

/// Sum of coef * x^ex * y^ey * z^ez * |y|^eabs_y terms.
struct Monomial {
  double coef = 0.0;
  int ex = 0;
  int ey = 0;
  int ez = 0;
  int eabs_y = 0;
};

ScalarField polynomial_field(std::vector<Monomial> terms, std::string name = {});

ScalarField constant_field(double value);

/// Axis-aligned box given by its center and per-axis half-widths.
struct Box {
  Point center;
  std::array<double, 3> half{1.0, 1.0, 1.0};

  double lo(int axis) const;
  double hi(int axis) const;
  bool contains(const Point& p, double slack = 0.0) const;
  static Box cube(double half_width) { return {{}, {half_width, half_width, half_width}}; }
};

struct Resolution {
  int nx = 3;
  int ny = 3;
  int nz = 3;

  std::size_t count() const {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny) *
           static_cast<std::size_t>(nz);
  }
  static Resolution uniform(int n) { return {n, n, n}; }
};

enum class FillMode {
  obstacle,  // the sampled field itself, falls back to clamp when none is attached
  minorant,  // certificate minorant, falls back to clamp without a certificate
  clamp,     // value at the nearest point of the box
};

std::string to_string(FillMode mode);
FillMode fill_mode_from_string(const std::string& s);

/// Values on an axis-aligned lattice, stored row-major with x fastest.
class GridField {
 public:
  /// 3x3x3 zeros on the unit cube.
  GridField();
  GridField(Box box, Resolution res, std::vector<double> values, FillMode fill,
            std::optional<CoercivityCertificate> certificate = std::nullopt);

  const Box& box() const { return box_; }
  const Resolution& resolution() const { return res_; }
  FillMode fill_mode() const { return fill_; }
  const std::optional<CoercivityCertificate>& certificate() const { return certificate_; }
  /// Field evaluated outside the box in obstacle mode.
  const std::optional<ScalarField>& exterior() const { return exterior_; }
  GridField with_exterior(ScalarField exterior) const;
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& mutable_values() { return values_; }

  std::size_t size() const { return values_.size(); }
  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(res_.nx) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(res_.ny) * static_cast<std::size_t>(k));
  }
  std::array<int, 3> node_of(std::size_t flat) const;
  double spacing(int axis) const { return spacing_[axis]; }
  double max_spacing() const;
  Point node_point(int i, int j, int k) const;
  Point node_point(std::size_t flat) const;
  double at(int i, int j, int k) const { return values_[index(i, j, k)]; }

  /// Trilinear inside the box (boundary included); the fill mode applies
  /// outside.
  double interpolate(const Point& p) const;

  /// True when the node lies at least `margin` cells away from every face.
  bool is_interior(std::size_t flat, int margin) const;

  GridField with_values(std::vector<double> values) const;

 private:
  double interpolate_inside(double tx, double ty, double tz) const;

  Box box_;
  Resolution res_;
  std::vector<double> values_;
  FillMode fill_;
  std::optional<CoercivityCertificate> certificate_;
  std::optional<ScalarField> exterior_;
  std::array<double, 3> spacing_{};
};

/// The default fill is obstacle with `f` attached as the exterior. Throws
/// std::invalid_argument for a resolution below 3 on some axis or a
/// degenerate box.
GridField sample_to_grid(const ScalarField& f, const Box& box, Resolution res,
                         std::optional<FillMode> fill = std::nullopt);

double interpolate(const GridField& g, const Point& p);

/// Bound on |interpolate(sample_to_grid(f)) - f| inside the box for f with
/// |d^2 f / dx_a^2| <= second_derivative_bounds[a]: sum_a h_a^2 M_a / 8.
double trilinear_error_bound(const GridField& g, const std::array<double, 3>& second_derivative_bounds);

/// Wraps a grid as an evaluation oracle (shares the grid).
ScalarField as_scalar_field(std::shared_ptr<const GridField> grid, std::string name = "grid");

/// p -> f(-x, -y, z).
ScalarField reflect_z_axis(const ScalarField& f);

/// (f + reflect_z_axis(f)) / 2.
ScalarField z_symmetrize(const ScalarField& f);

/// max |f(p) - f(-x, -y, z)| over `n_samples` pseudo-random points of `box`.
double symmetry_defect(const ScalarField& f, const Box& box, int n_samples,
                       std::uint64_t seed = 11);

/// Same, over the nodes of a grid.
double symmetry_defect(const GridField& g);

}  // namespace hconv
