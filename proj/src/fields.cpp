#include "hconv/fields.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <utility>

namespace hconv {

double CoercivityCertificate::minorant(const Point& p) const {
  return c1 * std::pow(euclidean_norm(p), exponent) - c2;
}

ScalarField::ScalarField(Eval eval, std::string name,
                         std::optional<CoercivityCertificate> certificate,
                         std::optional<double> lower_bound)
    : eval_(std::move(eval)),
      name_(std::move(name)),
      certificate_(certificate),
      lower_bound_(lower_bound) {}

ScalarField ScalarField::with_name(std::string name) const {
  ScalarField out = *this;
  out.name_ = std::move(name);
  return out;
}

ScalarField ScalarField::certified(const CoercivityCertificate& cert, double radius, int samples,
                                   std::uint64_t seed) const {
  if (!(cert.c1 > 0.0) || !(cert.exponent >= 1.0)) {
    throw std::invalid_argument("certificate needs c1 > 0 and exponent >= 1");
  }
  const double worst = certificate_violation(*this, cert, radius, samples, seed);
  if (worst > 1e-9) {
    throw std::invalid_argument("coercivity certificate violated for field '" + name_ +
                                "' by " + std::to_string(worst));
  }
  ScalarField out = *this;
  out.certificate_ = cert;
  return out;
}

ScalarField ScalarField::without_certificate() const {
  ScalarField out = *this;
  out.certificate_.reset();
  return out;
}

double certificate_violation(const ScalarField& f, const CoercivityCertificate& cert,
                             double radius, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = -std::numeric_limits<double>::infinity();
  // Half the samples are spread over the cube, half concentrate near the
  // origin where minorants tend to be tight.
  for (int s = 0; s < samples; ++s) {
    const double r = (s % 2 == 0) ? radius : std::min(radius, 2.0);
    std::uniform_real_distribution<double> u(-r, r);
    const Point p{u(rng), u(rng), u(rng)};
    worst = std::max(worst, cert.minorant(p) - f(p));
  }
  return worst;
}

ScalarField polynomial_field(std::vector<Monomial> terms, std::string name) {
  return ScalarField(
      [terms = std::move(terms)](const Point& p) {
        double sum = 0.0;
        for (const Monomial& m : terms) {
          double v = m.coef;
          for (int e = 0; e < m.ex; ++e) v *= p.x;
          for (int e = 0; e < m.ey; ++e) v *= p.y;
          for (int e = 0; e < m.ez; ++e) v *= p.z;
          for (int e = 0; e < m.eabs_y; ++e) v *= std::abs(p.y);
          sum += v;
        }
        return sum;
      },
      std::move(name));
}

ScalarField constant_field(double value) {
  return ScalarField([value](const Point&) { return value; }, "constant", std::nullopt, value);
}

double Box::lo(int axis) const {
  const double c[3] = {center.x, center.y, center.z};
  return c[axis] - half[axis];
}

double Box::hi(int axis) const {
  const double c[3] = {center.x, center.y, center.z};
  return c[axis] + half[axis];
}

bool Box::contains(const Point& p, double slack) const {
  const double v[3] = {p.x, p.y, p.z};
  for (int a = 0; a < 3; ++a) {
    if (v[a] < lo(a) - slack || v[a] > hi(a) + slack) return false;
  }
  return true;
}

std::string to_string(FillMode mode) {
  switch (mode) {
    case FillMode::obstacle:
      return "obstacle";
    case FillMode::minorant:
      return "minorant";
    case FillMode::clamp:
      return "clamp";
  }
  return "clamp";
}

FillMode fill_mode_from_string(const std::string& s) {
  if (s == "obstacle") return FillMode::obstacle;
  if (s == "minorant") return FillMode::minorant;
  if (s == "clamp") return FillMode::clamp;
  throw std::invalid_argument("unknown fill mode '" + s + "'");
}

GridField::GridField()
    : GridField(Box{}, Resolution{}, std::vector<double>(27, 0.0), FillMode::clamp) {}

GridField::GridField(Box box, Resolution res, std::vector<double> values, FillMode fill,
                     std::optional<CoercivityCertificate> certificate)
    : box_(box), res_(res), values_(std::move(values)), fill_(fill), certificate_(certificate) {
  if (res_.nx < 3 || res_.ny < 3 || res_.nz < 3) {
    throw std::invalid_argument("grid resolution must be at least 3 per axis");
  }
  for (int a = 0; a < 3; ++a) {
    if (!(box_.half[a] > 0.0) || !std::isfinite(box_.half[a])) {
      throw std::invalid_argument("grid box must have positive finite half-widths");
    }
  }
  if (values_.size() != res_.count()) {
    throw std::invalid_argument("grid value count does not match resolution");
  }
  const int n[3] = {res_.nx, res_.ny, res_.nz};
  for (int a = 0; a < 3; ++a) spacing_[a] = 2.0 * box_.half[a] / (n[a] - 1);
}

std::array<int, 3> GridField::node_of(std::size_t flat) const {
  const auto nx = static_cast<std::size_t>(res_.nx);
  const auto ny = static_cast<std::size_t>(res_.ny);
  return {static_cast<int>(flat % nx), static_cast<int>((flat / nx) % ny),
          static_cast<int>(flat / (nx * ny))};
}

double GridField::max_spacing() const {
  return std::max({spacing_[0], spacing_[1], spacing_[2]});
}

Point GridField::node_point(int i, int j, int k) const {
  // Offsets from the center keep symmetric boxes exactly symmetric.
  const double ci = 0.5 * (res_.nx - 1);
  const double cj = 0.5 * (res_.ny - 1);
  const double ck = 0.5 * (res_.nz - 1);
  return {box_.center.x + (i - ci) * spacing_[0], box_.center.y + (j - cj) * spacing_[1],
          box_.center.z + (k - ck) * spacing_[2]};
}

Point GridField::node_point(std::size_t flat) const {
  const auto n = node_of(flat);
  return node_point(n[0], n[1], n[2]);
}

bool GridField::is_interior(std::size_t flat, int margin) const {
  const auto n = node_of(flat);
  const int r[3] = {res_.nx, res_.ny, res_.nz};
  for (int a = 0; a < 3; ++a) {
    if (n[a] < margin || n[a] > r[a] - 1 - margin) return false;
  }
  return true;
}

GridField GridField::with_values(std::vector<double> values) const {
  GridField out(box_, res_, std::move(values), fill_, certificate_);
  out.exterior_ = exterior_;
  return out;
}

GridField GridField::with_exterior(ScalarField exterior) const {
  GridField out = *this;
  out.exterior_ = std::move(exterior);
  return out;
}

double GridField::interpolate_inside(double tx, double ty, double tz) const {
  const auto cell = [](double t, int n, int& i0, double& w) {
    // Snap lattice coordinates that are integral up to rounding.
    const double r = std::round(t);
    if (std::abs(t - r) < 1e-9) t = r;
    if (t <= 0.0) {
      i0 = 0;
      w = 0.0;
      return;
    }
    if (t >= n - 1) {
      i0 = n - 2;
      w = 1.0;
      return;
    }
    i0 = std::min(static_cast<int>(t), n - 2);
    w = t - i0;
  };
  int i, j, k;
  double wx, wy, wz;
  cell(tx, res_.nx, i, wx);
  cell(ty, res_.ny, j, wy);
  cell(tz, res_.nz, k, wz);

  const std::size_t sx = 1;
  const std::size_t sy = static_cast<std::size_t>(res_.nx);
  const std::size_t sz = sy * static_cast<std::size_t>(res_.ny);
  const double* v = values_.data() + index(i, j, k);

  // Exact node hits return the stored value untouched.
  if (wx == 0.0 && wy == 0.0 && wz == 0.0) return v[0];

  const double c00 = v[0] * (1.0 - wx) + v[sx] * wx;
  const double c10 = v[sy] * (1.0 - wx) + v[sy + sx] * wx;
  const double c01 = v[sz] * (1.0 - wx) + v[sz + sx] * wx;
  const double c11 = v[sz + sy] * (1.0 - wx) + v[sz + sy + sx] * wx;
  const double c0 = c00 * (1.0 - wy) + c10 * wy;
  const double c1 = c01 * (1.0 - wy) + c11 * wy;
  return c0 * (1.0 - wz) + c1 * wz;
}

double GridField::interpolate(const Point& p) const {
  const double tx = (p.x - box_.lo(0)) / spacing_[0];
  const double ty = (p.y - box_.lo(1)) / spacing_[1];
  const double tz = (p.z - box_.lo(2)) / spacing_[2];
  // Relative slack so that nodes on the faces count as inside.
  constexpr double slack = 1e-9;
  const bool inside = tx >= -slack && tx <= res_.nx - 1 + slack && ty >= -slack &&
                      ty <= res_.ny - 1 + slack && tz >= -slack && tz <= res_.nz - 1 + slack;
  if (inside) return interpolate_inside(tx, ty, tz);
  if (fill_ == FillMode::obstacle && exterior_) return (*exterior_)(p);
  if (fill_ == FillMode::minorant && certificate_) return certificate_->minorant(p);
  return interpolate_inside(tx, ty, tz);
}

GridField sample_to_grid(const ScalarField& f, const Box& box, Resolution res,
                         std::optional<FillMode> fill) {
  if (res.nx < 3 || res.ny < 3 || res.nz < 3) {
    throw std::invalid_argument("grid resolution must be at least 3 per axis");
  }
  const FillMode mode = fill.value_or(FillMode::obstacle);
  GridField g(box, res, std::vector<double>(res.count(), 0.0), mode, f.certificate());
  auto& v = g.mutable_values();
  for (std::size_t n = 0; n < v.size(); ++n) v[n] = f(g.node_point(n));
  return mode == FillMode::obstacle ? g.with_exterior(f) : g;
}

double interpolate(const GridField& g, const Point& p) { return g.interpolate(p); }

double trilinear_error_bound(const GridField& g, const std::array<double, 3>& second_derivative_bounds) {
  double b = 0.0;
  for (int a = 0; a < 3; ++a) b += g.spacing(a) * g.spacing(a) * second_derivative_bounds[a] / 8.0;
  return b;
}

ScalarField as_scalar_field(std::shared_ptr<const GridField> grid, std::string name) {
  auto cert = grid->certificate();
  std::optional<double> lower;
  if (!grid->values().empty()) {
    lower = *std::min_element(grid->values().begin(), grid->values().end());
    if (cert && grid->fill_mode() == FillMode::minorant) lower = std::min(*lower, -cert->c2);
    if (grid->fill_mode() == FillMode::obstacle && grid->exterior()) {
      const auto& ext = *grid->exterior();
      if (ext.lower_bound()) {
        lower = std::min(*lower, *ext.lower_bound());
      } else if (ext.certificate()) {
        lower = std::min(*lower, -ext.certificate()->c2);
      } else {
        lower.reset();
      }
    }
  }
  return ScalarField([g = std::move(grid)](const Point& p) { return g->interpolate(p); },
                     std::move(name), cert, lower);
}

ScalarField reflect_z_axis(const ScalarField& f) {
  return ScalarField([f](const Point& p) { return f(reflect_z(p)); }, f.name() + "_reflected",
                     f.certificate(), f.lower_bound());
}

ScalarField z_symmetrize(const ScalarField& f) {
  return ScalarField([f](const Point& p) { return 0.5 * (f(p) + f(reflect_z(p))); },
                     f.name() + "_zsym", f.certificate(), f.lower_bound());
}

double symmetry_defect(const ScalarField& f, const Box& box, int n_samples, std::uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("symmetry_defect needs at least one sample");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(box.lo(0), box.hi(0));
  std::uniform_real_distribution<double> uy(box.lo(1), box.hi(1));
  std::uniform_real_distribution<double> uz(box.lo(2), box.hi(2));
  double worst = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    const Point p{ux(rng), uy(rng), uz(rng)};
    worst = std::max(worst, std::abs(f(p) - f(reflect_z(p))));
  }
  return worst;
}

double symmetry_defect(const GridField& g) {
  const Box& b = g.box();
  const bool mirrored_lattice = b.center.x == 0.0 && b.center.y == 0.0;
  const Resolution& r = g.resolution();
  double worst = 0.0;
  for (std::size_t n = 0; n < g.size(); ++n) {
    double mirror;
    if (mirrored_lattice) {
      const auto ijk = g.node_of(n);
      mirror = g.at(r.nx - 1 - ijk[0], r.ny - 1 - ijk[1], ijk[2]);
    } else {
      mirror = g.interpolate(reflect_z(g.node_point(n)));
    }
    worst = std::max(worst, std::abs(g.values()[n] - mirror));
  }
  return worst;
}

}  // namespace hconv
