#include "hconv/differential.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "hconv/parallel.hpp"

namespace hconv {

namespace {

void check_step(double step) {
  if (!(step > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
}

// Restriction t -> f along the group line through p in direction (da, db).
struct Line {
  const ScalarField& f;
  Side side;
  Point p;
  double da;
  double db;

  double operator()(double t) const { return f(plane_point(side, p, {t * da, t * db})); }
};

// Five-point stencils; exact for polynomials of degree <= 4 (first
// derivative) and <= 5 (second derivative).
double first_derivative(const Line& g, double s) {
  return (-g(2.0 * s) + 8.0 * g(s) - 8.0 * g(-s) + g(-2.0 * s)) / (12.0 * s);
}

double second_derivative(const Line& g, double s, double g0) {
  return (-g(2.0 * s) + 16.0 * g(s) - 30.0 * g0 + 16.0 * g(-s) - g(-2.0 * s)) / (12.0 * s * s);
}

}  // namespace

double Sym2::least_eigenvalue() const {
  const double mean = 0.5 * (a11 + a22);
  const double half_diff = 0.5 * (a11 - a22);
  return mean - std::hypot(half_diff, a12);
}

double Sym2::greatest_eigenvalue() const {
  const double mean = 0.5 * (a11 + a22);
  const double half_diff = 0.5 * (a11 - a22);
  return mean + std::hypot(half_diff, a12);
}

Gradient2 horizontal_gradient(Side side, const ScalarField& f, const Point& p, double step) {
  check_step(step);
  return {first_derivative(Line{f, side, p, 1.0, 0.0}, step),
          first_derivative(Line{f, side, p, 0.0, 1.0}, step)};
}

Sym2 symmetrized_hessian(Side side, const ScalarField& f, const Point& p, double step) {
  check_step(step);
  const double f0 = f(p);
  Sym2 h;
  h.a11 = second_derivative(Line{f, side, p, 1.0, 0.0}, step, f0);
  h.a22 = second_derivative(Line{f, side, p, 0.0, 1.0}, step, f0);
  const double diag = second_derivative(Line{f, side, p, 1.0, 1.0}, step, f0);
  h.a12 = 0.5 * (diag - h.a11 - h.a22);
  return h;
}

Gradient2 horizontal_gradient(const ScalarField& f, const Point& p, double step) {
  return horizontal_gradient(Side::left, f, p, step);
}

Sym2 symmetrized_horizontal_hessian(const ScalarField& f, const Point& p, double step) {
  return symmetrized_hessian(Side::left, f, p, step);
}

Gradient2 right_horizontal_gradient(const ScalarField& f, const Point& p, double step) {
  return horizontal_gradient(Side::right, f, p, step);
}

Sym2 right_symmetrized_hessian(const ScalarField& f, const Point& p, double step) {
  return symmetrized_hessian(Side::right, f, p, step);
}

double least_horizontal_eigenvalue(const ScalarField& f, const Point& p, double step) {
  return symmetrized_horizontal_hessian(f, p, step).least_eigenvalue();
}

double midpoint_check(const ScalarField& f, const Point& p, const PlaneCoord& h) {
  return f(left_plane_point(p, h)) + f(left_plane_point(p, {-h.a, -h.b})) - 2.0 * f(p);
}

double right_midpoint_check(const ScalarField& f, const Point& p, const PlaneCoord& h) {
  return f(right_plane_point(p, h)) + f(right_plane_point(p, {-h.a, -h.b})) - 2.0 * f(p);
}

bool hessian_is_unstable(Side side, const ScalarField& f, const Point& p, double step,
                         double ratio) {
  const auto norm = [](const Sym2& s) {
    return std::sqrt(s.a11 * s.a11 + 2.0 * s.a12 * s.a12 + s.a22 * s.a22);
  };
  const auto differ = [&](const Sym2& a, const Sym2& b) {
    const Sym2 d{a.a11 - b.a11, a.a12 - b.a12, a.a22 - b.a22};
    return norm(d) > 0.5 * std::max({norm(a), norm(b), 1e-3});
  };
  // Two stencils straddling a kink can agree by accident; a third level
  // catches kinks the first two miss. A Hessian growing like 1/step (a point
  // right on the kink) sits exactly at the threshold for one ratio but not
  // across two.
  const Sym2 a = symmetrized_hessian(side, f, p, step);
  const Sym2 b = symmetrized_hessian(side, f, p, ratio * step);
  if (differ(a, b)) return true;
  const Sym2 c = symmetrized_hessian(side, f, p, ratio * ratio * step);
  return differ(b, c) || differ(a, c);
}

ConvexityReport hconvexity_scan(const ScalarField& f, const Box& region, const ScanOptions& opts) {
  if (opts.n_samples < 1) throw std::invalid_argument("hconvexity_scan needs n_samples >= 1");
  check_step(opts.step);

  struct Sample {
    Point p;
    PlaneCoord h;
  };
  std::vector<Sample> samples(static_cast<std::size_t>(opts.n_samples));
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> ux(region.lo(0), region.hi(0));
  std::uniform_real_distribution<double> uy(region.lo(1), region.hi(1));
  std::uniform_real_distribution<double> uz(region.lo(2), region.hi(2));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (auto& s : samples) {
    s.p = {ux(rng), uy(rng), uz(rng)};
    const double r = opts.h_radius * std::sqrt(unit(rng));
    const double th = 2.0 * M_PI * unit(rng);
    s.h = {r * std::cos(th), r * std::sin(th)};
  }

  struct Outcome {
    double midpoint;
    double eigen;
    bool kink;
  };
  std::vector<Outcome> out(samples.size());
  parallel_for(samples.size(), [&](std::size_t i) {
    const auto& s = samples[i];
    out[i].midpoint = opts.side == Side::left ? midpoint_check(f, s.p, s.h)
                                              : right_midpoint_check(f, s.p, s.h);
    out[i].kink = hessian_is_unstable(opts.side, f, s.p, opts.step);
    out[i].eigen = symmetrized_hessian(opts.side, f, s.p, opts.step).least_eigenvalue();
  });

  ConvexityReport rep;
  rep.samples_checked = opts.n_samples;
  bool first = true;
  const auto consider = [&](double v, const Point& p, const char* test) {
    const auto key = std::tie(p.x, p.y, p.z);
    const auto best = std::tie(rep.worst_point.x, rep.worst_point.y, rep.worst_point.z);
    if (first || v < rep.worst_value || (v == rep.worst_value && key < best)) {
      rep.worst_value = v;
      rep.worst_point = p;
      rep.worst_test = test;
      first = false;
    }
  };
  for (std::size_t i = 0; i < samples.size(); ++i) {
    consider(out[i].midpoint, samples[i].p, "midpoint");
    if (out[i].kink) {
      ++rep.kink_samples;
    } else {
      consider(out[i].eigen, samples[i].p, "eigenvalue");
    }
  }
  rep.pass = !(rep.worst_value < -opts.tol);
  return rep;
}

}  // namespace hconv
