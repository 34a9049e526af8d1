#pragma once

// End-to-end checks of a corpus entry against its expected facts.

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hconv/convexify.hpp"
#include "hconv/corpus.hpp"
#include "hconv/fields.hpp"

namespace hconv {

struct ReproduceConfig {
  Box box = Box::cube(2.0);
  int resolution = 41;
  WindowSpec window{4.0, 41};
  double tol = 1e-3;
  int max_iter = 50;
  /// Random points for residual and left/right checks.
  int samples = 100;
  /// Samples for h-convexity scans.
  int scan_samples = 2000;
  std::uint64_t seed = 20240611;
  double envelope_tolerance = 5e-2;
  double residual_tolerance = 1e-4;
};

/// Keys: box ([cx, cy, cz, hx, hy, hz] or a half-width), res, window
/// ([radius, samples]), tol, max_iter, samples, scan_samples, seed,
/// envelope_tolerance, residual_tolerance. Unknown keys are rejected.
ReproduceConfig reproduce_config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const ReproduceConfig& c);

struct FactResult {
  std::string name;
  Provenance provenance = Provenance::derived;
  std::string statement;
  bool passed = false;
  double measured = 0.0;
  /// Human-readable acceptance rule, e.g. "<= 0.05".
  std::string criterion;
  nlohmann::json details;
};

struct ReproduceReport {
  std::string id;
  ReproduceConfig config;
  std::vector<FactResult> facts;

  bool passed() const;
  /// Null when every fact passed.
  const FactResult* first_failure() const;
};

/// Evaluates every expected fact of the entry (a fact the pipeline does not
/// reach is reported as failed). Deterministic for a fixed config. Throws
/// std::out_of_range for an unknown id.
ReproduceReport reproduce(const std::string& id, const ReproduceConfig& config = {});

nlohmann::json to_json(const ReproduceReport& r);

/// Per-point lattice tolerance used by the left/right comparison: the
/// larger change of s_point and s_tilde_point when the lattice spacing is
/// halved, floored at 1e-9.
double left_right_lattice_tolerance(const ScalarField& f, const Point& p, const WindowSpec& w,
                                    const GrowthPolicy& growth);

}  // namespace hconv
