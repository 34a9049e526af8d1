#pragma once

// Built-in worked examples with closed-form reference data.

#include <optional>
#include <string>
#include <vector>

#include "hconv/fields.hpp"
#include "hconv/pde.hpp"

namespace hconv {

enum class Provenance { reference, trivial, derived };

const char* to_string(Provenance p);

struct ExpectedFact {
  std::string name;
  Provenance provenance;
  std::string statement;
};

enum class EquationKind { none, semilinear, linear_transport, gradient_square };

const char* to_string(EquationKind kind);

struct EquationData {
  EquationKind kind = EquationKind::none;
  /// Right-hand side f.
  ScalarField rhs;
  /// Semilinear coefficients; for linear transport only `directions` is
  /// used (one entry, or a +-zeta pair for the absolute-value form).
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<Vec2> directions;

  SemilinearSpec semilinear() const;
};

struct CorpusEntry {
  std::string id;
  std::string description;
  ScalarField field;
  std::optional<ScalarField> reference_envelope;
  std::optional<EquationData> equation;
  /// Auxiliary named fields (for example the right-hand side checked for
  /// h-convexity).
  std::vector<std::pair<std::string, ScalarField>> extras;
  bool h_convex = false;
  bool z_symmetric = false;
  std::optional<int> iterations_to_converge;
  std::vector<ExpectedFact> expected;
};

/// Stable order.
std::vector<std::pair<std::string, std::string>> corpus_list();

/// Throws std::out_of_range for an unknown id.
const CorpusEntry& corpus_entry(const std::string& id);

bool has_corpus_entry(const std::string& id);

/// Throws NoReference when the entry has no closed-form envelope.
double reference_envelope_value(const std::string& id, const Point& p);

// Field builders for the individual examples.
ScalarField one_step_field();
ScalarField two_step_field();
ScalarField failure_field();
ScalarField no_symmetry_field();
ScalarField no_symmetry_rhs();
ScalarField no_symmetry2_rhs();
ScalarField hconvex_sol_field();
ScalarField hconvex_sol_rhs(double alpha);
ScalarField euclid_convex_sol_field(double eps);
ScalarField euclid_convex_sol_rhs(double eps);
ScalarField strong_concavity_field(double eps);
/// u + |grad_H u|^2 computed for strong_concavity_field.
ScalarField strong_concavity_rhs(double eps);
/// The right-hand side as originally given with the example,
/// (4 eps^2 + 1)(x^2 + y^2) + 2z; it is not consistent with u.
ScalarField strong_concavity_nominal_rhs(double eps);
ScalarField hconvex_right_field();

}  // namespace hconv
