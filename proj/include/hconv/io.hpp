#pragma once

// JSON reports, the on-disk grid format and field/spec documents.
//
// Grid format: a JSON header
//   {"format": "hconv-grid", "version": 1,
//    "box": {"center": [cx, cy, cz], "half": [hx, hy, hz]},
//    "resolution": [nx, ny, nz], "order": "x-fastest",
//    "fill_mode": "obstacle" | "minorant" | "clamp",
//    "certificate": {"c1": .., "c2": .., "exponent": ..} | null,
//    "exterior_field": <field document> | null,
//    "payload": {"encoding": "csv" | "f64le", "file": <name next to the header>}}
// and a payload holding nx*ny*nz values, x fastest then y then z: one value
// per line for csv, raw little-endian IEEE-754 doubles for f64le.

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "hconv/convexify.hpp"
#include "hconv/corpus.hpp"
#include "hconv/differential.hpp"
#include "hconv/envelope.hpp"
#include "hconv/fields.hpp"
#include "hconv/pde.hpp"

namespace hconv {

using nlohmann::json;

json to_json(const Point& p);
json to_json(const Sym2& s);
json to_json(const ConvexCombination& c);
json to_json(const ConvexityReport& r);
json to_json(const ObstacleResidual& r);
json to_json(const CompareResult& r);
json to_json(const SpotcheckReport& r);
/// The final grid is not embedded; write it with write_grid.
json to_json(const EnvelopeReport& r);

enum class PayloadEncoding { csv, f64le };

std::string to_string(PayloadEncoding e);
PayloadEncoding payload_encoding_from_string(const std::string& s);

/// Writes the header to `header_path` and the payload next to it (same stem,
/// extension .csv or .f64). The exterior field is recorded only when it is a
/// corpus field or a named corpus extra; otherwise reading it back yields a
/// clamp fill.
void write_grid(const GridField& g, const std::filesystem::path& header_path,
                PayloadEncoding encoding);

/// Throws std::runtime_error on malformed headers or payloads.
GridField read_grid(const std::filesystem::path& header_path);

/// Field documents:
///   "one_step"                       corpus field
///   "no_symmetry/f"                  named extra of a corpus entry
///   {"corpus": "no_symmetry", "extra": "f"}
///   {"name": "..", "terms": [{"coef": c, "x": i, "y": j, "z": k, "abs_y": m}, ..],
///    "certificate": {"c1": .., "c2": .., "exponent": ..}}
///   {"grid": "path/to/header.json"}  (relative to `base_dir`)
ScalarField field_from_json(const json& doc,
                            const std::filesystem::path& base_dir = std::filesystem::path());

/// Document naming a corpus field or extra by the field's name; empty for
/// other fields.
std::optional<json> field_document(const ScalarField& f);

/// Command-line field argument: a corpus id, "id/extra", a grid header or a
/// field document file.
ScalarField resolve_field(const std::string& arg);

/// {"alpha": a, "beta": b, "directions": [[z1, z2], ..], "f": <field document>}
SemilinearSpec semilinear_spec_from_json(const json& doc,
                                         const std::filesystem::path& base_dir = {});

/// Spec document with an optional "equation": "semilinear" (default),
/// "linear_transport" or "gradient_square"; the transport form uses the
/// directions (max over them) and ignores alpha and beta.
EquationData equation_from_json(const json& doc, const std::filesystem::path& base_dir = {});

json read_json_file(const std::filesystem::path& path);

}  // namespace hconv
