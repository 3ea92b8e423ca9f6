#pragma once

// JSON schemas:
//   VectorTuple       {"k": 2, "m": 3, "rows": [[1, 2, 2], [2, 0, 0]]}
//   GramMatrix        {"k": 2, "lower": [u11, u21, u22]}      packed, one-based names
//   TriangularFactor  {"k": 2, "m": 3, "lower": [w11, w21, w22]}
//   EulerAngles       {"m": 3, "theta": [t1, t2]}             radians
//   RotationMatrix    [[a11, a12, ...], ...]                  row-major
//   AngleSchedule     {"k": 2, "m": 3, "theta": {"1,1": ..., "1,2": ..., "2,1": ...},
//                      "reflection": false}                   one-based (i,p)
//
// Doubles are written with 17 significant digits; non-finite values are null.

#include <iosfwd>
#include <json.hpp>

#include "hilbert/euler.hpp"
#include "hilbert/integrator.hpp"
#include "hilbert/linalg.hpp"
#include "hilbert/measure.hpp"
#include "hilbert/reduction.hpp"

namespace hilbert {

using Json = nlohmann::json;

Json to_json(const VectorTuple& v);
Json to_json(const GramMatrix& g);
Json to_json(const TriangularFactor& w);
Json to_json(const EulerAngles& a);
Json to_json(const Matrix& a);
Json to_json(const AngleSchedule& s);
Json to_json(const DensityValue& d);
Json to_json(const IntegralEstimate& e);

// Parsers throw Error(kInvalidInput) on schema violations.
VectorTuple vector_tuple_from_json(const Json& j);
GramMatrix gram_matrix_from_json(const Json& j);
TriangularFactor triangular_factor_from_json(const Json& j);
EulerAngles euler_angles_from_json(const Json& j);
Matrix matrix_from_json(const Json& j);
AngleSchedule angle_schedule_from_json(const Json& j);

/// Serializes with 17 significant digits per double. indent < 0 gives a
/// single line.
void write_json(std::ostream& out, const Json& j, int indent = 2);
std::string format_json(const Json& j, int indent = 2);

/// 17-significant-digit rendering shared with the CSV writers.
std::string format_double(double x);

}  // namespace hilbert
