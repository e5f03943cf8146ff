#pragma once

#include <json.hpp>

#include "flagrig/flag.hpp"
#include "flagrig/forms.hpp"
#include "flagrig/pansu.hpp"
#include "flagrig/rigidity.hpp"

namespace flagrig {

using Json = nlohmann::ordered_json;

// Scalars: rationals as "p/q" strings (the "/q" omitted when q = 1), complex
// numbers as {re, im}, quaternions as {a0, a1, a2, a3}.
Json to_json(const Scalar& s);
Scalar scalar_from_json(Field f, const Json& j);

Json to_json(const Mat& m);
Mat matrix_from_json(const Json& j);

/// Sparse list of {i, j, comp, value} real-component entries.
Json to_json(const LieElement& a);
LieElement lie_from_json(const Json& j);

Json to_json(const GroupElement& g);
GroupElement group_from_json(const Json& j);

Json to_json(const Flag& f);
Flag flag_from_json(const Json& j);

Json to_json(const GrassmannPoint& w);
GrassmannPoint grassmann_from_json(const Json& j);

Json to_json(const HSpec& h);
HSpec hspec_from_json(Field f, const Json& j);

Json to_json(const AutCertificate& c);
AutCertificate certificate_from_json(Field f, const Json& j);

/// The V_1 matrix of a graded map as a dense array of rational strings.
Json graded_map_to_json(const GradedMap& m);
GradedMap graded_map_from_json(const Json& j);

Json to_json(const LeftInvariantForm& w);
LeftInvariantForm form_from_json(const Json& j);

/// Per-coordinate polynomial term lists {exps, coeff}.
Json to_json(const PolyMapSpec& f);
PolyMapSpec poly_map_from_json(const Json& j);

Json to_json(const PullbackHypotheses& rep);
Json to_json(const PullbackIdentityReport& rep);

Field field_from_json(const Json& j);

} // namespace flagrig
