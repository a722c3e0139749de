#pragma once

#include "duomagma/magma.hpp"
#include "duomagma/unimodular.hpp"
#include "duomagma/verify.hpp"

#include "json.hpp"

#include <string>

namespace duomagma {

using Json = nlohmann::json;

inline constexpr const char* kSchemaVersion = "duomagma-v1";

/// Canonical text: sorted keys, no whitespace.
std::string canonical_dump(const Json& j);

/// Parses text into JSON; malformed text is a SchemaError.
Json parse_json_text(const std::string& text);

Json rational_to_json(const Rational& r);
Rational rational_from_json(const Json& j);

Json int_matrix_to_json(const IntMatrix& m);
IntMatrix int_matrix_from_json(const Json& j);
Json rational_matrix_to_json(const RationalMatrix& m);
RationalMatrix rational_matrix_from_json(const Json& j);

Json element_to_json(const Element& x);
Element element_from_json(const Json& j);

Json squeeze_to_json(const SqueezeMap& s);
SqueezeMap squeeze_from_json(const Json& j);

Json neighborhood_to_json(const Neighborhood& n);
Neighborhood neighborhood_from_json(const Json& j);

/// Magma descriptors, including the stored entries of any registry.
Json magma_to_json(const Magma& m);
MagmaPtr magma_from_json(const Json& j);

/// {"version", "magma"} wrapper used for descriptor files.
Json descriptor_document(const Magma& m);
MagmaPtr descriptor_from_document(const Json& j);

Json certificate_to_json(const WitnessCertificate& c);
WitnessCertificate certificate_from_json(const Json& j);

/// Construction DSL: {"base": {...}, "pipeline": [...]} with base kinds
/// cyclic, table, vector, torus and pipeline ops hm0, semidirect-z,
/// semidirect-aut (bare strings allowed for ops without parameters).
MagmaPtr build_from_spec(const Json& spec);

}  // namespace duomagma
