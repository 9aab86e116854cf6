#pragma once

#include <string>

#include "json.hpp"

#include "encdec/encoding.hpp"
#include "encdec/fermions.hpp"

namespace encdec {

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Matrix: {"rows": r, "cols": c, "data": [[re, im], ...]} row-major.
nlohmann::json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const nlohmann::json& j);

// StarAlgebraSpec: {"blocks": [n1, n2, ...]}.
nlohmann::json spec_to_json(const StarAlgebraSpec& spec);
StarAlgebraSpec spec_from_json(const nlohmann::json& j);

// AlgebraElement: {"blocks": [<matrix>...]} (the spec travels with the map).
nlohmann::json element_to_json(const AlgebraElement& x);
AlgebraElement element_from_json(const nlohmann::json& j, const StarAlgebraSpec& spec);

// SpannedSubalgebra: {"ambient_dim": N, "basis": [<matrix>...]}.
nlohmann::json subalgebra_to_json(const SpannedSubalgebra& alg);
SpannedSubalgebra subalgebra_from_json(const nlohmann::json& j);

// RealLinearMap: {"source": <spec>, "target": <spec>, "images": [<element>...]}.
nlohmann::json map_to_json(const RealLinearMap& map);
RealLinearMap map_from_json(const nlohmann::json& j);

// CanonicalForm: {"p": [[...]], "q": [[...]], "unitary": [<matrix>...]}.
nlohmann::json canonical_form_to_json(const CanonicalForm& form);
CanonicalForm canonical_form_from_json(const nlohmann::json& j);

// CarRep: {"modes": n, "name": "...", "annihilators": [<matrix>...]}.
nlohmann::json car_rep_to_json(const CarRep& rep);
CarRep car_rep_from_json(const nlohmann::json& j);

/// Parse a file; wraps I/O and syntax failures in ParseError.
nlohmann::json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const nlohmann::json& j);

}  // namespace encdec
