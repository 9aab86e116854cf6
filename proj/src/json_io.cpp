#include "encdec/json_io.hpp"

#include <fstream>

namespace encdec {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

}  // namespace

json matrix_to_json(const CMatrix& m) {
  json data = json::array();
  for (const cplx& z : m.data()) data.push_back(json::array({z.real(), z.imag()}));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

CMatrix matrix_from_json(const json& j) {
  try {
    const int rows = field(j, "rows").get<int>();
    const int cols = field(j, "cols").get<int>();
    const json& data = field(j, "data");
    if (rows < 0 || cols < 0 || static_cast<int>(data.size()) != rows * cols)
      throw ParseError("matrix entry count does not match rows x cols");
    std::vector<cplx> entries;
    entries.reserve(data.size());
    for (const json& e : data) {
      if (!e.is_array() || e.size() != 2) throw ParseError("matrix entry is not a [re, im] pair");
      entries.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return CMatrix(rows, cols, std::move(entries));
  } catch (const json::exception& ex) {
    throw ParseError(std::string("bad matrix JSON: ") + ex.what());
  }
}

json spec_to_json(const StarAlgebraSpec& spec) { return json{{"blocks", spec.block_dims}}; }

StarAlgebraSpec spec_from_json(const json& j) {
  try {
    StarAlgebraSpec spec{field(j, "blocks").get<std::vector<int>>()};
    if (spec.block_dims.empty()) throw ParseError("spec has no blocks");
    for (int n : spec.block_dims)
      if (n < 1) throw ParseError("spec block dimensions must be positive");
    return spec;
  } catch (const json::exception& ex) {
    throw ParseError(std::string("bad spec JSON: ") + ex.what());
  }
}

json element_to_json(const AlgebraElement& x) {
  json blocks = json::array();
  for (const CMatrix& b : x.blocks) blocks.push_back(matrix_to_json(b));
  return json{{"blocks", std::move(blocks)}};
}

AlgebraElement element_from_json(const json& j, const StarAlgebraSpec& spec) {
  const json& blocks = field(j, "blocks");
  if (static_cast<int>(blocks.size()) != spec.num_blocks())
    throw ParseError("element block count does not match the spec");
  AlgebraElement x{spec, {}};
  for (int i = 0; i < spec.num_blocks(); ++i) {
    CMatrix b = matrix_from_json(blocks[i]);
    if (b.rows() != spec.block_dims[i] || b.cols() != spec.block_dims[i])
      throw ParseError("element block shape does not match the spec");
    x.blocks.push_back(std::move(b));
  }
  return x;
}

json subalgebra_to_json(const SpannedSubalgebra& alg) {
  json basis = json::array();
  for (const CMatrix& b : alg.basis) basis.push_back(matrix_to_json(b));
  return json{{"ambient_dim", alg.ambient_dim}, {"basis", std::move(basis)}};
}

SpannedSubalgebra subalgebra_from_json(const json& j) {
  try {
    SpannedSubalgebra alg;
    alg.ambient_dim = field(j, "ambient_dim").get<int>();
    for (const json& b : field(j, "basis")) {
      CMatrix m = matrix_from_json(b);
      if (m.rows() != alg.ambient_dim || m.cols() != alg.ambient_dim)
        throw ParseError("basis matrix does not match the ambient dimension");
      alg.basis.push_back(std::move(m));
    }
    return alg;
  } catch (const json::exception& ex) {
    throw ParseError(std::string("bad subalgebra JSON: ") + ex.what());
  }
}

json map_to_json(const RealLinearMap& map) {
  json images = json::array();
  for (const AlgebraElement& x : map.images) images.push_back(element_to_json(x));
  return json{{"source", spec_to_json(map.source)},
              {"target", spec_to_json(map.target)},
              {"images", std::move(images)}};
}

RealLinearMap map_from_json(const json& j) {
  RealLinearMap map;
  map.source = spec_from_json(field(j, "source"));
  map.target = spec_from_json(field(j, "target"));
  const json& images = field(j, "images");
  if (static_cast<int>(images.size()) != map.source.real_dim())
    throw ParseError("image count does not match the real dimension of the source");
  for (const json& img : images) map.images.push_back(element_from_json(img, map.target));
  return map;
}

json canonical_form_to_json(const CanonicalForm& form) {
  json unitary = json::array();
  for (const CMatrix& u : form.unitary) unitary.push_back(matrix_to_json(u));
  return json{{"p", form.p}, {"q", form.q}, {"unitary", std::move(unitary)}};
}

CanonicalForm canonical_form_from_json(const json& j) {
  try {
    CanonicalForm form;
    form.p = field(j, "p").get<std::vector<std::vector<int>>>();
    form.q = field(j, "q").get<std::vector<std::vector<int>>>();
    for (const json& u : field(j, "unitary")) form.unitary.push_back(matrix_from_json(u));
    return form;
  } catch (const json::exception& ex) {
    throw ParseError(std::string("bad canonical form JSON: ") + ex.what());
  }
}

json car_rep_to_json(const CarRep& rep) {
  json anns = json::array();
  for (const CMatrix& a : rep.annihilators) anns.push_back(matrix_to_json(a));
  return json{{"modes", rep.modes}, {"name", rep.name}, {"annihilators", std::move(anns)}};
}

CarRep car_rep_from_json(const json& j) {
  try {
    CarRep rep;
    rep.modes = field(j, "modes").get<int>();
    rep.name = field(j, "name").get<std::string>();
    for (const json& a : field(j, "annihilators"))
      rep.annihilators.push_back(matrix_from_json(a));
    if (static_cast<int>(rep.annihilators.size()) != rep.modes)
      throw ParseError("annihilator count does not match the number of modes");
    return rep;
  } catch (const json::exception& ex) {
    throw ParseError(std::string("bad CAR rep JSON: ") + ex.what());
  }
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& ex) {
    throw ParseError("cannot parse '" + path + "': " + ex.what());
  }
}

void save_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
}

}  // namespace encdec
