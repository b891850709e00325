#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include <json.hpp>

#include "ksv/equivariant.hpp"

namespace ksv::io {

using json = nlohmann::json;

json to_json(cplx z);
cplx complex_from_json(const json& j);
/// {"rows", "cols", "data"} with data row-major [re, im] pairs.
json to_json(const CMatrix& m);
CMatrix matrix_from_json(const json& j);
json to_json(const CVector& v);
CVector vector_from_json(const json& j);

json to_json(const AlgebraShape& s);
AlgebraShape shape_from_json(const json& j);
json to_json(const StarMap& m);
StarMap star_map_from_json(const json& j);
json to_json(const Automorphism& a);
Automorphism automorphism_from_json(const json& j);
json to_json(const AlgebraElement& a);
AlgebraElement element_from_json(const json& j);
json to_json(const FiniteGroup& g);
FiniteGroup group_from_json(const json& j);

/// Modules are written once into a table and referenced by index, so objects
/// that share a module still share it after parsing.
class ModuleWriter {
 public:
  int add(const HilbertModule& e);
  const json& table() const { return table_; }

 private:
  json table_ = json::array();
  std::map<std::uint64_t, int> index_;
};

class ModuleReader {
 public:
  explicit ModuleReader(const json& table, const Tolerance& tol = {});
  const HilbertModule& at(const json& index) const;

 private:
  std::vector<HilbertModule> modules_;
};

json to_json(const CPMap& phi, ModuleWriter& w);
CPMap cp_from_json(const json& j, const ModuleReader& r);
json to_json(const ModuleMap& m, ModuleWriter& w);
ModuleMap module_map_from_json(const json& j, const ModuleReader& r);
json to_json(const Intertwiner& m, ModuleWriter& w);
Intertwiner intertwiner_from_json(const json& j, const ModuleReader& r);

/// Triple with its quotient data q, s.
json to_json(const KsgnsTriple& t, ModuleWriter& w);
KsgnsTriple triple_from_json(const json& j, const ModuleReader& r);

/// Objects by index, arrows with η in pre-space form.
json to_json(const Diagram& d, ModuleWriter& w);
Diagram diagram_from_json(const json& j, const ModuleReader& r, const Tolerance& tol = {});

json to_json(const EquivariantCorrespondence& c, ModuleWriter& w);
EquivariantCorrespondence equivariant_from_json(const json& j, const ModuleReader& r);

/// Wraps json exceptions into ParseError.
template <class F>
auto guarded(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, e.what());
  }
}

}  // namespace ksv::io
