#include "ksv/serialize.hpp"

namespace ksv::io {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorKind::ValidationError, what);
}

void require_size(const CMatrix& m, Eigen::Index rows, Eigen::Index cols, const char* what) {
  require(m.rows() == rows && m.cols() == cols, std::string(what) + ": wrong matrix size");
}

json matrices(const std::vector<CMatrix>& ms) {
  json out = json::array();
  for (const auto& m : ms) out.push_back(to_json(m));
  return out;
}

std::vector<CMatrix> matrices_from(const json& j) {
  std::vector<CMatrix> out;
  for (const auto& m : j) out.push_back(matrix_from_json(m));
  return out;
}

}  // namespace

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
  require(j.is_array() && j.size() == 2, "complex scalar must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

json to_json(const CMatrix& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index k = 0; k < m.cols(); ++k) data.push_back(to_json(m(i, k)));
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

CMatrix matrix_from_json(const json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>();
  const auto cols = j.at("cols").get<Eigen::Index>();
  const json& data = j.at("data");
  require(rows >= 0 && cols >= 0 && data.size() == static_cast<std::size_t>(rows * cols),
          "matrix data length does not match rows*cols");
  CMatrix m(rows, cols);
  std::size_t n = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = complex_from_json(data[n++]);
  require(all_finite(m), "matrix has non-finite entries");
  return m;
}

json to_json(const CVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

CVector vector_from_json(const json& j) {
  CVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return v;
}

json to_json(const AlgebraShape& s) { return s.blocks(); }

AlgebraShape shape_from_json(const json& j) {
  auto blocks = j.get<std::vector<int>>();
  require(!blocks.empty(), "algebra needs at least one block");
  for (int n : blocks) require(n >= 1, "block sizes must be positive");
  return AlgebraShape(blocks);
}

json to_json(const StarMap& m) {
  return {{"domain", to_json(m.domain())}, {"codomain", to_json(m.codomain())}, {"matrix", to_json(m.matrix())}};
}

StarMap star_map_from_json(const json& j) {
  AlgebraShape d = shape_from_json(j.at("domain")), c = shape_from_json(j.at("codomain"));
  CMatrix m = matrix_from_json(j.at("matrix"));
  require_size(m, c.dim(), d.dim(), "star map");
  return {d, c, m};
}

json to_json(const Automorphism& a) {
  return {{"forward", to_json(a.forward())}, {"inverse", to_json(a.inverse_map())}};
}

Automorphism automorphism_from_json(const json& j) {
  StarMap f = star_map_from_json(j.at("forward")), b = star_map_from_json(j.at("inverse"));
  require(f.domain() == f.codomain() && b.domain() == f.domain() && b.codomain() == f.domain(),
          "automorphism maps must be endomorphisms of one algebra");
  return {f, b};
}

json to_json(const AlgebraElement& a) { return {{"shape", to_json(a.shape())}, {"coords", to_json(a.coords())}}; }

AlgebraElement element_from_json(const json& j) {
  AlgebraShape s = shape_from_json(j.at("shape"));
  CVector c = vector_from_json(j.at("coords"));
  require(c.size() == s.dim(), "element coordinates do not match the algebra");
  return AlgebraElement::from_coords(s, c);
}

json to_json(const FiniteGroup& g) { return {{"name", g.name}, {"table", g.table}, {"parity", g.parity}}; }

FiniteGroup group_from_json(const json& j) {
  FiniteGroup g = FiniteGroup::from_table(j.at("name").get<std::string>(),
                                          j.at("table").get<std::vector<std::vector<int>>>());
  if (j.contains("parity")) {
    auto p = j.at("parity").get<std::vector<int>>();
    require(static_cast<int>(p.size()) == g.order(), "parity length must equal the group order");
    g.parity = p;
  }
  return g;
}

int ModuleWriter::add(const HilbertModule& e) {
  auto it = index_.find(e.id());
  if (it != index_.end()) return it->second;
  const PreModule& p = e.data();
  table_.push_back({{"algebra", to_json(p.algebra)},
                    {"dim", p.dim},
                    {"action", matrices(p.action)},
                    {"pairing", matrices(p.pairing)}});
  const int idx = static_cast<int>(table_.size()) - 1;
  index_[e.id()] = idx;
  return idx;
}

ModuleReader::ModuleReader(const json& table, const Tolerance& tol) {
  for (const auto& m : table) {
    PreModule p;
    p.algebra = shape_from_json(m.at("algebra"));
    p.dim = m.at("dim").get<int>();
    p.action = matrices_from(m.at("action"));
    p.pairing = matrices_from(m.at("pairing"));
    require(p.dim >= 0, "module dimension must be non-negative");
    require(static_cast<int>(p.action.size()) == p.algebra.dim() &&
                static_cast<int>(p.pairing.size()) == p.algebra.dim(),
            "module needs one action and one pairing matrix per basis element");
    for (int b = 0; b < p.algebra.dim(); ++b) {
      require_size(p.action[b], p.dim, p.dim, "module action");
      require_size(p.pairing[b], p.dim, p.dim, "module pairing");
    }
    const PreModuleReport rep = check_premodule(p, tol);
    require(rep.pass, "module data is not a pre-Hilbert module");
    modules_.push_back(HilbertModule::from_pre(std::move(p), tol));
  }
}

const HilbertModule& ModuleReader::at(const json& index) const {
  const int i = index.get<int>();
  require(i >= 0 && i < static_cast<int>(modules_.size()), "module index out of range");
  return modules_[i];
}

json to_json(const CPMap& phi, ModuleWriter& w) {
  return {{"algebra", to_json(phi.algebra)},
          {"module", w.add(phi.module)},
          {"images", matrices(phi.images)},
          {"strict", phi.strict}};
}

CPMap cp_from_json(const json& j, const ModuleReader& r) {
  CPMap phi;
  phi.algebra = shape_from_json(j.at("algebra"));
  phi.module = r.at(j.at("module"));
  phi.images = matrices_from(j.at("images"));
  phi.strict = j.value("strict", true);
  require(static_cast<int>(phi.images.size()) == phi.algebra.dim(), "one image per matrix unit required");
  for (const auto& m : phi.images) require_size(m, phi.module.dim(), phi.module.dim(), "cp image");
  return phi;
}

json to_json(const ModuleMap& m, ModuleWriter& w) {
  return {{"source", w.add(m.source)}, {"target", w.add(m.target)}, {"matrix", to_json(m.matrix)}};
}

ModuleMap module_map_from_json(const json& j, const ModuleReader& r) {
  ModuleMap m{r.at(j.at("source")), r.at(j.at("target")), matrix_from_json(j.at("matrix"))};
  require(m.source.algebra() == m.target.algebra(), "module map between different coefficient algebras");
  require_size(m.matrix, m.target.dim(), m.source.dim(), "module map");
  return m;
}

json to_json(const Intertwiner& m, ModuleWriter& w) { return {{"eta", to_json(m.eta, w)}, {"alpha", to_json(m.alpha)}}; }

Intertwiner intertwiner_from_json(const json& j, const ModuleReader& r) {
  return {module_map_from_json(j.at("eta"), r), automorphism_from_json(j.at("alpha"))};
}

json to_json(const KsgnsTriple& t, ModuleWriter& w) {
  return {{"phi", to_json(t.phi, w)}, {"module", w.add(t.module)}, {"rep", to_json(t.rep, w)},
          {"v", to_json(t.v, w)},     {"q", to_json(t.q)},          {"s", to_json(t.s)},
          {"kernel", to_json(t.kernel)}};
}

KsgnsTriple triple_from_json(const json& j, const ModuleReader& r) {
  KsgnsTriple t;
  t.phi = cp_from_json(j.at("phi"), r);
  t.module = r.at(j.at("module"));
  t.rep = cp_from_json(j.at("rep"), r);
  t.v = module_map_from_json(j.at("v"), r);
  t.q = matrix_from_json(j.at("q"));
  t.s = matrix_from_json(j.at("s"));
  t.kernel = matrix_from_json(j.at("kernel"));
  require(t.rep.module.same(t.module) && t.v.target.same(t.module) && t.v.source.same(t.phi.module),
          "triple components refer to different modules");
  require_size(t.q, t.module.dim(), t.pre_dim(), "triple q");
  require_size(t.s, t.pre_dim(), t.module.dim(), "triple s");
  return t;
}

json to_json(const Diagram& d, ModuleWriter& w) {
  json objects = json::array(), arrows = json::array();
  for (const auto& o : d.objects) objects.push_back(to_json(o.phi, w));
  for (const auto& a : d.arrows)
    arrows.push_back({{"dom", a.dom},
                      {"cod", a.cod},
                      {"rho", to_json(a.m.rho)},
                      {"eta_pre", to_json(eta_pre(a.m))},
                      {"alpha", to_json(a.m.alpha)}});
  return {{"objects", objects}, {"arrows", arrows}};
}

Diagram diagram_from_json(const json& j, const ModuleReader& r, const Tolerance& tol) {
  Diagram d;
  for (const auto& o : j.at("objects")) d.objects.push_back(make_object(cp_from_json(o, r)));
  const int n = static_cast<int>(d.objects.size());
  for (const auto& a : j.at("arrows")) {
    const int dom = a.at("dom").get<int>(), cod = a.at("cod").get<int>();
    require(dom >= 0 && dom < n && cod >= 0 && cod < n, "arrow endpoint out of range");
    const StarMap rho = star_map_from_json(a.at("rho"));
    const CMatrix pre = matrix_from_json(a.at("eta_pre"));
    const PosCorObject& s = d.objects[dom];
    const PosCorObject& t = d.objects[cod];
    require(rho.domain() == s.coefficients() && rho.codomain() == t.coefficients(),
            "arrow coefficient map does not match its endpoints");
    require_size(pre, t.module().dim(), s.module().dim() * rho.codomain().dim(), "arrow eta");
    d.arrows.push_back({dom, cod, make_morphism(s, t, rho, pre, automorphism_from_json(a.at("alpha")), tol)});
  }
  return d;
}

json to_json(const EquivariantCorrespondence& c, ModuleWriter& w) {
  json alpha = json::array(), beta = json::array();
  for (const auto& a : c.a_sys.action) alpha.push_back(to_json(a));
  for (const auto& b : c.b_sys.action) beta.push_back(to_json(b));
  return {{"group", to_json(c.a_sys.group)}, {"alpha", alpha}, {"beta", beta},
          {"phi", to_json(c.phi, w)},        {"u", matrices(c.u)}};
}

EquivariantCorrespondence equivariant_from_json(const json& j, const ModuleReader& r) {
  EquivariantCorrespondence c;
  const FiniteGroup g = group_from_json(j.at("group"));
  c.phi = cp_from_json(j.at("phi"), r);
  c.a_sys.algebra = c.phi.algebra;
  c.b_sys.algebra = c.phi.module.algebra();
  c.a_sys.group = c.b_sys.group = g;
  for (const auto& a : j.at("alpha")) c.a_sys.action.push_back(automorphism_from_json(a));
  for (const auto& b : j.at("beta")) c.b_sys.action.push_back(automorphism_from_json(b));
  c.u = matrices_from(j.at("u"));
  require(static_cast<int>(c.a_sys.action.size()) == g.order() && static_cast<int>(c.b_sys.action.size()) == g.order() &&
              static_cast<int>(c.u.size()) == g.order(),
          "one action element and one U_g per group element required");
  for (int x = 0; x < g.order(); ++x) {
    require(c.a_sys.action[x].shape() == c.a_sys.algebra && c.b_sys.action[x].shape() == c.b_sys.algebra,
            "action on the wrong algebra");
    require_size(c.u[x], c.phi.module.dim(), c.phi.module.dim(), "U_g");
  }
  return c;
}

}  // namespace ksv::io
