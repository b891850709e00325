#include "ksv/poscor.hpp"

#include <algorithm>
#include <atomic>

namespace ksv {

namespace {

std::atomic<std::uint64_t> next_object_id{1};

CMatrix identity(Eigen::Index n) { return CMatrix::Identity(n, n); }

}  // namespace

PosCorObject make_object(CPMap phi) { return {next_object_id.fetch_add(1), std::move(phi)}; }

PosCorMorphism make_morphism(const PosCorObject& dom, const PosCorObject& cod, const StarMap& rho,
                             const CMatrix& eta_pre, const Automorphism& alpha, const Tolerance& tol) {
  TensorModule tm = tensor_along(dom.module(), rho, tol);
  if (eta_pre.rows() != cod.module().dim() || eta_pre.cols() != tm.pre_dim())
    throw Error(ErrorKind::ShapeMismatch, "η does not fit the domain tensor");
  ModuleMap eta{tm.result, cod.module(), eta_pre * tm.s};
  return {dom.id, cod.id, rho, std::move(tm), std::move(eta), alpha};
}

CMatrix eta_pre(const PosCorMorphism& m) { return m.eta.matrix * m.domain_tensor.q; }

PosCorMorphismReport check_poscor_morphism(const PosCorMorphism& m, const PosCorObject& dom, const PosCorObject& cod,
                                           const Tolerance& tol) {
  if (m.dom != dom.id || m.cod != cod.id || !m.domain_tensor.left.same(dom.module()) ||
      !m.eta.target.same(cod.module()))
    throw Error(ErrorKind::ObjectMismatch, "morphism endpoints differ from the given objects");
  PosCorMorphismReport r;
  r.rho = check_star_map(m.rho, tol);
  const CPMap tilde = tensor_cp(dom.phi, m.domain_tensor, tol);
  r.intertwiner = check_morphism({m.eta, m.alpha}, tilde, cod.phi, tol);
  r.pass = r.rho.pass && r.intertwiner.pass;
  return r;
}

PosCorMorphism poscor_identity(const PosCorObject& obj, const Tolerance& tol) {
  Inclusion inc = inclusion_unitary(obj.module(), tol);
  const StarMap rho = inc.tensor.along;
  return {obj.id, obj.id, rho, std::move(inc.tensor), std::move(inc.iota), Automorphism::identity(obj.phi.algebra)};
}

PosCorMorphism poscor_compose(const PosCorMorphism& m2, const PosCorMorphism& m1, const Tolerance& tol) {
  if (m1.cod != m2.dom || !m1.eta.target.same(m2.domain_tensor.left))
    throw Error(ErrorKind::ObjectMismatch, "morphisms are not composable");
  CompositionTensor ct = composition_unitary(m1.domain_tensor, m2.rho, tol);
  const ModuleMap hat = tensor_extend(m1.eta, ct.second, m2.domain_tensor, tol);
  const ModuleMap eta = compose(m2.eta, compose(hat, adjoint_map(ct.u)));
  return {m1.dom, m2.cod, compose(m2.rho, m1.rho), std::move(ct.direct), eta, compose(m2.alpha, m1.alpha)};
}

double morphism_distance(const PosCorMorphism& m1, const PosCorMorphism& m2) {
  if (m1.dom != m2.dom || m1.cod != m2.cod || m1.domain_tensor.pre_dim() != m2.domain_tensor.pre_dim())
    throw Error(ErrorKind::ObjectMismatch, "morphisms between different objects");
  const HilbertModule& t = m1.eta.target;
  return operator_norm(t.gram_sqrt() * (eta_pre(m1) - eta_pre(m2))) +
         operator_norm(m1.rho.matrix() - m2.rho.matrix()) + operator_norm(m1.alpha.matrix() - m2.alpha.matrix());
}

double poscor_pseudometric(const PosCorMorphism& m1, const PosCorMorphism& m2, const AlgebraElement& b,
                           const CVector& x_pre, const AlgebraElement& a) {
  if (m1.dom != m2.dom || m1.cod != m2.cod) throw Error(ErrorKind::ObjectMismatch, "morphisms between different objects");
  return (m1.rho(b) - m2.rho(b)).norm() + m1.eta.target.norm(eta_pre(m1) * x_pre - eta_pre(m2) * x_pre) +
         (m1.alpha(a) - m2.alpha(a)).norm();
}

ModuleMap commuting_map(const KsgnsTriple& t, const TensorModule& inner, const KsgnsTriple& left,
                        const TensorModule& right) {
  const int da = t.phi.algebra.dim();
  const int df = inner.right().dim();
  const CMatrix q_right = right.q * kron(t.q, identity(df));
  const CMatrix s_left = kron(identity(da), inner.s) * left.s;
  return {left.module, right.result, q_right * s_left};
}

CommutingUnitary commuting_unitary(const KsgnsTriple& t, const CPMap& pi, const Tolerance& tol) {
  TensorModule inner = interior_tensor(t.phi.module, pi, tol);
  KsgnsTriple left = ksgns(tensor_cp(t.phi, inner, tol), tol);
  TensorModule right = interior_tensor(t.module, pi, tol);
  ModuleMap v = commuting_map(t, inner, left, right);
  return {std::move(inner), std::move(left), std::move(right), std::move(v)};
}

const KsgnsFunctor::Entry& KsgnsFunctor::entry(const PosCorObject& obj) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(obj.id);
    if (it != cache_.end()) return *it->second;
  }
  auto e = std::make_unique<Entry>();
  e->triple = ksgns(obj.phi, tol_);
  e->object = make_object(e->triple.rep);
  std::lock_guard<std::mutex> lock(mu_);
  auto [it, inserted] = cache_.emplace(obj.id, std::move(e));
  return *it->second;
}

void KsgnsFunctor::adopt(const PosCorObject& obj, KsgnsTriple t) {
  auto e = std::make_unique<Entry>();
  e->object = make_object(t.rep);
  e->triple = std::move(t);
  std::lock_guard<std::mutex> lock(mu_);
  cache_[obj.id] = std::move(e);
}

const KsgnsTriple& KsgnsFunctor::triple(const PosCorObject& obj) { return entry(obj).triple; }

const PosCorObject& KsgnsFunctor::object(const PosCorObject& obj) { return entry(obj).object; }

PosCorMorphism KsgnsFunctor::morphism(const PosCorMorphism& m, const PosCorObject& dom, const PosCorObject& cod) {
  if (m.dom != dom.id || m.cod != cod.id) throw Error(ErrorKind::ObjectMismatch, "morphism endpoints differ from the given objects");
  const Entry& d = entry(dom);
  const Entry& c = entry(cod);
  const KsgnsTriple tilde = ksgns(tensor_cp(dom.phi, m.domain_tensor, tol_), tol_);
  const Intertwiner lifted = ksgns_lift({m.eta, m.alpha}, tilde, c.triple, tol_);
  TensorModule right = tensor_along(d.triple.module, m.rho, tol_);
  const ModuleMap v = commuting_map(d.triple, m.domain_tensor, tilde, right);
  ModuleMap eta = compose(lifted.eta, adjoint_map(v));
  return {d.object.id, c.object.id, m.rho, std::move(right), std::move(eta), m.alpha};
}

PosCorMorphism KsgnsFunctor::idempotency(const PosCorObject& obj) {
  const Entry& once = entry(obj);
  const Entry& twice = entry(once.object);
  Inclusion inc = inclusion_unitary(once.triple.module, tol_);
  ModuleMap eta = compose(twice.triple.v, inc.iota);
  const StarMap rho = inc.tensor.along;
  return {once.object.id, twice.object.id, rho, std::move(inc.tensor), std::move(eta),
          Automorphism::identity(obj.phi.algebra)};
}

namespace {

double invariant_residual(const PosCorMorphismReport& r) {
  return std::max({r.rho.multiplicativity, r.rho.star_preservation, r.rho.unitality, r.intertwiner.intertwining,
                   r.intertwiner.adjoint_side, r.intertwiner.commutation, r.intertwiner.linearity});
}

}  // namespace

LawReport check_category_laws(const Diagram& d, const Tolerance& tol) {
  LawReport r;
  bool ok = true;
  std::vector<PosCorMorphism> ids;
  for (const auto& o : d.objects) ids.push_back(poscor_identity(o, tol));
  auto norm_of = [](const PosCorMorphism& m) { return module_operator_norm(m.eta); };
  auto audit = [&](const PosCorMorphism& m, int dom, int cod, int arrow) {
    const PosCorMorphismReport rep = check_poscor_morphism(m, d.objects[dom], d.objects[cod], tol);
    const double res = invariant_residual(rep);
    if (res > r.invariants) {
      r.invariants = res;
      if (arrow >= 0) r.worst_arrow = arrow;
    }
    if (!rep.pass) {
      ok = false;
      if (arrow >= 0) r.worst_arrow = arrow;
    }
  };
  for (size_t k = 0; k < d.arrows.size(); ++k) {
    const auto& a = d.arrows[k];
    audit(a.m, a.dom, a.cod, static_cast<int>(k));
    const double scale = norm_of(a.m);
    const double li = morphism_distance(poscor_compose(ids[a.cod], a.m, tol), a.m);
    const double ri = morphism_distance(poscor_compose(a.m, ids[a.dom], tol), a.m);
    r.left_identity = std::max(r.left_identity, li);
    r.right_identity = std::max(r.right_identity, ri);
    ok = ok && li <= tol.scaled(scale) && ri <= tol.scaled(scale);
  }
  for (const auto& a : d.arrows)
    for (const auto& b : d.arrows) {
      if (a.cod != b.dom) continue;
      const PosCorMorphism ba = poscor_compose(b.m, a.m, tol);
      audit(ba, a.dom, b.cod, -1);
      for (const auto& c : d.arrows) {
        if (b.cod != c.dom) continue;
        const double res = morphism_distance(poscor_compose(c.m, ba, tol), poscor_compose(poscor_compose(c.m, b.m, tol), a.m, tol));
        r.associativity = std::max(r.associativity, res);
        ok = ok && res <= tol.scaled(norm_of(a.m) * norm_of(b.m) * norm_of(c.m));
      }
    }
  r.pass = ok;
  return r;
}

}  // namespace ksv
