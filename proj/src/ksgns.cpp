#include "ksv/ksgns.hpp"

#include <algorithm>
#include <cmath>

namespace ksv {

namespace {

CMatrix identity(Eigen::Index n) { return CMatrix::Identity(n, n); }

}  // namespace

KsgnsTriple ksgns(const CPMap& phi, const Tolerance& tol, Exec exec) {
  if (!check_cp(phi, tol).is_cp) throw Error(ErrorKind::NotCP, "KSGNS input is not completely positive");
  const AlgebraShape& a = phi.algebra;
  const HilbertModule& e = phi.module;
  const int da = a.dim(), de = e.dim();
  PreModule pre;
  pre.algebra = e.algebra();
  pre.dim = da * de;
  for (int b = 0; b < pre.algebra.dim(); ++b) pre.action.push_back(kron(identity(da), e.action(b)));
  pre.pairing = kernels::ksgns_pairing(a, e.data().pairing, phi.images, exec);
  Quotient quo = quotient_by_null(pre, tol);
  CPMap rep{a, quo.module, {}};
  for (int u = 0; u < da; ++u) {
    const CMatrix x = kron(left_mult_matrix(AlgebraElement::matrix_unit(a, u)), identity(de));
    if (quo.kernel.cols() > 0 && quo.module.dim() > 0) {
      const double leak = operator_norm(quo.q * x * quo.kernel);
      if (leak > tol.scaled(1.0)) throw Error(ErrorKind::SubmoduleViolation, "left multiplication does not descend");
    }
    rep.images.push_back(quo.q * x * quo.s);
  }
  const CMatrix one = AlgebraElement::unit(a).coords();
  ModuleMap v{e, quo.module, quo.q * kron(one, identity(de))};
  return {phi, quo.module, std::move(rep), std::move(v), std::move(quo.q), std::move(quo.s), std::move(quo.kernel)};
}

CMatrix spanning_matrix(const CPMap& rep, const ModuleMap& v) {
  const Eigen::Index de = v.matrix.cols();
  CMatrix out(v.matrix.rows(), rep.algebra.dim() * de);
  for (int p = 0; p < rep.algebra.dim(); ++p) out.middleCols(p * de, de) = rep.images[p] * v.matrix;
  return out;
}

int numerical_rank(const CMatrix& m, const Tolerance& tol) {
  if (m.size() == 0) return 0;
  const RVector sv = m.bdcSvd().singularValues();
  if (!(sv(0) > 0)) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > tol.rtol * sv(0)) ++r;
  return r;
}

TripleReport check_triple(const KsgnsTriple& t, const Tolerance& tol) {
  TripleReport r;
  const HilbertModule& e = t.phi.module;
  const ModuleMap vs = adjoint_map(t.v);
  for (int u = 0; u < t.phi.algebra.dim(); ++u)
    r.reconstruction =
        std::max(r.reconstruction, realized_norm(vs.matrix * t.rep.images[u] * t.v.matrix - t.phi.images[u], e, e));
  const int de = e.dim();
  CMatrix explicit_form(de, t.pre_dim());
  for (int p = 0; p < t.phi.algebra.dim(); ++p) explicit_form.middleCols(p * de, de) = t.phi.images[p];
  r.adjoint_formula = operator_norm(e.gram_sqrt() * (vs.matrix * t.q - explicit_form));
  const CorrespondenceReport cr = check_correspondence(t.rep, tol);
  r.multiplicativity = cr.multiplicativity;
  r.unitality = cr.unitality;
  r.spanning_rank = numerical_rank(t.module.gram_sqrt() * spanning_matrix(t.rep, t.v), tol);
  r.dim = t.module.dim();
  return r;
}

Intertwiner ksgns_lift(const Intertwiner& m, const KsgnsTriple& t1, const KsgnsTriple& t2, const Tolerance& tol) {
  if (!m.eta.source.same(t1.phi.module) || !m.eta.target.same(t2.phi.module))
    throw Error(ErrorKind::ObjectMismatch, "morphism does not connect the dilated objects");
  const CMatrix x = kron(m.alpha.matrix(), m.eta.matrix);
  if (t1.kernel.cols() > 0 && t2.module.dim() > 0) {
    const double leak = operator_norm(t2.module.gram_sqrt() * t2.q * x * t1.kernel);
    if (leak > tol.scaled(operator_norm(x) * operator_norm(t2.module.gram_sqrt())))
      throw Error(ErrorKind::WellDefinednessViolation, "α ⊗ η does not preserve the null space");
  }
  return {{t1.module, t2.module, t2.q * x * t1.s}, m.alpha};
}

LiftReport check_lift(const Intertwiner& m, const Intertwiner& lifted, const KsgnsTriple& t1, const KsgnsTriple& t2) {
  LiftReport r;
  r.embedding = realized_norm(lifted.eta.matrix * t1.v.matrix - t2.v.matrix * m.eta.matrix, t1.phi.module, t2.module);
  const ModuleMap ls = adjoint_map(lifted.eta);
  const ModuleMap es = adjoint_map(m.eta);
  const CMatrix rhs = t1.q * kron(m.alpha.inverse_map().matrix(), es.matrix);
  r.adjoint_formula = operator_norm(t1.module.gram_sqrt() * (ls.matrix * t2.q - rhs));
  r.norm_excess = module_operator_norm(lifted.eta) - module_operator_norm(m.eta);
  return r;
}

Idempotency idempotency_unitary(const KsgnsTriple& t, const Tolerance& tol) {
  KsgnsTriple inner = ksgns(t.rep, tol);
  ModuleMap v = inner.v;
  return {std::move(inner), std::move(v)};
}

double idempotency_intertwining(const KsgnsTriple& t, const Idempotency& id) {
  double r = 0;
  for (int u = 0; u < t.phi.algebra.dim(); ++u)
    r = std::max(r, realized_norm(id.v.matrix * t.rep.images[u] - id.inner.rep.images[u] * id.v.matrix, t.module,
                                  id.inner.module));
  return r;
}

ProbeReport continuity_probe(const std::vector<Intertwiner>& path, const Intertwiner& limit, const KsgnsTriple& t1,
                             const KsgnsTriple& t2, const std::vector<ProbeSample>& samples, const Tolerance& tol) {
  ProbeReport r;
  const Intertwiner lim = ksgns_lift(limit, t1, t2, tol);
  std::vector<std::pair<CVector, CVector>> pushed;
  for (const auto& s : samples) {
    const CVector vx = t1.v.matrix * s.x;
    pushed.emplace_back(vx, t1.rep(s.a) * vx);
  }
  for (const auto& m : path) {
    double in = 0, out = 0;
    const Intertwiner lifted = ksgns_lift(m, t1, t2, tol);
    for (size_t i = 0; i < samples.size(); ++i) {
      in += hom_pseudometric(m, limit, samples[i].x, samples[i].a);
      out += hom_pseudometric(lifted, lim, pushed[i].first, samples[i].a) +
             hom_pseudometric(lifted, lim, pushed[i].second, samples[i].a);
    }
    r.input.push_back(in);
    r.lifted.push_back(out);
  }
  if (r.input.empty() || r.input.back() > 10 * tol.ctol)
    throw Error(ErrorKind::NonConvergentInput, "input path does not converge on the samples");
  r.constant = 10 * std::max(1.0, module_operator_norm(limit.eta) * t2.phi.scale());
  bool ok = true;
  for (size_t k = 0; k < r.input.size(); ++k) {
    if (r.input[k] > 0) r.worst_ratio = std::max(r.worst_ratio, r.lifted[k] / r.input[k]);
    else ok = ok && r.lifted[k] <= tol.ctol;
    if (k > 0) r.monotonicity = std::max(r.monotonicity, r.lifted[k] - r.lifted[k - 1]);
  }
  r.pass = ok && r.worst_ratio <= r.constant && r.monotonicity <= 1e-9 && r.lifted.back() <= 10 * tol.ctol;
  return r;
}

}  // namespace ksv
