#include "ksv/hilbert.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

#include "ksv/random.hpp"

namespace ksv {

namespace {

std::atomic<std::uint64_t> next_module_id{1};

void require_algebra(const AlgebraShape& a, const AlgebraShape& b) {
  if (!(a == b)) throw Error(ErrorKind::ShapeMismatch, "modules over different algebras");
}

// Coefficient matrix Σ_β c_β M_β.
CMatrix combine(const std::vector<CMatrix>& mats, const CVector& c, int dim) {
  CMatrix out = CMatrix::Zero(dim, dim);
  for (Eigen::Index b = 0; b < c.size(); ++b)
    if (c(b) != cplx(0)) out += c(b) * mats[b];
  return out;
}

}  // namespace

CMatrix PreModule::gram() const {
  CMatrix g = CMatrix::Zero(dim, dim);
  for (int b = 0; b < algebra.dim(); ++b)
    if (algebra.is_diagonal_unit(b)) g += pairing[b];
  return g;
}

CMatrix PreModule::action_of(const AlgebraElement& b) const {
  require_algebra(algebra, b.shape());
  return combine(action, b.coords(), dim);
}

AlgebraElement PreModule::inner(const CVector& x, const CVector& y) const {
  if (x.size() != dim || y.size() != dim) throw Error(ErrorKind::ShapeMismatch, "vector length differs from module dim");
  CVector c(algebra.dim());
  for (int b = 0; b < algebra.dim(); ++b) c(b) = x.dot(pairing[b] * y);
  return AlgebraElement::from_coords(algebra, c);
}

PreModuleReport check_premodule(const PreModule& pre, const Tolerance& tol) {
  PreModuleReport r;
  const AlgebraShape& s = pre.algebra;
  const int n = s.dim();
  double scale = 0;
  for (int b = 0; b < n; ++b) {
    r.pairing_hermiticity =
        std::max(r.pairing_hermiticity, operator_norm(pre.pairing[s.adjoint_index(b)] - pre.pairing[b].adjoint()));
    scale = std::max(scale, operator_norm(pre.pairing[b]));
  }
  // ⟨x, y·u_γ⟩ has coefficient P_δ R_γ at u_δ; ⟨x,y⟩u_γ has P_{(i,k,m)} at u_{(i,k,n)} for γ = (i,m,n).
  for (int g = 0; g < n; ++g) {
    const auto ug = s.unit(g);
    for (int d = 0; d < n; ++d) {
      const auto ud = s.unit(d);
      CMatrix lhs = pre.pairing[d] * pre.action[g];
      if (ud.block == ug.block && ud.col == ug.col) lhs -= pre.pairing[s.index(ug.block, ud.row, ug.row)];
      r.right_linearity = std::max(r.right_linearity, operator_norm(lhs));
    }
  }
  CMatrix unit_action = CMatrix::Zero(pre.dim, pre.dim);
  for (int b = 0; b < n; ++b) {
    const auto ub = s.unit(b);
    if (ub.row == ub.col) unit_action += pre.action[b];
    for (int g = 0; g < n; ++g) {
      const auto ug = s.unit(g);
      CMatrix diff = -pre.action[g] * pre.action[b];
      if (ub.block == ug.block && ub.col == ug.row) diff += pre.action[s.index(ub.block, ub.row, ug.col)];
      r.action_law = std::max(r.action_law, operator_norm(diff));
    }
  }
  r.action_law = std::max(r.action_law, operator_norm(unit_action - CMatrix::Identity(pre.dim, pre.dim)));
  r.gram_min_eigenvalue = pre.dim == 0 ? 0.0 : min_herm_eigenvalue(pre.gram());
  const double t = tol.scaled(scale);
  r.pass = r.pairing_hermiticity <= t && r.right_linearity <= t && r.action_law <= tol.scaled(1.0) &&
           r.gram_min_eigenvalue >= -t;
  return r;
}

HilbertModule HilbertModule::from_pre(PreModule pre, const Tolerance& tol) {
  const int nb = pre.algebra.dim();
  if (static_cast<int>(pre.action.size()) != nb || static_cast<int>(pre.pairing.size()) != nb)
    throw Error(ErrorKind::ShapeMismatch, "module needs one action and pairing matrix per basis element");
  for (int b = 0; b < nb; ++b) {
    if (pre.action[b].rows() != pre.dim || pre.action[b].cols() != pre.dim || pre.pairing[b].rows() != pre.dim ||
        pre.pairing[b].cols() != pre.dim)
      throw Error(ErrorKind::ShapeMismatch, "module matrix size differs from dim");
    require_finite(pre.action[b], "module action");
    require_finite(pre.pairing[b], "module pairing");
  }
  auto impl = std::make_shared<Impl>();
  impl->id = next_module_id.fetch_add(1);
  impl->gram = pre.gram();
  const int d = pre.dim;
  if (d == 0) {
    impl->gram_inv = impl->gram_sqrt = impl->gram_inv_sqrt = CMatrix(0, 0);
  } else {
    HermEig e = herm_eig(impl->gram, tol);
    const double lmax = e.values(d - 1);
    if (!(e.values(0) > tol.rtol * lmax) || !(lmax > 0))
      throw Error(ErrorKind::SingularGram, "module Gram matrix is not positive definite");
    RVector sq = e.values.cwiseSqrt();
    impl->gram_sqrt = e.vectors * sq.cast<cplx>().asDiagonal() * e.vectors.adjoint();
    impl->gram_inv_sqrt = e.vectors * sq.cwiseInverse().cast<cplx>().asDiagonal() * e.vectors.adjoint();
    impl->gram_inv = e.vectors * e.values.cwiseInverse().cast<cplx>().asDiagonal() * e.vectors.adjoint();
  }
  impl->pre = std::move(pre);
  HilbertModule m;
  m.impl_ = std::move(impl);
  return m;
}

double HilbertModule::norm(const CVector& x) const { return std::sqrt(inner(x, x).norm()); }

HilbertModule rect_module(const AlgebraShape& b, const std::vector<int>& multiplicities,
                          const std::vector<CMatrix>& metrics) {
  const int k = b.num_blocks();
  if (static_cast<int>(multiplicities.size()) != k)
    throw Error(ErrorKind::ShapeMismatch, "one multiplicity per algebra block required");
  if (!metrics.empty() && static_cast<int>(metrics.size()) != k)
    throw Error(ErrorKind::ShapeMismatch, "one metric per algebra block required");
  std::vector<int> offset(k);
  int d = 0;
  for (int i = 0; i < k; ++i) {
    offset[i] = d;
    d += multiplicities[i] * b.block_size(i);
  }
  PreModule pre;
  pre.algebra = b;
  pre.dim = d;
  pre.action.assign(b.dim(), CMatrix::Zero(d, d));
  pre.pairing.assign(b.dim(), CMatrix::Zero(d, d));
  for (int i = 0; i < k; ++i) {
    const int m = multiplicities[i], n = b.block_size(i);
    CMatrix h = metrics.empty() ? CMatrix::Identity(m, m) : metrics[i];
    if (h.rows() != m || h.cols() != m) throw Error(ErrorKind::ShapeMismatch, "metric size differs from multiplicity");
    auto at = [&](int r, int c) { return offset[i] + r * n + c; };
    for (int kk = 0; kk < n; ++kk)
      for (int l = 0; l < n; ++l) {
        const int beta = b.index(i, kk, l);
        for (int r = 0; r < m; ++r) pre.action[beta](at(r, l), at(r, kk)) = 1.0;
        for (int r = 0; r < m; ++r)
          for (int r2 = 0; r2 < m; ++r2) pre.pairing[beta](at(r, kk), at(r2, l)) = h(r, r2);
      }
  }
  return HilbertModule::from_pre(std::move(pre));
}

HilbertModule algebra_module(const AlgebraShape& b) { return rect_module(b, b.blocks()); }

HilbertModule standard_module(const AlgebraShape& b, int copies) {
  HilbertModule out = zero_module(b);
  const HilbertModule one = algebra_module(b);
  for (int c = 0; c < copies; ++c) out = direct_sum(out, one);
  return out;
}

HilbertModule direct_sum(const HilbertModule& e1, const HilbertModule& e2) {
  require_algebra(e1.algebra(), e2.algebra());
  const int d1 = e1.dim(), d2 = e2.dim();
  PreModule pre;
  pre.algebra = e1.algebra();
  pre.dim = d1 + d2;
  for (int b = 0; b < pre.algebra.dim(); ++b) {
    CMatrix r = CMatrix::Zero(d1 + d2, d1 + d2), p = r;
    r.topLeftCorner(d1, d1) = e1.action(b);
    r.bottomRightCorner(d2, d2) = e2.action(b);
    p.topLeftCorner(d1, d1) = e1.pairing(b);
    p.bottomRightCorner(d2, d2) = e2.pairing(b);
    pre.action.push_back(std::move(r));
    pre.pairing.push_back(std::move(p));
  }
  return HilbertModule::from_pre(std::move(pre));
}

HilbertModule pullback_metric(const HilbertModule& e, const CMatrix& c) {
  PreModule pre = e.data();
  for (auto& p : pre.pairing) p = c.adjoint() * p * c;
  return HilbertModule::from_pre(std::move(pre));
}

HilbertModule zero_module(const AlgebraShape& b) {
  PreModule pre;
  pre.algebra = b;
  pre.dim = 0;
  pre.action.assign(b.dim(), CMatrix(0, 0));
  pre.pairing.assign(b.dim(), CMatrix(0, 0));
  return HilbertModule::from_pre(std::move(pre));
}

ModuleMap identity_map(const HilbertModule& e) { return {e, e, CMatrix::Identity(e.dim(), e.dim())}; }

ModuleMap zero_map(const HilbertModule& src, const HilbertModule& tgt) {
  return {src, tgt, CMatrix::Zero(tgt.dim(), src.dim())};
}

ModuleMap compose(const ModuleMap& after, const ModuleMap& before) {
  if (!after.source.same(before.target)) throw Error(ErrorKind::ObjectMismatch, "composed maps do not meet");
  return {before.source, after.target, after.matrix * before.matrix};
}

ModuleMap operator+(const ModuleMap& a, const ModuleMap& b) {
  if (!a.source.same(b.source) || !a.target.same(b.target)) throw Error(ErrorKind::ObjectMismatch, "sum of maps between different modules");
  return {a.source, a.target, a.matrix + b.matrix};
}

ModuleMap operator-(const ModuleMap& a, const ModuleMap& b) { return a + cplx(-1) * b; }

ModuleMap operator*(cplx s, const ModuleMap& a) { return {a.source, a.target, s * a.matrix}; }

CMatrix realize(const CMatrix& x, const HilbertModule& src, const HilbertModule& tgt) {
  if (x.rows() != tgt.dim() || x.cols() != src.dim()) throw Error(ErrorKind::ShapeMismatch, "map size differs from modules");
  return tgt.gram_sqrt() * x * src.gram_inv_sqrt();
}

double realized_norm(const CMatrix& x, const HilbertModule& src, const HilbertModule& tgt) {
  return operator_norm(realize(x, src, tgt));
}

double linearity_residual(const ModuleMap& m) {
  require_algebra(m.source.algebra(), m.target.algebra());
  double r = 0;
  for (int b = 0; b < m.source.algebra().dim(); ++b)
    r = std::max(r, realized_norm(m.matrix * m.source.action(b) - m.target.action(b) * m.matrix, m.source, m.target));
  return r;
}

ModuleMap adjoint_map(const ModuleMap& eta, const Tolerance&) {
  return {eta.target, eta.source, eta.source.gram_inv() * eta.matrix.adjoint() * eta.target.gram()};
}

double adjoint_identity_residual(const ModuleMap& eta, const ModuleMap& eta_star) {
  double r = 0;
  for (int b = 0; b < eta.source.algebra().dim(); ++b)
    r = std::max(r, operator_norm(eta.matrix.adjoint() * eta.target.pairing(b) - eta.source.pairing(b) * eta_star.matrix));
  return r;
}

double module_operator_norm(const ModuleMap& eta) { return realized_norm(eta.matrix, eta.source, eta.target); }

double unitarity_residual(const ModuleMap& eta) {
  if (eta.source.dim() != eta.target.dim()) return std::numeric_limits<double>::infinity();
  const CMatrix w = realize(eta.matrix, eta.source, eta.target);
  const CMatrix id = CMatrix::Identity(w.rows(), w.cols());
  return std::max(operator_norm(w.adjoint() * w - id), operator_norm(w * w.adjoint() - id));
}

ModuleMap rank_one_operator(const HilbertModule& e, const CVector& x, const CVector& y) {
  CMatrix m = CMatrix::Zero(e.dim(), e.dim());
  for (int b = 0; b < e.algebra().dim(); ++b) m += (e.action(b) * x) * (y.adjoint() * e.pairing(b));
  return {e, e, m};
}

CMatrix commutant_average(const HilbertModule& e, const CMatrix& x) {
  const AlgebraShape& s = e.algebra();
  CMatrix out = CMatrix::Zero(e.dim(), e.dim());
  for (int i = 0; i < s.num_blocks(); ++i) {
    const int n = s.block_size(i);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) out += e.action(s.index(i, k, l)) * x * e.action(s.index(i, l, k));
  }
  return out;
}

CMatrix random_adjointable(const HilbertModule& e, std::uint64_t seed) {
  Rng rng(seed);
  CMatrix t = commutant_average(e, rng.ginibre(e.dim(), e.dim()));
  const double n = e.dim() == 0 ? 0.0 : realized_norm(t, e, e);
  if (n > 0) t /= n;
  return t;
}

CMatrix random_module_unitary(const HilbertModule& e, std::uint64_t seed) {
  if (e.dim() == 0) return CMatrix(0, 0);
  const CMatrix t = realize(random_adjointable(e, seed), e, e);
  const CMatrix h = 0.5 * (t + t.adjoint());
  const CMatrix w = herm_function(h, [](double v) { return std::exp(cplx(0, 3.0 * v)); });
  return e.gram_inv_sqrt() * w * e.gram_sqrt();
}

namespace {

CMatrix twisted_action(const HilbertModule& tgt, const Automorphism& a, int beta) {
  return combine(tgt.data().action, a.matrix().col(beta), tgt.dim());
}

}  // namespace

double alpha_linearity_residual(const AlphaLinearMap& t) {
  require_algebra(t.source.algebra(), t.target.algebra());
  double r = 0;
  for (int b = 0; b < t.source.algebra().dim(); ++b)
    r = std::max(r, realized_norm(t.matrix * t.source.action(b) - twisted_action(t.target, t.twist, b) * t.matrix,
                                  t.source, t.target));
  return r;
}

double alpha_adjoint_residual(const AlphaLinearMap& t, const AlphaLinearMap& t_star) {
  const int n = t.source.algebra().dim();
  const CMatrix& m = t.twist.matrix();
  double r = 0;
  for (int g = 0; g < n; ++g) {
    CMatrix rhs = CMatrix::Zero(t.source.dim(), t.target.dim());
    for (int b = 0; b < n; ++b)
      if (m(g, b) != cplx(0)) rhs += m(g, b) * (t.source.pairing(b) * t_star.matrix);
    r = std::max(r, operator_norm(t.matrix.adjoint() * t.target.pairing(g) - rhs));
  }
  return r;
}

Quotient quotient_by_null(const PreModule& pre, const Tolerance& tol) {
  const RankKernel rk = rank_kernel(pre.gram(), tol);
  const CMatrix& s = rk.range_basis;
  const CMatrix q = s.adjoint();
  PreModule out;
  out.algebra = pre.algebra;
  out.dim = rk.rank;
  for (int b = 0; b < pre.algebra.dim(); ++b) {
    const CMatrix& r = pre.action[b];
    if (rk.kernel_basis.cols() > 0) {
      const double leak = operator_norm(q * r * rk.kernel_basis);
      if (leak > tol.scaled(operator_norm(r)))
        throw Error(ErrorKind::SubmoduleViolation, "null space is not invariant under the right action");
    }
    out.action.push_back(q * r * s);
    out.pairing.push_back(q * pre.pairing[b] * s);
  }
  return {HilbertModule::from_pre(std::move(out), tol), q, s, rk.kernel_basis};
}

}  // namespace ksv
