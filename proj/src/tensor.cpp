#include "ksv/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace ksv {

namespace {

CMatrix identity(Eigen::Index n) { return CMatrix::Identity(n, n); }

CMatrix combine(const std::vector<CMatrix>& mats, const CVector& c, Eigen::Index dim) {
  CMatrix out = CMatrix::Zero(dim, dim);
  for (Eigen::Index b = 0; b < c.size(); ++b)
    if (c(b) != cplx(0)) out += c(b) * mats[b];
  return out;
}

// Pre-space matrix with column (i, β) = R_E(image of u_β) e_i.
CMatrix action_columns(const HilbertModule& e, const CMatrix& coords_of_images) {
  const int de = e.dim(), db = e.algebra().dim();
  CMatrix m(de, de * db);
  for (int b = 0; b < db; ++b) {
    const CMatrix r = combine(e.data().action, coords_of_images.col(b), de);
    for (int i = 0; i < de; ++i) m.col(i * db + b) = r.col(i);
  }
  return m;
}

}  // namespace

CVector TensorModule::embed(const CVector& x, const CVector& f) const {
  return q * kron(x, f);
}

TensorModule interior_tensor(const HilbertModule& e, const CPMap& pi, const Tolerance& tol, Exec exec) {
  if (!(pi.algebra == e.algebra())) throw Error(ErrorKind::ShapeMismatch, "representation is not of the module's algebra");
  const HilbertModule& f = pi.module;
  const int de = e.dim();
  PreModule pre;
  pre.algebra = f.algebra();
  pre.dim = de * f.dim();
  for (int g = 0; g < f.algebra().dim(); ++g) pre.action.push_back(kron(identity(de), f.action(g)));
  pre.pairing = kernels::tensor_pairing(e.data().pairing, f.data().pairing, pi.images, exec);
  Quotient quo = quotient_by_null(pre, tol);
  return {e, pi, std::move(quo.module), std::move(quo.q), std::move(quo.s), std::move(quo.kernel), {}};
}

namespace {

// One C-over-itself module per shape, so tensors along different maps into C
// share their right factor.
HilbertModule shared_algebra_module(const AlgebraShape& c) {
  static std::mutex mu;
  static std::map<std::vector<int>, HilbertModule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(c.blocks());
  if (it == cache.end()) it = cache.emplace(c.blocks(), algebra_module(c)).first;
  return it->second;
}

}  // namespace

CPMap left_regular(const StarMap& rho) {
  CPMap pi{rho.domain(), shared_algebra_module(rho.codomain()), {}};
  for (int b = 0; b < rho.domain().dim(); ++b) pi.images.push_back(left_mult_matrix(rho.image(b)));
  return pi;
}

TensorModule tensor_along(const HilbertModule& e, const StarMap& rho, const Tolerance& tol) {
  TensorModule tm = interior_tensor(e, left_regular(rho), tol);
  tm.along = rho;
  return tm;
}

double balance_residual(const TensorModule& tm) {
  const int de = tm.left.dim(), df = tm.right().dim();
  double r = 0;
  for (int b = 0; b < tm.left.algebra().dim(); ++b) {
    const CMatrix d = kron(tm.left.action(b), identity(df)) - kron(identity(de), tm.rep.images[b]);
    r = std::max(r, operator_norm(tm.result.gram_sqrt() * tm.q * d));
  }
  return r;
}

ModuleMap tensor_extend(const ModuleMap& t, const TensorModule& from, const TensorModule& to, const Tolerance& tol) {
  if (!t.source.same(from.left) || !t.target.same(to.left) || !from.right().same(to.right()))
    throw Error(ErrorKind::ObjectMismatch, "tensor factors do not match the operator");
  const CMatrix x = kron(t.matrix, identity(from.right().dim()));
  if (from.kernel.cols() > 0 && to.result.dim() > 0) {
    const double leak = operator_norm(to.result.gram_sqrt() * to.q * x * from.kernel);
    if (leak > tol.scaled(operator_norm(x) * operator_norm(to.result.gram_sqrt())))
      throw Error(ErrorKind::WellDefinednessViolation, "T ⊗ I does not preserve the null space");
  }
  return {from.result, to.result, to.q * x * from.s};
}

ModuleMap tensor_extend_operator(const ModuleMap& t, const TensorModule& tm, const Tolerance& tol) {
  return tensor_extend(t, tm, tm, tol);
}

CPMap tensor_cp(const CPMap& phi, const TensorModule& tm, const Tolerance& tol) {
  CPMap out{phi.algebra, tm.result, {}};
  for (const auto& img : phi.images)
    out.images.push_back(tensor_extend_operator({phi.module, phi.module, img}, tm, tol).matrix);
  return out;
}

Intertwiner tensor_lift(const Intertwiner& m, const TensorModule& t1, const TensorModule& t2, const Tolerance& tol) {
  return {tensor_extend(m.eta, t1, t2, tol), m.alpha};
}

namespace {

AlgebraElement pushed_family(const CPMap& pi, const HilbertModule& e, const std::vector<CVector>& xs,
                             const std::vector<CVector>& fs) {
  const HilbertModule& f = pi.module;
  AlgebraElement s = AlgebraElement::zero(f.algebra());
  for (size_t i = 0; i < xs.size(); ++i)
    for (size_t j = 0; j < xs.size(); ++j) s = s + f.inner(fs[i], pi(e.inner(xs[i], xs[j])) * fs[j]);
  return s;
}

}  // namespace

double tensor_family_excess(const ModuleMap& eta, const CPMap& pi, const std::vector<CVector>& xs,
                            const std::vector<CVector>& ys, const std::vector<CVector>& fs) {
  const double n2 = std::pow(module_operator_norm(eta), 2);
  const ModuleMap es = adjoint_map(eta);
  std::vector<CVector> ex, ey;
  for (const auto& x : xs) ex.push_back(eta.matrix * x);
  for (const auto& y : ys) ey.push_back(es.matrix * y);
  const double l1 = pushed_family(pi, eta.target, ex, fs).norm();
  const double r1 = n2 * pushed_family(pi, eta.source, xs, fs).norm();
  const double l2 = pushed_family(pi, eta.source, ey, fs).norm();
  const double r2 = n2 * pushed_family(pi, eta.target, ys, fs).norm();
  return std::max(l1 - r1, l2 - r2);
}

TwistedModule twist_unitary(const HilbertModule& e, const Automorphism& alpha, const Tolerance& tol) {
  TensorModule tm = tensor_along(e, alpha.forward(), tol);
  const CMatrix m = action_columns(e, alpha.inverse_map().matrix());
  AlphaLinearMap u{tm.result, e, alpha.inverse(), m * tm.s};
  return {std::move(tm), std::move(u)};
}

ModuleMap alpha_transport(const AlphaLinearMap& t, const TwistedModule& tw) {
  if (!t.source.same(tw.tensor.left)) throw Error(ErrorKind::ObjectMismatch, "α-linear map does not start at the twisted base");
  const Automorphism alpha = tw.u.twist.inverse();
  if (operator_norm(t.twist.matrix() - alpha.matrix()) > 1e-8 * (1.0 + operator_norm(alpha.matrix())))
    throw Error(ErrorKind::TwistMismatch, "twist of the map differs from the module twist");
  return {tw.tensor.result, t.target, t.matrix * tw.u.matrix};
}

AlphaLinearMap alpha_untransport(const ModuleMap& s, const TwistedModule& tw) {
  if (!s.source.same(tw.tensor.result)) throw Error(ErrorKind::ObjectMismatch, "map does not start at the twisted module");
  return {tw.tensor.left, s.target, tw.u.twist.inverse(), s.matrix * tw.u.matrix.partialPivLu().inverse()};
}

ModuleMap inclusion_map(const TensorModule& tm) {
  const CMatrix m = action_columns(tm.left, identity(tm.left.algebra().dim()));
  return {tm.result, tm.left, m * tm.s};
}

Inclusion inclusion_unitary(const HilbertModule& e, const Tolerance& tol) {
  TensorModule tm = tensor_along(e, StarMap::identity(e.algebra()), tol);
  ModuleMap iota = inclusion_map(tm);
  return {std::move(tm), std::move(iota)};
}

CompositionTensor composition_unitary(const TensorModule& first, const StarMap& rho2, const Tolerance& tol,
                                      const TensorModule* direct) {
  if (first.along.domain().dim() == 0) throw Error(ErrorKind::ObjectMismatch, "first tensor was not built along a *-homomorphism");
  const StarMap rho = compose(rho2, first.along);
  TensorModule second = tensor_along(first.result, rho2, tol);
  TensorModule dir = direct ? *direct : tensor_along(first.left, rho, tol);
  const int de = first.left.dim();
  const int dc = rho2.domain().dim(), dd = rho2.codomain().dim();
  CMatrix y(dd, dc * dd);
  for (int c = 0; c < dc; ++c) y.middleCols(c * dd, dd) = left_mult_matrix(rho2.image(c));
  const CMatrix u = dir.q * kron(identity(de), y) * kron(first.s, identity(dd)) * second.s;
  ModuleMap um{second.result, dir.result, u};
  return {first, std::move(second), std::move(dir), std::move(um)};
}

CompositionTensor composition_unitary(const HilbertModule& e, const StarMap& rho1, const StarMap& rho2,
                                      const Tolerance& tol) {
  return composition_unitary(tensor_along(e, rho1, tol), rho2, tol);
}

LinearMap v_rho(const TensorModule& tm) {
  const CVector one = AlgebraElement::unit(tm.right().algebra()).coords();
  return {tm.left, tm.result, tm.q * kron(identity(tm.left.dim()), CMatrix(one))};
}

double v_rho_linearity_residual(const LinearMap& v, const StarMap& rho) {
  double r = 0;
  for (int b = 0; b < rho.domain().dim(); ++b) {
    const CMatrix rt = combine(v.target.data().action, rho.matrix().col(b), v.target.dim());
    r = std::max(r, operator_norm(v.target.gram_sqrt() * (v.matrix * v.source.action(b) - rt * v.matrix) *
                                  v.source.gram_inv_sqrt()));
  }
  return r;
}

}  // namespace ksv
