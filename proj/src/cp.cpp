#include "ksv/cp.hpp"

#include <algorithm>
#include <cmath>

#include "ksv/kernels.hpp"
#include "ksv/random.hpp"

namespace ksv {

namespace {

CMatrix combine(const std::vector<CMatrix>& mats, const CVector& c, Eigen::Index dim) {
  CMatrix out = CMatrix::Zero(dim, dim);
  for (Eigen::Index b = 0; b < c.size(); ++b)
    if (c(b) != cplx(0)) out += c(b) * mats[b];
  return out;
}

// Adjoint of an operator on one module.
CMatrix adj(const CMatrix& t, const HilbertModule& e) { return e.gram_inv() * t.adjoint() * e.gram(); }

void require_same_source(const CPMap& a, const CPMap& b) {
  if (!(a.algebra == b.algebra) || !a.module.same(b.module))
    throw Error(ErrorKind::ObjectMismatch, "CP maps live on different objects");
}

}  // namespace

CMatrix CPMap::operator()(const AlgebraElement& a) const {
  if (!(a.shape() == algebra)) throw Error(ErrorKind::ShapeMismatch, "element outside the domain of the CP map");
  return combine(images, a.coords(), module.dim());
}

double CPMap::scale() const {
  double s = 0;
  for (const auto& x : images) s = std::max(s, realized_norm(x, module, module));
  return s;
}

double hermiticity_residual(const CPMap& phi) {
  double r = 0;
  for (int b = 0; b < phi.algebra.dim(); ++b)
    r = std::max(r, realized_norm(phi.images[phi.algebra.adjoint_index(b)] - adj(phi.images[b], phi.module),
                                  phi.module, phi.module));
  return r;
}

double image_linearity_residual(const CPMap& phi) {
  double r = 0;
  for (const auto& x : phi.images) r = std::max(r, linearity_residual({phi.module, phi.module, x}));
  return r;
}

CpReport check_cp(const CPMap& phi, const Tolerance& tol) {
  const double scale = phi.scale();
  if (image_linearity_residual(phi) > tol.scaled(scale))
    throw Error(ErrorKind::NonLinearMap, "CP map image is not B-linear");
  CpReport r;
  r.hermiticity = hermiticity_residual(phi);
  bool ok = r.hermiticity <= tol.scaled(scale);
  for (int i = 0; i < phi.algebra.num_blocks(); ++i) {
    const int n = phi.algebra.block_size(i);
    std::vector<CMatrix> blocks;
    blocks.reserve(n * n);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) blocks.push_back(realize(phi.images[phi.algebra.index(i, k, l)], phi.module, phi.module));
    const double m = phi.module.dim() == 0 ? 0.0 : min_herm_eigenvalue(kernels::choi_matrix(blocks, n));
    r.min_choi_eigenvalue.push_back(m);
    ok = ok && m >= -tol.scaled(scale);
  }
  r.is_cp = ok;
  return r;
}

CorrespondenceReport check_correspondence(const CPMap& phi, const Tolerance& tol) {
  CorrespondenceReport r;
  const AlgebraShape& s = phi.algebra;
  const HilbertModule& e = phi.module;
  for (int p = 0; p < s.dim(); ++p) {
    const auto up = s.unit(p);
    for (int q = 0; q < s.dim(); ++q) {
      const auto uq = s.unit(q);
      CMatrix diff = -phi.images[p] * phi.images[q];
      if (up.block == uq.block && up.col == uq.row) diff += phi.images[s.index(up.block, up.row, uq.col)];
      r.multiplicativity = std::max(r.multiplicativity, realized_norm(diff, e, e));
    }
  }
  r.unitality = realized_norm(phi(AlgebraElement::unit(s)) - CMatrix::Identity(e.dim(), e.dim()), e, e);
  r.pass = r.multiplicativity <= tol.scaled(1.0) && r.unitality <= tol.scaled(1.0);
  return r;
}

CPMap random_cp(const AlgebraShape& a, const HilbertModule& e, std::uint64_t seed) {
  Rng rng(seed);
  const int d = e.dim();
  CPMap phi{a, e, std::vector<CMatrix>(a.dim(), CMatrix::Zero(d, d))};
  for (int i = 0; i < a.num_blocks(); ++i) {
    const int n = a.block_size(i);
    const int rank = rng.integer(1, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n * rank));
    std::vector<CMatrix> t, ts;
    for (int k = 0; k < n * rank; ++k) {
      t.push_back(scale * random_adjointable(e, rng.next()));
      ts.push_back(adj(t.back(), e));
    }
    for (int k = 0; k < n; ++k)
      for (int k2 = 0; k2 < n; ++k2)
        for (int l = 0; l < rank; ++l) phi.images[a.index(i, k, k2)] += ts[k * rank + l] * t[k2 * rank + l];
  }
  return phi;
}

CPMap random_correspondence(const AlgebraShape& a, const AlgebraShape& b, std::uint64_t seed, int max_dim) {
  Rng rng(seed);
  const int na = a.num_blocks(), nb = b.num_blocks();
  std::vector<std::vector<int>> mu(na, std::vector<int>(nb, 0));
  auto module_dim = [&] {
    int d = 0;
    for (int j = 0; j < nb; ++j)
      for (int i = 0; i < na; ++i) d += mu[i][j] * a.block_size(i) * b.block_size(j);
    return d;
  };
  // Every B block that is used must carry a unital representation, so each
  // nonzero column of mu is filled block by block until the size cap is hit.
  std::vector<int> order(nb);
  for (int j = 0; j < nb; ++j) order[j] = j;
  std::shuffle(order.begin(), order.end(), std::mt19937_64(rng.next()));
  for (int j : order) {
    for (int i = 0; i < na; ++i) {
      const int want = rng.integer(0, 2);
      for (int c = 0; c < want; ++c) {
        ++mu[i][j];
        if (module_dim() > max_dim) {
          --mu[i][j];
          break;
        }
      }
    }
  }
  if (module_dim() == 0) {
    int best_i = 0, best_j = 0;
    for (int i = 0; i < na; ++i)
      for (int j = 0; j < nb; ++j)
        if (a.block_size(i) * b.block_size(j) < a.block_size(best_i) * b.block_size(best_j)) best_i = i, best_j = j;
    mu[best_i][best_j] = 1;
    if (module_dim() > max_dim) throw Error(ErrorKind::InvalidConfig, "module size cap too small for the algebras");
  }
  std::vector<int> m(nb, 0);
  for (int j = 0; j < nb; ++j)
    for (int i = 0; i < na; ++i) m[j] += mu[i][j] * a.block_size(i);
  std::vector<CMatrix> metrics;
  for (int j = 0; j < nb; ++j) metrics.push_back(m[j] > 0 ? rng.positive_definite(m[j]) : CMatrix(0, 0));
  const HilbertModule e = rect_module(b, m, metrics);
  CPMap pi{a, e, std::vector<CMatrix>(a.dim(), CMatrix::Zero(e.dim(), e.dim()))};
  int offset = 0;
  for (int j = 0; j < nb; ++j) {
    const int n = b.block_size(j);
    if (m[j] == 0) continue;
    std::vector<std::vector<int>> col(na, std::vector<int>(1));
    for (int i = 0; i < na; ++i) col[i][0] = mu[i][j];
    const StarMap emb = block_embedding(a, col, {rng.unitary(m[j])});
    const CMatrix hs = psd_sqrt(metrics[j]), his = pd_inv_sqrt(metrics[j]);
    for (int u = 0; u < a.dim(); ++u) {
      const CMatrix t = his * emb.image(u).block(0) * hs;
      pi.images[u].block(offset, offset, m[j] * n, m[j] * n) = kron(t, CMatrix::Identity(n, n));
    }
    offset += m[j] * n;
  }
  return pi;
}

CPMap conjugate(const CPMap& phi, const CMatrix& w, const Automorphism& alpha) {
  const CMatrix ws = adj(w, phi.module);
  CPMap out{phi.algebra, phi.module, {}};
  for (int b = 0; b < phi.algebra.dim(); ++b)
    out.images.push_back(w * combine(phi.images, alpha.inverse_map().matrix().col(b), phi.module.dim()) * ws);
  return out;
}

CPMap pullback(const CPMap& phi, const Automorphism& alpha) {
  CPMap out{phi.algebra, phi.module, {}};
  for (int b = 0; b < phi.algebra.dim(); ++b)
    out.images.push_back(combine(phi.images, alpha.matrix().col(b), phi.module.dim()));
  return out;
}

CPMap operator+(const CPMap& a, const CPMap& b) {
  require_same_source(a, b);
  CPMap out = a;
  for (size_t i = 0; i < out.images.size(); ++i) out.images[i] += b.images[i];
  return out;
}

CPMap operator*(double s, const CPMap& a) {
  CPMap out = a;
  for (auto& x : out.images) x *= s;
  return out;
}

Intertwiner identity_intertwiner(const HilbertModule& e, const AlgebraShape& a) {
  return {identity_map(e), Automorphism::identity(a)};
}

Intertwiner compose(const Intertwiner& after, const Intertwiner& before) {
  return {compose(after.eta, before.eta), compose(after.alpha, before.alpha)};
}

std::vector<CMatrix> intertwiner_space(const CPMap& phi1, const CPMap& phi2, const Automorphism& alpha,
                                       const Tolerance& tol) {
  const HilbertModule& e1 = phi1.module;
  const HilbertModule& e2 = phi2.module;
  const int d1 = e1.dim(), d2 = e2.dim();
  if (d1 == 0 || d2 == 0) return {};
  const int na = phi1.algebra.dim(), nb = e1.algebra().dim();
  const CMatrix i1 = CMatrix::Identity(d1, d1), i2 = CMatrix::Identity(d2, d2);
  CMatrix sys((na + nb) * d1 * d2, d1 * d2);
  const CPMap phi2a = pullback(phi2, alpha);
  Eigen::Index row = 0;
  for (int u = 0; u < na; ++u) {
    const CMatrix f1 = realize(phi1.images[u], e1, e1), f2 = realize(phi2a.images[u], e2, e2);
    sys.middleRows(row, d1 * d2) = kron(i1, f2) - kron(f1.transpose(), i2);
    row += d1 * d2;
  }
  for (int b = 0; b < nb; ++b) {
    const CMatrix r1 = realize(e1.action(b), e1, e1), r2 = realize(e2.action(b), e2, e2);
    sys.middleRows(row, d1 * d2) = kron(r1.transpose(), i2) - kron(i1, r2);
    row += d1 * d2;
  }
  // the action rows have unit scale, so tiny systems are zero rather than full rank
  const CMatrix ker = null_space(sys, tol, std::max({1.0, phi1.scale(), phi2.scale()}));
  std::vector<CMatrix> out;
  for (Eigen::Index c = 0; c < ker.cols(); ++c) {
    const CMatrix x = Eigen::Map<const CMatrix>(ker.col(c).data(), d2, d1);
    out.push_back(e2.gram_inv_sqrt() * x * e1.gram_sqrt());
  }
  return out;
}

MorphismReport check_morphism(const Intertwiner& m, const CPMap& phi1, const CPMap& phi2, const Tolerance& tol) {
  if (!m.eta.source.same(phi1.module) || !m.eta.target.same(phi2.module) || !(phi1.algebra == phi2.algebra) ||
      !(m.alpha.shape() == phi1.algebra))
    throw Error(ErrorKind::ShapeMismatch, "morphism does not connect the given objects");
  const HilbertModule& e1 = phi1.module;
  const HilbertModule& e2 = phi2.module;
  const CMatrix& eta = m.eta.matrix;
  const CMatrix es = e1.gram_inv() * eta.adjoint() * e2.gram();
  const CMatrix ese = es * eta, ees = eta * es;
  const CPMap phi2a = pullback(phi2, m.alpha);
  MorphismReport r;
  for (int u = 0; u < phi1.algebra.dim(); ++u) {
    const CMatrix& f1 = phi1.images[u];
    const CMatrix& f2 = phi2a.images[u];
    r.intertwining = std::max(r.intertwining, realized_norm(f2 * eta - eta * f1, e1, e2));
    r.adjoint_side = std::max(r.adjoint_side, realized_norm(es * f2 - f1 * es, e2, e1));
    r.commutation = std::max({r.commutation, realized_norm(f1 * ese - ese * f1, e1, e1),
                              realized_norm(f2 * ees - ees * f2, e2, e2)});
  }
  r.linearity = linearity_residual(m.eta);
  const double n = module_operator_norm(m.eta);
  r.threshold = tol.scaled(n * n * std::max({1.0, phi1.scale(), phi2.scale()}));
  r.pass = r.intertwining <= r.threshold && r.adjoint_side <= r.threshold && r.commutation <= r.threshold &&
           r.linearity <= r.threshold;
  return r;
}

double hom_pseudometric(const Intertwiner& m1, const Intertwiner& m2, const CVector& x, const AlgebraElement& a) {
  if (!m1.eta.source.same(m2.eta.source) || !m1.eta.target.same(m2.eta.target))
    throw Error(ErrorKind::ShapeMismatch, "morphisms between different objects");
  return m1.eta.target.norm(m1.eta.matrix * x - m2.eta.matrix * x) + (m1.alpha(a) - m2.alpha(a)).norm();
}

namespace {

AlgebraElement family_sum(const HilbertModule& e, const CPMap& phi, const std::vector<AlgebraElement>& as,
                          const std::vector<CVector>& xs, const CMatrix& extra) {
  AlgebraElement s = AlgebraElement::zero(e.algebra());
  for (size_t i = 0; i < as.size(); ++i)
    for (size_t j = 0; j < as.size(); ++j)
      s = s + e.inner(xs[i], phi(as[i].adjoint() * as[j]) * extra * xs[j]);
  return s;
}

}  // namespace

double bounded_family_excess(const Intertwiner& m, const CPMap& phi1, const CPMap& phi2,
                             const std::vector<AlgebraElement>& as, const std::vector<CVector>& xs,
                             const std::vector<CVector>& ys) {
  const HilbertModule& e1 = phi1.module;
  const HilbertModule& e2 = phi2.module;
  const CMatrix& eta = m.eta.matrix;
  const CMatrix es = e1.gram_inv() * eta.adjoint() * e2.gram();
  const double n2 = std::pow(module_operator_norm(m.eta), 2);
  const double l1 = family_sum(e1, phi1, as, xs, es * eta).norm();
  const double r1 = n2 * family_sum(e1, phi1, as, xs, CMatrix::Identity(e1.dim(), e1.dim())).norm();
  std::vector<AlgebraElement> alpha_as;
  for (const auto& a : as) alpha_as.push_back(m.alpha(a));
  const double l2 = family_sum(e2, phi2, alpha_as, ys, eta * es).norm();
  const double r2 = n2 * family_sum(e2, phi2, alpha_as, ys, CMatrix::Identity(e2.dim(), e2.dim())).norm();
  return std::max(l1 - r1, l2 - r2);
}

PropertiesReport properties_lemma(const Intertwiner& m, const CPMap& phi1, const CPMap& phi2,
                                  const AlgebraElement& a) {
  const HilbertModule& e1 = phi1.module;
  const HilbertModule& e2 = phi2.module;
  const CMatrix& eta = m.eta.matrix;
  const CMatrix es = e1.gram_inv() * eta.adjoint() * e2.gram();
  const double n2 = std::pow(module_operator_norm(m.eta), 2);
  PropertiesReport r;
  const CMatrix f1 = phi1(a), f2 = phi2(m.alpha(a));
  r.adjoint_side = realized_norm(es * f2 - f1 * es, e2, e1);
  r.commutation = std::max(realized_norm(f1 * es * eta - es * eta * f1, e1, e1),
                           realized_norm(f2 * eta * es - eta * es * f2, e2, e2));
  const AlgebraElement aa = a.adjoint() * a;
  const CMatrix p1 = phi1(aa), p2 = phi2(m.alpha(aa));
  const CMatrix low1 = realize(p1 * es * eta, e1, e1), low2 = realize(p2 * eta * es, e2, e2);
  const CMatrix up1 = realize(n2 * p1, e1, e1) - low1, up2 = realize(n2 * p2, e2, e2) - low2;
  auto neg = [](const CMatrix& x) { return x.rows() == 0 ? 0.0 : -min_herm_eigenvalue(x); };
  r.lower_positivity = std::max(neg(low1), neg(low2));
  r.upper_positivity = std::max(neg(up1), neg(up2));
  return r;
}

}  // namespace ksv
