#include "ksv/generators.hpp"

#include <algorithm>

namespace ksv {

namespace {

const std::vector<std::vector<int>> kShapes = {{1}, {2}, {3}, {2, 2}, {1, 2}};

int max_algebra_dim(const SizeCaps& caps) {
  int best = 0;
  for (const auto& s : kShapes) {
    if (static_cast<int>(s.size()) > caps.max_blocks) continue;
    int d = 0;
    bool fits = true;
    for (int n : s) {
      fits = fits && n <= caps.max_block;
      d += n * n;
    }
    if (fits) best = std::max(best, d);
  }
  return best;
}

}  // namespace

void validate_caps(const SizeCaps& caps) {
  if (caps.max_block < 1 || caps.max_blocks < 1 || caps.max_module_dim < 1 || caps.max_group_order < 1 ||
      caps.instances_per_suite < 1)
    throw Error(ErrorKind::InvalidConfig, "size caps must be positive");
  if (max_algebra_dim(caps) * caps.max_module_dim > 200)
    throw Error(ErrorKind::InvalidConfig, "d_A * d_E may exceed 200");
}

AlgebraShape random_shape(Rng& rng, const SizeCaps& caps) {
  std::vector<std::vector<int>> fit;
  for (const auto& s : kShapes) {
    if (static_cast<int>(s.size()) > caps.max_blocks) continue;
    if (*std::max_element(s.begin(), s.end()) > caps.max_block) continue;
    fit.push_back(s);
  }
  return AlgebraShape(fit[rng.integer(0, static_cast<int>(fit.size()) - 1)]);
}

HilbertModule random_module(const AlgebraShape& b, Rng& rng, int max_dim) {
  const int k = b.num_blocks();
  std::vector<int> mult(k, 0);
  for (int attempt = 0; attempt < 50; ++attempt) {
    int dim = 0;
    for (int i = 0; i < k; ++i) {
      mult[i] = rng.integer(0, 2);
      dim += mult[i] * b.block_size(i);
    }
    if (dim >= 1 && dim <= max_dim) break;
    if (attempt == 49) {
      std::fill(mult.begin(), mult.end(), 0);
      const auto smallest = std::min_element(b.blocks().begin(), b.blocks().end()) - b.blocks().begin();
      mult[smallest] = 1;
    }
  }
  std::vector<CMatrix> metrics;
  for (int i = 0; i < k; ++i) metrics.push_back(rng.positive_definite(mult[i]));
  return rect_module(b, mult, metrics);
}

StarMap random_star_map(const AlgebraShape& domain, Rng& rng, const SizeCaps& caps) {
  const int k = domain.num_blocks();
  for (int attempt = 0; attempt < 100; ++attempt) {
    const int blocks = rng.integer(1, caps.max_blocks);
    std::vector<std::vector<int>> mult(k, std::vector<int>(blocks, 0));
    std::vector<int> sizes(blocks, 0);
    bool ok = true;
    for (int j = 0; j < blocks && ok; ++j) {
      for (int i = 0; i < k; ++i) {
        mult[i][j] = rng.integer(0, 2);
        sizes[j] += mult[i][j] * domain.block_size(i);
      }
      ok = sizes[j] >= 1 && sizes[j] <= caps.max_block;
    }
    for (int i = 0; i < k && ok; ++i) {
      int total = 0;
      for (int j = 0; j < blocks; ++j) total += mult[i][j];
      ok = total > 0;
    }
    if (!ok) continue;
    std::vector<CMatrix> units;
    for (int j = 0; j < blocks; ++j) units.push_back(rng.unitary(sizes[j]));
    return block_embedding(domain, mult, units);
  }
  return StarMap::identity(domain);
}

CPMap direct_sum_cp(const CPMap& phi, const CPMap& psi) {
  CPMap out;
  out.algebra = phi.algebra;
  out.module = direct_sum(phi.module, psi.module);
  const int d1 = phi.module.dim(), d2 = psi.module.dim();
  for (int b = 0; b < phi.algebra.dim(); ++b) {
    CMatrix m = CMatrix::Zero(d1 + d2, d1 + d2);
    m.topLeftCorner(d1, d1) = phi.images[b];
    m.bottomRightCorner(d2, d2) = psi.images[b];
    out.images.push_back(m);
  }
  return out;
}

CMatrix random_intertwiner(const CPMap& phi1, const CPMap& phi2, const Automorphism& alpha, Rng& rng,
                           const Tolerance& tol) {
  const auto basis = intertwiner_space(phi1, phi2, alpha, tol);
  CMatrix eta = CMatrix::Zero(phi2.module.dim(), phi1.module.dim());
  for (const auto& b : basis) eta += rng.gaussian() * b;
  const double n = realized_norm(eta, phi1.module, phi2.module);
  if (n == 0.0) return eta;
  return eta * (rng.uniform(0.5, 1.5) / n);
}

MorphismChain random_chain(const CPMap& start, int length, int extra_dim, Rng& rng, const Tolerance& tol) {
  MorphismChain chain;
  chain.phis.push_back(start);
  const AlgebraShape& a = start.algebra;
  for (int k = 0; k < length; ++k) {
    const CPMap& phi = chain.phis.back();
    const Automorphism alpha = random_automorphism(a, rng.next());
    const CMatrix w = random_module_unitary(phi.module, rng.next());
    CPMap next = conjugate(phi, w, alpha);
    if (extra_dim > 0 && rng.integer(0, 1) == 1) {
      const HilbertModule extra = random_module(phi.module.algebra(), rng, extra_dim);
      next = direct_sum_cp(next, random_cp(a, extra, rng.next()));
    }
    CMatrix eta = random_intertwiner(phi, next, alpha, rng, tol);
    chain.arrows.push_back({{phi.module, next.module, eta}, alpha});
    chain.phis.push_back(next);
  }
  return chain;
}

Diagram random_diagram(const AlgebraShape& a, Rng& rng, const SizeCaps& caps, const Tolerance& tol) {
  const int dim_cap = caps.max_module_dim + 2;
  Diagram d;
  const AlgebraShape b0 = random_shape(rng, caps);
  const HilbertModule e0 = random_module(b0, rng, std::min(3, caps.max_module_dim));
  d.objects.push_back(make_object(random_cp(a, e0, rng.next())));

  for (int step = 0; step < 2; ++step) {
    const PosCorObject src = d.objects.back();
    StarMap rho = StarMap::identity(src.coefficients());
    TensorModule t = tensor_along(src.module(), rho, tol);
    for (int attempt = 0; attempt < 20; ++attempt) {
      StarMap cand = random_star_map(src.coefficients(), rng, caps);
      TensorModule tc = tensor_along(src.module(), cand, tol);
      if (tc.result.dim() >= 1 && tc.result.dim() <= dim_cap) {
        rho = cand;
        t = tc;
        break;
      }
    }
    const CPMap lifted = tensor_cp(src.phi, t, tol);
    const Automorphism alpha = random_automorphism(a, rng.next());
    const CMatrix w = random_module_unitary(t.result, rng.next());
    d.objects.push_back(make_object(conjugate(lifted, w, alpha)));
    const PosCorObject dst = d.objects.back();
    const double c = rng.uniform(0.5, 1.0);
    d.arrows.push_back({step, step + 1, make_morphism(src, dst, rho, c * w * t.q, alpha, tol)});
    if (step == 0) {
      const CMatrix eta = random_intertwiner(lifted, dst.phi, alpha, rng, tol);
      d.arrows.push_back({0, 1, make_morphism(src, dst, rho, eta * t.q, alpha, tol)});
    }
  }
  for (int i = 0; i < 3; ++i) {
    const PosCorMorphism id = poscor_identity(d.objects[i], tol);
    const double c = rng.uniform(0.5, 1.0);
    d.arrows.push_back({i, i, make_morphism(d.objects[i], d.objects[i], id.rho, c * eta_pre(id), id.alpha, tol)});
  }
  return d;
}

std::vector<FiniteGroup> test_groups(int max_order) {
  std::vector<FiniteGroup> out;
  for (auto g : {FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::cyclic(4), FiniteGroup::symmetric3()})
    if (g.order() <= max_order) out.push_back(g);
  if (out.empty()) out.push_back(FiniteGroup::trivial());
  return out;
}

}  // namespace ksv
