#include "ksv/equivariant.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace ksv {

namespace {

CMatrix identity(Eigen::Index n) { return CMatrix::Identity(n, n); }

CMatrix combine(const std::vector<CMatrix>& mats, const CVector& c, Eigen::Index dim) {
  CMatrix out = CMatrix::Zero(dim, dim);
  for (Eigen::Index b = 0; b < c.size(); ++b)
    if (c(b) != cplx(0)) out += c(b) * mats[b];
  return out;
}

CMatrix adj(const CMatrix& t, const HilbertModule& e) { return e.gram_inv() * t.adjoint() * e.gram(); }

std::vector<std::vector<int>> permutations3() {
  std::vector<int> p{0, 1, 2};
  std::vector<std::vector<int>> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

CMatrix permutation_matrix(const std::vector<int>& p) {
  const int n = static_cast<int>(p.size());
  CMatrix m = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) m(p[i], i) = 1.0;
  return m;
}

}  // namespace

FiniteGroup FiniteGroup::from_table(std::string name, std::vector<std::vector<int>> table) {
  const int n = static_cast<int>(table.size());
  if (n == 0) throw Error(ErrorKind::ValidationError, "empty group table");
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != n) throw Error(ErrorKind::ValidationError, "group table is not square");
    for (int x : row)
      if (x < 0 || x >= n) throw Error(ErrorKind::ValidationError, "group table entry out of range");
  }
  FiniteGroup g;
  g.name = std::move(name);
  g.table = std::move(table);
  g.identity = -1;
  for (int e = 0; e < n && g.identity < 0; ++e) {
    bool ok = true;
    for (int x = 0; x < n; ++x) ok = ok && g.table[e][x] == x && g.table[x][e] == x;
    if (ok) g.identity = e;
  }
  if (g.identity < 0) throw Error(ErrorKind::ValidationError, "group table has no identity");
  g.inverse.assign(n, -1);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      if (g.table[x][y] == g.identity && g.table[y][x] == g.identity) g.inverse[x] = y;
  if (std::count(g.inverse.begin(), g.inverse.end(), -1) > 0)
    throw Error(ErrorKind::ValidationError, "group table lacks inverses");
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z)
        if (g.table[g.table[x][y]][z] != g.table[x][g.table[y][z]])
          throw Error(ErrorKind::ValidationError, "group table is not associative");
  g.parity.assign(n, 0);
  return g;
}

FiniteGroup FiniteGroup::cyclic(int n) {
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  FiniteGroup g = from_table("Z" + std::to_string(n), std::move(t));
  if (n % 2 == 0)
    for (int a = 0; a < n; ++a) g.parity[a] = a % 2;
  return g;
}

FiniteGroup FiniteGroup::trivial() {
  FiniteGroup g = cyclic(1);
  g.name = "trivial";
  return g;
}

FiniteGroup FiniteGroup::symmetric3() {
  const auto perms = permutations3();
  std::vector<std::vector<int>> t(6, std::vector<int>(6));
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      std::vector<int> c(3);
      for (int x = 0; x < 3; ++x) c[x] = perms[a][perms[b][x]];
      t[a][b] = static_cast<int>(std::find(perms.begin(), perms.end(), c) - perms.begin());
    }
  FiniteGroup g = from_table("S3", std::move(t));
  for (int a = 0; a < 6; ++a) {
    int inversions = 0;
    for (int x = 0; x < 3; ++x)
      for (int y = x + 1; y < 3; ++y) inversions += perms[a][x] > perms[a][y];
    g.parity[a] = inversions % 2;
  }
  return g;
}

std::vector<std::vector<CMatrix>> FiniteGroup::irreps() const {
  const int n = order();
  std::vector<std::vector<CMatrix>> out;
  auto scalar = [](cplx z) { return CMatrix::Constant(1, 1, z); };
  if (name == "S3") {
    const auto perms = permutations3();
    std::vector<CMatrix> triv, sign, standard;
    CMatrix q(3, 2);
    q << 1 / std::sqrt(2.0), 1 / std::sqrt(6.0), -1 / std::sqrt(2.0), 1 / std::sqrt(6.0), 0, -2 / std::sqrt(6.0);
    for (int a = 0; a < 6; ++a) {
      triv.push_back(scalar(1.0));
      sign.push_back(scalar(parity[a] ? -1.0 : 1.0));
      standard.push_back(q.adjoint() * permutation_matrix(perms[a]) * q);
    }
    return {triv, sign, standard};
  }
  if (name.size() > 1 && name[0] == 'Z') {
    for (int j = 0; j < n; ++j) {
      std::vector<CMatrix> chi;
      for (int a = 0; a < n; ++a) chi.push_back(scalar(std::polar(1.0, 2 * std::numbers::pi * j * a / n)));
      out.push_back(std::move(chi));
    }
    return out;
  }
  out.emplace_back(n, scalar(1.0));
  return out;
}

std::vector<CMatrix> FiniteGroup::random_rep(int n, Rng& rng) const {
  const auto irr = irreps();
  std::vector<CMatrix> rep(order(), CMatrix::Zero(n, n));
  int filled = 0;
  while (filled < n) {
    std::vector<int> fits;
    for (size_t k = 0; k < irr.size(); ++k)
      if (irr[k][0].rows() <= n - filled) fits.push_back(static_cast<int>(k));
    const auto& pick = irr[fits[rng.integer(0, static_cast<int>(fits.size()) - 1)]];
    const Eigen::Index d = pick[0].rows();
    for (int g = 0; g < order(); ++g) rep[g].block(filled, filled, d, d) = pick[g];
    filled += static_cast<int>(d);
  }
  const CMatrix v = rng.unitary(n);
  for (auto& m : rep) m = v * m * v.adjoint();
  return rep;
}

double action_residual(const DynamicalSystem& s) {
  const FiniteGroup& g = s.group;
  double r = operator_norm(s.action[g.identity].matrix() - identity(s.algebra.dim()));
  for (int x = 0; x < g.order(); ++x)
    for (int y = 0; y < g.order(); ++y)
      r = std::max(r, operator_norm(compose(s.action[x], s.action[y]).matrix() - s.action[g.mul(x, y)].matrix()));
  return r;
}

DynamicalSystem random_action(const AlgebraShape& shape, const FiniteGroup& g, Rng& rng, bool allow_swap) {
  const int k = shape.num_blocks();
  std::vector<std::vector<CMatrix>> reps;
  for (int i = 0; i < k; ++i) {
    reps.push_back(g.random_rep(shape.block_size(i), rng));
    // Ad of a phase is the identity; a 1×1 block carries no inner part
    if (shape.block_size(i) == 1)
      for (auto& m : reps.back()) m = CMatrix::Identity(1, 1);
  }
  int swap_a = -1, swap_b = -1;
  const bool has_parity = std::any_of(g.parity.begin(), g.parity.end(), [](int p) { return p != 0; });
  if (allow_swap && has_parity && rng.integer(0, 1) == 1)
    for (int i = 0; i < k && swap_a < 0; ++i)
      for (int j = i + 1; j < k; ++j)
        if (shape.block_size(i) == shape.block_size(j)) {
          swap_a = i, swap_b = j;
          break;
        }
  if (swap_a >= 0) reps[swap_b] = reps[swap_a];
  DynamicalSystem s{shape, g, {}, {}, {}};
  for (int x = 0; x < g.order(); ++x) {
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    if (swap_a >= 0 && g.parity[x]) std::swap(perm[swap_a], perm[swap_b]);
    std::vector<CMatrix> units;
    for (int i = 0; i < k; ++i) units.push_back(reps[i][x]);
    s.action.push_back(Automorphism::block(shape, perm, units));
    s.block_perm.push_back(perm);
    s.block_unitaries.push_back(units);
  }
  return s;
}

EquivariantReport check_equivariant(const FiniteGroup& g, const std::vector<Automorphism>& alpha,
                                    const std::vector<Automorphism>& beta, const CPMap& phi,
                                    const std::vector<CMatrix>& u, const Tolerance& tol) {
  const HilbertModule& e = phi.module;
  const int n = g.order();
  if (static_cast<int>(u.size()) != n || static_cast<int>(alpha.size()) != n || static_cast<int>(beta.size()) != n)
    throw Error(ErrorKind::ShapeMismatch, "one operator and automorphism per group element required");
  for (const auto& m : u)
    if (m.rows() != e.dim() || m.cols() != e.dim()) throw Error(ErrorKind::ShapeMismatch, "U_g size differs from module");
  EquivariantReport r;
  double worst = -1;
  auto note = [&](double v, int x) {
    if (v > worst) worst = v, r.worst_element = x;
  };
  const int nb = e.algebra().dim();
  const AlgebraShape& a = phi.algebra;
  for (int x = 0; x < n; ++x) {
    double hom = x == g.identity ? realized_norm(u[x] - identity(e.dim()), e, e) : 0.0;
    for (int y = 0; y < n; ++y) hom = std::max(hom, realized_norm(u[x] * u[y] - u[g.mul(x, y)], e, e));
    double lin = 0, pair = 0, cov = 0;
    const CMatrix& bm = beta[x].matrix();
    for (int b = 0; b < nb; ++b) {
      lin = std::max(lin, realized_norm(u[x] * e.action(b) - combine(e.data().action, bm.col(b), e.dim()) * u[x], e, e));
      CMatrix rhs = CMatrix::Zero(e.dim(), e.dim());
      for (int d = 0; d < nb; ++d)
        if (bm(b, d) != cplx(0)) rhs += bm(b, d) * e.pairing(d);
      pair = std::max(pair, operator_norm(e.gram_inv_sqrt() * (u[x].adjoint() * e.pairing(b) * u[x] - rhs) *
                                          e.gram_inv_sqrt()));
    }
    for (int p = 0; p < a.dim(); ++p)
      cov = std::max(cov, realized_norm(u[x] * phi.images[p] - phi(alpha[x](AlgebraElement::matrix_unit(a, p))) * u[x], e, e));
    r.homomorphism = std::max(r.homomorphism, hom);
    r.twisted_linearity = std::max(r.twisted_linearity, lin);
    r.pairing_twist = std::max(r.pairing_twist, pair);
    r.covariance = std::max(r.covariance, cov);
    note(std::max({hom, lin, pair, cov}), x);
  }
  r.threshold = tol.scaled(std::max(1.0, phi.scale()));
  r.pass = r.homomorphism <= r.threshold && r.twisted_linearity <= r.threshold && r.pairing_twist <= r.threshold &&
           r.covariance <= r.threshold;
  return r;
}

EquivariantReport check_equivariant(const EquivariantCorrespondence& c, const Tolerance& tol) {
  return check_equivariant(c.a_sys.group, c.a_sys.action, c.b_sys.action, c.phi, c.u, tol);
}

CPMap group_average(const CPMap& phi, const DynamicalSystem& a_sys, const std::vector<CMatrix>& u) {
  const FiniteGroup& g = a_sys.group;
  const double w = 1.0 / g.order();
  CPMap out{phi.algebra, phi.module, std::vector<CMatrix>(phi.algebra.dim(), CMatrix::Zero(phi.module.dim(), phi.module.dim()))};
  for (int h = 0; h < g.order(); ++h) {
    const int hi = g.inverse[h];
    for (int p = 0; p < phi.algebra.dim(); ++p)
      out.images[p] += w * u[h] * phi(a_sys.action[hi](AlgebraElement::matrix_unit(phi.algebra, p))) * u[hi];
  }
  return out;
}

EquivariantCorrespondence random_equivariant(const AlgebraShape& a, const AlgebraShape& b, const FiniteGroup& g,
                                             std::uint64_t seed, int max_dim) {
  Rng rng(seed);
  DynamicalSystem a_sys = random_action(a, g, rng);
  DynamicalSystem b_sys = random_action(b, g, rng);
  const int k = b.num_blocks(), order = g.order();
  // Blocks exchanged by β must carry identical permutation data.
  std::vector<int> partner(k);
  std::iota(partner.begin(), partner.end(), 0);
  for (const auto& perm : b_sys.block_perm)
    for (int j = 0; j < k; ++j)
      if (perm[j] != j) partner[j] = perm[j];
  std::vector<int> regular(k, 0), fixed(k, 0);
  int dim = 0;
  for (int j = 0; j < k; ++j) {
    if (partner[j] < j) {
      regular[j] = regular[partner[j]], fixed[j] = fixed[partner[j]];
      dim += (regular[j] * order + fixed[j]) * b.block_size(j);
      continue;
    }
    const int copies = partner[j] == j ? 1 : 2;
    const int n = b.block_size(j);
    const int r = (rng.integer(0, 1) == 1 && dim + copies * order * n <= max_dim) ? 1 : 0;
    int f = rng.integer(0, 2);
    while (f > 0 && dim + copies * (r * order + f) * n > max_dim) --f;
    regular[j] = r, fixed[j] = f;
    dim += (r * order + f) * n;
  }
  if (dim == 0) {
    int best = 0;
    for (int j = 1; j < k; ++j)
      if (b.block_size(j) * (partner[j] == j ? 1 : 2) < b.block_size(best) * (partner[best] == best ? 1 : 2)) best = j;
    fixed[best] = fixed[partner[best]] = 1;
  }
  std::vector<int> m(k);
  std::vector<std::vector<CMatrix>> perm_rep(k);
  std::vector<CMatrix> metrics(k);
  for (int j = 0; j < k; ++j) {
    m[j] = regular[j] * order + fixed[j];
    if (m[j] > max_dim) throw Error(ErrorKind::InvalidConfig, "module size cap too small");
    for (int x = 0; x < order; ++x) {
      std::vector<int> p(m[j]);
      std::iota(p.begin(), p.end(), 0);
      for (int y = 0; y < regular[j] * order; ++y) p[y] = g.mul(x, y);
      perm_rep[j].push_back(permutation_matrix(p));
    }
    if (partner[j] < j) {
      metrics[j] = metrics[partner[j]];
      continue;
    }
    const CMatrix h0 = m[j] > 0 ? rng.positive_definite(m[j]) : CMatrix(0, 0);
    CMatrix h = CMatrix::Zero(m[j], m[j]);
    for (int x = 0; x < order; ++x) h += perm_rep[j][x].adjoint() * h0 * perm_rep[j][x];
    metrics[j] = h / static_cast<double>(order);
  }
  const HilbertModule e = rect_module(b, m, metrics);
  std::vector<int> offset(k, 0);
  for (int j = 1; j < k; ++j) offset[j] = offset[j - 1] + m[j - 1] * b.block_size(j - 1);
  std::vector<CMatrix> u;
  for (int x = 0; x < order; ++x) {
    CMatrix ux = CMatrix::Zero(e.dim(), e.dim());
    for (int j = 0; j < k; ++j) {
      const int t = b_sys.block_perm[x][j];
      const int n = b.block_size(j);
      ux.block(offset[t], offset[j], m[t] * n, m[j] * n) = kron(perm_rep[j][x], b_sys.block_unitaries[x][t].conjugate());
    }
    u.push_back(std::move(ux));
  }
  CPMap phi = group_average(random_cp(a, e, rng.next()), a_sys, u);
  return {std::move(a_sys), std::move(b_sys), std::move(phi), std::move(u)};
}

FunctorFamily correspondence_to_functor(const EquivariantCorrespondence& c, const Tolerance& tol) {
  FunctorFamily f;
  f.object = make_object(c.phi);
  const HilbertModule& e = c.phi.module;
  const FiniteGroup& g = c.a_sys.group;
  for (int x = 0; x < g.order(); ++x) {
    TensorModule tm = tensor_along(e, c.b_sys.action[x].forward(), tol);
    const LinearMap v = v_rho(tm);
    ModuleMap eta{tm.result, e, c.u[x] * v.matrix.partialPivLu().inverse()};
    f.round_trip = std::max(f.round_trip, realized_norm(eta.matrix * v.matrix - c.u[x], e, e));
    f.unitarity = std::max(f.unitarity, unitarity_residual(eta));
    f.morphisms.push_back({f.object.id, f.object.id, c.b_sys.action[x].forward(), std::move(tm), std::move(eta),
                           c.a_sys.action[x]});
    const PosCorMorphismReport rep = check_poscor_morphism(f.morphisms.back(), f.object, f.object, tol);
    f.invariants = std::max({f.invariants, rep.rho.multiplicativity, rep.rho.star_preservation, rep.rho.unitality,
                             rep.intertwiner.intertwining, rep.intertwiner.adjoint_side, rep.intertwiner.commutation,
                             rep.intertwiner.linearity});
  }
  f.identity = morphism_distance(f.morphisms[g.identity], poscor_identity(f.object, tol));
  for (int x = 0; x < g.order(); ++x)
    for (int y = 0; y < g.order(); ++y)
      f.composition = std::max(
          f.composition, morphism_distance(poscor_compose(f.morphisms[x], f.morphisms[y], tol), f.morphisms[g.mul(x, y)]));
  return f;
}

DilationQuadruple dilate(const EquivariantCorrespondence& c, const KsgnsTriple& t, const Tolerance& tol) {
  DilationQuadruple d{t, {}};
  for (int x = 0; x < c.a_sys.group.order(); ++x) {
    const CMatrix big = kron(c.a_sys.action[x].matrix(), c.u[x]);
    if (t.kernel.cols() > 0 && t.module.dim() > 0) {
      const double leak = operator_norm(t.module.gram_sqrt() * t.q * big * t.kernel);
      if (leak > tol.scaled(operator_norm(big) * operator_norm(t.module.gram_sqrt())))
        throw Error(ErrorKind::WellDefinednessViolation, "α_g ⊗ U_g does not preserve the null space");
    }
    d.utilde.push_back(t.q * big * t.s);
  }
  return d;
}

DilationQuadruple dilate(const EquivariantCorrespondence& c, const Tolerance& tol) {
  return dilate(c, ksgns(c.phi, tol), tol);
}

DilationReport check_dilation(const EquivariantCorrespondence& c, const DilationQuadruple& d, const Tolerance& tol) {
  DilationReport r;
  const KsgnsTriple& t = d.triple;
  r.equivariance = check_equivariant(c.a_sys.group, c.a_sys.action, c.b_sys.action, t.rep, d.utilde, tol);
  const TripleReport tr = check_triple(t, tol);
  r.spanning_rank = tr.spanning_rank;
  r.dim = tr.dim;
  r.reconstruction = tr.reconstruction;
  for (int x = 0; x < c.a_sys.group.order(); ++x)
    r.embedding = std::max(r.embedding, realized_norm(t.v.matrix * c.u[x] - d.utilde[x] * t.v.matrix, c.phi.module, t.module));
  return r;
}

double categorical_dilation_residual(const EquivariantCorrespondence& c, const DilationQuadruple& d,
                                     const Tolerance& tol) {
  const FunctorFamily fam = correspondence_to_functor(c, tol);
  KsgnsFunctor functor(tol);
  functor.adopt(fam.object, d.triple);
  double r = 0;
  for (int x = 0; x < c.a_sys.group.order(); ++x) {
    const PosCorMorphism lifted = functor.morphism(fam.morphisms[x], fam.object, fam.object);
    const LinearMap v = v_rho(lifted.domain_tensor);
    r = std::max(r, realized_norm(lifted.eta.matrix * v.matrix - d.utilde[x], d.triple.module, d.triple.module));
  }
  return r;
}

DilationQuadruple conjugate_quadruple(const DilationQuadruple& d, const CMatrix& z) {
  DilationQuadruple out = d;
  const HilbertModule& f = d.triple.module;
  const CMatrix zs = adj(z, f);
  for (auto& img : out.triple.rep.images) img = z * img * zs;
  out.triple.v.matrix = z * d.triple.v.matrix;
  for (auto& u : out.utilde) u = z * u * zs;
  return out;
}

UniquenessReport uniqueness_unitary(const DilationQuadruple& d, const DilationQuadruple& other, const Tolerance& tol) {
  const KsgnsTriple& t1 = d.triple;
  const KsgnsTriple& t2 = other.triple;
  const CMatrix m1 = spanning_matrix(t1.rep, t1.v), m2 = spanning_matrix(t2.rep, t2.v);
  if (numerical_rank(m1, tol) < t1.module.dim() || numerical_rank(m2, tol) < t2.module.dim())
    throw Error(ErrorKind::SpanningFailure, "dilation is not spanned by π(A)VE");
  UniquenessReport r{{t2.module, t1.module, m1 * pseudo_inverse(m2, tol)}};
  const ModuleMap ws = adjoint_map(r.w);
  r.unitarity = unitarity_residual(r.w);
  for (int p = 0; p < t1.phi.algebra.dim(); ++p)
    r.representation = std::max(
        r.representation, realized_norm(r.w.matrix * t2.rep.images[p] * ws.matrix - t1.rep.images[p], t1.module, t1.module));
  r.embedding = realized_norm(r.w.matrix * t2.v.matrix - t1.v.matrix, t1.phi.module, t1.module);
  for (size_t x = 0; x < d.utilde.size(); ++x)
    r.symmetry = std::max(r.symmetry, realized_norm(r.w.matrix * other.utilde[x] * ws.matrix - d.utilde[x], t1.module, t1.module));
  return r;
}

GnsDemo gns_demo(int n, std::uint64_t seed, const Tolerance& tol) {
  Rng rng(seed);
  const AlgebraShape a({n});
  const AlgebraShape scalars({1});
  const FiniteGroup g = FiniteGroup::cyclic(n);
  RVector p(n);
  for (int k = 0; k < n; ++k) p(k) = rng.uniform(0.5, 1.5);
  p /= p.sum();
  const HilbertModule e = algebra_module(scalars);
  CPMap phi{a, e, {}};
  for (int u = 0; u < a.dim(); ++u) {
    const auto uu = a.unit(u);
    phi.images.push_back(CMatrix::Constant(1, 1, uu.row == uu.col ? cplx(p(uu.row)) : cplx(0)));
  }
  DynamicalSystem a_sys{a, g, {}, {}, {}}, b_sys{scalars, g, {}, {}, {}};
  std::vector<CMatrix> u;
  for (int x = 0; x < n; ++x) {
    CMatrix d = CMatrix::Zero(n, n);
    for (int k = 0; k < n; ++k) d(k, k) = std::polar(1.0, 2 * std::numbers::pi * x * k / n);
    a_sys.action.push_back(Automorphism::block(a, {0}, {d}));
    b_sys.action.push_back(Automorphism::identity(scalars));
    u.push_back(identity(1));
  }
  const EquivariantCorrespondence c{a_sys, b_sys, phi, u};
  const DilationQuadruple q = dilate(c, tol);
  const DilationReport rep = check_dilation(c, q, tol);
  GnsDemo out;
  out.n = n;
  out.order = n;
  out.dim = rep.dim;
  const HilbertModule& f = q.triple.module;
  out.unitarity = unitarity_residual({f, f, q.utilde[n > 1 ? 1 : 0]});
  out.covariance = rep.equivariance.covariance;
  out.nontriviality = realized_norm(q.utilde[n > 1 ? 1 : 0] - identity(f.dim()), f, f);
  out.reconstruction = rep.reconstruction;
  return out;
}

}  // namespace ksv
