#include "ksv/cstar.hpp"

#include <algorithm>
#include <numeric>

#include "ksv/random.hpp"

namespace ksv {

AlgebraShape::AlgebraShape(std::vector<int> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw Error(ErrorKind::ShapeMismatch, "algebra shape needs at least one block");
  offsets_.reserve(blocks_.size());
  for (int n : blocks_) {
    if (n <= 0) throw Error(ErrorKind::ShapeMismatch, "block sizes must be positive");
    offsets_.push_back(dim_);
    dim_ += n * n;
  }
}

AlgebraShape::Unit AlgebraShape::unit(int index) const {
  int b = num_blocks() - 1;
  while (offsets_[b] > index) --b;
  const int local = index - offsets_[b];
  return {b, local / blocks_[b], local % blocks_[b]};
}

int AlgebraShape::adjoint_index(int index) const {
  const Unit u = unit(index);
  return this->index(u.block, u.col, u.row);
}

bool AlgebraShape::is_diagonal_unit(int index) const {
  const Unit u = unit(index);
  return u.row == u.col;
}

AlgebraElement::AlgebraElement(AlgebraShape shape, std::vector<CMatrix> blocks)
    : shape_(std::move(shape)), blocks_(std::move(blocks)) {
  if (static_cast<int>(blocks_.size()) != shape_.num_blocks())
    throw Error(ErrorKind::ShapeMismatch, "element block count differs from shape");
  for (int i = 0; i < shape_.num_blocks(); ++i) {
    const int n = shape_.block_size(i);
    if (blocks_[i].rows() != n || blocks_[i].cols() != n)
      throw Error(ErrorKind::ShapeMismatch, "element block size differs from shape");
  }
}

AlgebraElement AlgebraElement::zero(const AlgebraShape& s) {
  std::vector<CMatrix> b;
  for (int n : s.blocks()) b.push_back(CMatrix::Zero(n, n));
  return {s, std::move(b)};
}

AlgebraElement AlgebraElement::unit(const AlgebraShape& s) {
  std::vector<CMatrix> b;
  for (int n : s.blocks()) b.push_back(CMatrix::Identity(n, n));
  return {s, std::move(b)};
}

AlgebraElement AlgebraElement::matrix_unit(const AlgebraShape& s, int index) {
  AlgebraElement e = zero(s);
  const auto u = s.unit(index);
  e.blocks_[u.block](u.row, u.col) = 1.0;
  return e;
}

AlgebraElement AlgebraElement::from_coords(const AlgebraShape& s, const CVector& c) {
  if (c.size() != s.dim()) throw Error(ErrorKind::ShapeMismatch, "coordinate length differs from algebra dim");
  std::vector<CMatrix> b;
  for (int i = 0; i < s.num_blocks(); ++i) {
    const int n = s.block_size(i);
    CMatrix m(n, n);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) m(k, l) = c(s.index(i, k, l));
    b.push_back(std::move(m));
  }
  return {s, std::move(b)};
}

AlgebraElement AlgebraElement::random(const AlgebraShape& s, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<CMatrix> b;
  for (int n : s.blocks()) b.push_back(rng.ginibre(n, n));
  return {s, std::move(b)};
}

CVector AlgebraElement::coords() const {
  CVector c(shape_.dim());
  for (int i = 0; i < shape_.num_blocks(); ++i) {
    const int n = shape_.block_size(i);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) c(shape_.index(i, k, l)) = blocks_[i](k, l);
  }
  return c;
}

AlgebraElement AlgebraElement::adjoint() const {
  std::vector<CMatrix> b;
  for (const auto& m : blocks_) b.push_back(m.adjoint());
  return {shape_, std::move(b)};
}

double AlgebraElement::norm() const {
  double n = 0.0;
  for (const auto& m : blocks_) n = std::max(n, operator_norm(m));
  return n;
}

namespace {
void require_same(const AlgebraShape& a, const AlgebraShape& b) {
  if (!(a == b)) throw Error(ErrorKind::ShapeMismatch, "algebra elements of different shapes");
}
}  // namespace

AlgebraElement AlgebraElement::operator*(const AlgebraElement& o) const {
  require_same(shape_, o.shape_);
  std::vector<CMatrix> b;
  for (size_t i = 0; i < blocks_.size(); ++i) b.push_back(blocks_[i] * o.blocks_[i]);
  return {shape_, std::move(b)};
}

AlgebraElement AlgebraElement::operator+(const AlgebraElement& o) const {
  require_same(shape_, o.shape_);
  std::vector<CMatrix> b;
  for (size_t i = 0; i < blocks_.size(); ++i) b.push_back(blocks_[i] + o.blocks_[i]);
  return {shape_, std::move(b)};
}

AlgebraElement AlgebraElement::operator-(const AlgebraElement& o) const {
  require_same(shape_, o.shape_);
  std::vector<CMatrix> b;
  for (size_t i = 0; i < blocks_.size(); ++i) b.push_back(blocks_[i] - o.blocks_[i]);
  return {shape_, std::move(b)};
}

AlgebraElement AlgebraElement::operator*(cplx s) const {
  std::vector<CMatrix> b;
  for (const auto& m : blocks_) b.push_back(s * m);
  return {shape_, std::move(b)};
}

CMatrix left_mult_matrix(const AlgebraElement& a) {
  const AlgebraShape& s = a.shape();
  CMatrix out = CMatrix::Zero(s.dim(), s.dim());
  // (a x)_{kl} = Σ_m a_{km} x_{ml}
  for (int i = 0; i < s.num_blocks(); ++i) {
    const int n = s.block_size(i);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        for (int m = 0; m < n; ++m) out(s.index(i, k, l), s.index(i, m, l)) = a.block(i)(k, m);
  }
  return out;
}

CMatrix right_mult_matrix(const AlgebraElement& a) {
  const AlgebraShape& s = a.shape();
  CMatrix out = CMatrix::Zero(s.dim(), s.dim());
  // (x a)_{kl} = Σ_m x_{km} a_{ml}
  for (int i = 0; i < s.num_blocks(); ++i) {
    const int n = s.block_size(i);
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l)
        for (int m = 0; m < n; ++m) out(s.index(i, k, l), s.index(i, k, m)) = a.block(i)(m, l);
  }
  return out;
}

AlgebraOps algebra_ops(const AlgebraElement& a, const AlgebraElement& b) {
  return {a * b, a.adjoint(), a.norm()};
}

Positivity is_positive(const AlgebraElement& a, const Tolerance& tol) {
  const double scale = a.norm();
  double witness = 0.0;
  bool first = true;
  bool hermitian = true;
  for (const auto& m : a.blocks()) {
    if ((m - m.adjoint()).norm() > tol.scaled(scale)) hermitian = false;
    const double e = min_herm_eigenvalue(m);
    witness = first ? e : std::min(witness, e);
    first = false;
  }
  return {hermitian && witness >= -tol.scaled(scale), witness};
}

cplx trace_functional(const AlgebraElement& a) {
  cplx t = 0.0;
  for (const auto& m : a.blocks()) t += m.trace();
  return t;
}

StarMap::StarMap(AlgebraShape domain, AlgebraShape codomain, CMatrix matrix)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != codomain_.dim() || matrix_.cols() != domain_.dim())
    throw Error(ErrorKind::ShapeMismatch, "star map matrix has wrong size");
}

StarMap StarMap::identity(const AlgebraShape& s) {
  return {s, s, CMatrix::Identity(s.dim(), s.dim())};
}

StarMap StarMap::from_images(const AlgebraShape& domain, const AlgebraShape& codomain,
                             const std::vector<AlgebraElement>& images) {
  if (static_cast<int>(images.size()) != domain.dim())
    throw Error(ErrorKind::ShapeMismatch, "one image per domain matrix unit required");
  CMatrix m(codomain.dim(), domain.dim());
  for (int j = 0; j < domain.dim(); ++j) {
    if (!(images[j].shape() == codomain)) throw Error(ErrorKind::ShapeMismatch, "image outside codomain");
    m.col(j) = images[j].coords();
  }
  return {domain, codomain, std::move(m)};
}

AlgebraElement StarMap::operator()(const AlgebraElement& a) const {
  if (!(a.shape() == domain_)) throw Error(ErrorKind::ShapeMismatch, "star map applied outside its domain");
  return AlgebraElement::from_coords(codomain_, matrix_ * a.coords());
}

AlgebraElement StarMap::image(int basis_index) const {
  return AlgebraElement::from_coords(codomain_, matrix_.col(basis_index));
}

StarMap compose(const StarMap& after, const StarMap& before) {
  if (!(after.domain() == before.codomain()))
    throw Error(ErrorKind::ShapeMismatch, "star maps not composable");
  return {before.domain(), after.codomain(), after.matrix() * before.matrix()};
}

StarMapReport check_star_map(const StarMap& rho, const Tolerance& tol) {
  const AlgebraShape& s = rho.domain();
  StarMapReport r;
  std::vector<AlgebraElement> img;
  img.reserve(s.dim());
  for (int j = 0; j < s.dim(); ++j) img.push_back(rho.image(j));
  for (int u = 0; u < s.dim(); ++u) {
    const auto uu = s.unit(u);
    for (int v = 0; v < s.dim(); ++v) {
      const auto vv = s.unit(v);
      // u·v = δ E_{row(u) col(v)} in a common block, 0 otherwise
      AlgebraElement lhs = AlgebraElement::zero(rho.codomain());
      if (uu.block == vv.block && uu.col == vv.row) lhs = img[s.index(uu.block, uu.row, vv.col)];
      r.multiplicativity = std::max(r.multiplicativity, (lhs - img[u] * img[v]).norm());
    }
    r.star_preservation =
        std::max(r.star_preservation, (img[s.adjoint_index(u)] - img[u].adjoint()).norm());
  }
  r.unitality = (rho(AlgebraElement::unit(s)) - AlgebraElement::unit(rho.codomain())).norm();
  r.pass = r.multiplicativity <= tol.ctol && r.star_preservation <= tol.ctol && r.unitality <= tol.ctol;
  return r;
}

StarMap block_embedding(const AlgebraShape& domain, const std::vector<std::vector<int>>& mult,
                        const std::vector<CMatrix>& codomain_unitaries) {
  if (static_cast<int>(mult.size()) != domain.num_blocks())
    throw Error(ErrorKind::ShapeMismatch, "multiplicity table needs one row per domain block");
  const size_t nc = mult.front().size();
  std::vector<int> sizes(nc, 0);
  for (int i = 0; i < domain.num_blocks(); ++i) {
    if (mult[i].size() != nc) throw Error(ErrorKind::ShapeMismatch, "ragged multiplicity table");
    for (size_t j = 0; j < nc; ++j) sizes[j] += mult[i][j] * domain.block_size(i);
  }
  AlgebraShape codomain(sizes);
  std::vector<AlgebraElement> images;
  for (int u = 0; u < domain.dim(); ++u) {
    const auto uu = domain.unit(u);
    AlgebraElement e = AlgebraElement::zero(codomain);
    for (size_t j = 0; j < nc; ++j) {
      int off = 0;
      for (int i = 0; i < uu.block; ++i) off += mult[i][j] * domain.block_size(i);
      for (int c = 0; c < mult[uu.block][j]; ++c)
        e.block(static_cast<int>(j))(off + uu.row * mult[uu.block][j] + c, off + uu.col * mult[uu.block][j] + c) = 1.0;
      if (!codomain_unitaries.empty()) {
        const CMatrix& v = codomain_unitaries[j];
        e.block(static_cast<int>(j)) = v * e.block(static_cast<int>(j)) * v.adjoint();
      }
    }
    images.push_back(std::move(e));
  }
  return StarMap::from_images(domain, codomain, images);
}

Automorphism::Automorphism(StarMap forward, StarMap inverse)
    : forward_(std::move(forward)), inverse_(std::move(inverse)) {
  if (!(forward_.domain() == forward_.codomain()) || !(inverse_.domain() == forward_.domain()) ||
      !(inverse_.codomain() == forward_.domain()))
    throw Error(ErrorKind::ShapeMismatch, "automorphism maps must be endomorphisms of one algebra");
}

Automorphism Automorphism::identity(const AlgebraShape& s) {
  return {StarMap::identity(s), StarMap::identity(s)};
}

namespace {
StarMap block_star_map(const AlgebraShape& s, const std::vector<int>& perm,
                       const std::vector<CMatrix>& unitaries) {
  std::vector<AlgebraElement> images;
  for (int u = 0; u < s.dim(); ++u) {
    const auto uu = s.unit(u);
    AlgebraElement e = AlgebraElement::zero(s);
    const int target = perm[uu.block];
    CMatrix m = CMatrix::Zero(s.block_size(target), s.block_size(target));
    m(uu.row, uu.col) = 1.0;
    e.block(target) = unitaries[target] * m * unitaries[target].adjoint();
    images.push_back(std::move(e));
  }
  return StarMap::from_images(s, s, images);
}
}  // namespace

Automorphism Automorphism::block(const AlgebraShape& s, const std::vector<int>& perm,
                                 const std::vector<CMatrix>& unitaries) {
  const int k = s.num_blocks();
  if (static_cast<int>(perm.size()) != k || static_cast<int>(unitaries.size()) != k)
    throw Error(ErrorKind::ShapeMismatch, "block automorphism needs one entry per block");
  std::vector<int> inv(k, -1);
  for (int i = 0; i < k; ++i) {
    if (perm[i] < 0 || perm[i] >= k || inv[perm[i]] != -1)
      throw Error(ErrorKind::ShapeMismatch, "block permutation is not a permutation");
    if (s.block_size(perm[i]) != s.block_size(i))
      throw Error(ErrorKind::ShapeMismatch, "block permutation moves blocks of different sizes");
    inv[perm[i]] = i;
  }
  // α⁻¹(b)_j = u_{σ(j)}* b_{σ(j)} u_{σ(j)}, i.e. block form with σ⁻¹ and u'_j = u_{σ(j)}*
  std::vector<CMatrix> inv_u(k);
  for (int j = 0; j < k; ++j) inv_u[inv[j]] = unitaries[j].adjoint();
  return {block_star_map(s, perm, unitaries), block_star_map(s, inv, inv_u)};
}

Automorphism compose(const Automorphism& after, const Automorphism& before) {
  return {compose(after.forward(), before.forward()), compose(before.inverse_map(), after.inverse_map())};
}

Automorphism random_automorphism(const AlgebraShape& shape, std::uint64_t seed) {
  Rng rng(seed);
  const int k = shape.num_blocks();
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  // shuffle within each size class
  for (int i = k - 1; i > 0; --i) {
    std::vector<int> candidates;
    for (int j = 0; j <= i; ++j)
      if (shape.block_size(perm[j]) == shape.block_size(perm[i])) candidates.push_back(j);
    const int pick = candidates[rng.integer(0, static_cast<int>(candidates.size()) - 1)];
    std::swap(perm[i], perm[pick]);
  }
  std::vector<CMatrix> units;
  for (int n : shape.blocks()) units.push_back(rng.unitary(n));
  return Automorphism::block(shape, perm, units);
}

double inverse_residual(const Automorphism& a) {
  const int d = a.shape().dim();
  const CMatrix id = CMatrix::Identity(d, d);
  return std::max((a.forward().matrix() * a.inverse_map().matrix() - id).norm(),
                  (a.inverse_map().matrix() * a.forward().matrix() - id).norm());
}

}  // namespace ksv
