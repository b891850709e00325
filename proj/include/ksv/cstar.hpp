#pragma once

#include <cstdint>
#include <vector>

#include "ksv/numkernel.hpp"

namespace ksv {

/// A = M_{n_1}(C) ⊕ ... ⊕ M_{n_k}(C). Basis: matrix units, block by block,
/// row-major inside a block.
class AlgebraShape {
 public:
  AlgebraShape() = default;
  explicit AlgebraShape(std::vector<int> blocks);

  const std::vector<int>& blocks() const { return blocks_; }
  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  int block_size(int i) const { return blocks_[i]; }
  int dim() const { return dim_; }
  int offset(int block) const { return offsets_[block]; }
  int index(int block, int k, int l) const { return offsets_[block] + k * blocks_[block] + l; }

  struct Unit {
    int block, row, col;
  };
  Unit unit(int index) const;
  /// Index of the adjoint matrix unit.
  int adjoint_index(int index) const;
  bool is_diagonal_unit(int index) const;

  bool operator==(const AlgebraShape& o) const { return blocks_ == o.blocks_; }

 private:
  std::vector<int> blocks_;
  std::vector<int> offsets_;
  int dim_ = 0;
};

class AlgebraElement {
 public:
  AlgebraElement() = default;
  AlgebraElement(AlgebraShape shape, std::vector<CMatrix> blocks);

  static AlgebraElement zero(const AlgebraShape& s);
  static AlgebraElement unit(const AlgebraShape& s);
  static AlgebraElement matrix_unit(const AlgebraShape& s, int index);
  static AlgebraElement from_coords(const AlgebraShape& s, const CVector& c);
  static AlgebraElement random(const AlgebraShape& s, std::uint64_t seed);

  const AlgebraShape& shape() const { return shape_; }
  const std::vector<CMatrix>& blocks() const { return blocks_; }
  const CMatrix& block(int i) const { return blocks_[i]; }
  CMatrix& block(int i) { return blocks_[i]; }

  CVector coords() const;
  AlgebraElement adjoint() const;
  /// max over blocks of the operator norm.
  double norm() const;

  AlgebraElement operator*(const AlgebraElement& o) const;
  AlgebraElement operator+(const AlgebraElement& o) const;
  AlgebraElement operator-(const AlgebraElement& o) const;
  AlgebraElement operator*(cplx s) const;

 private:
  AlgebraShape shape_;
  std::vector<CMatrix> blocks_;
};

/// Matrices of x ↦ a·x and x ↦ x·a on coordinate vectors.
CMatrix left_mult_matrix(const AlgebraElement& a);
CMatrix right_mult_matrix(const AlgebraElement& a);

struct AlgebraOps {
  AlgebraElement product;
  AlgebraElement adjoint_of_a;
  double norm_of_a;
};
AlgebraOps algebra_ops(const AlgebraElement& a, const AlgebraElement& b);

struct Positivity {
  bool positive;
  double min_eigenvalue;
};
Positivity is_positive(const AlgebraElement& a, const Tolerance& tol = {});

/// τ(a) = Σ_i tr(a_i); faithful, tracial.
cplx trace_functional(const AlgebraElement& a);

/// Linear map between algebras stored as the coordinate matrix of the images of
/// the domain matrix units (column j = coords of ρ(u_j)).
class StarMap {
 public:
  StarMap() = default;
  StarMap(AlgebraShape domain, AlgebraShape codomain, CMatrix matrix);

  static StarMap identity(const AlgebraShape& s);
  static StarMap from_images(const AlgebraShape& domain, const AlgebraShape& codomain,
                             const std::vector<AlgebraElement>& images);

  const AlgebraShape& domain() const { return domain_; }
  const AlgebraShape& codomain() const { return codomain_; }
  const CMatrix& matrix() const { return matrix_; }

  AlgebraElement operator()(const AlgebraElement& a) const;
  AlgebraElement image(int basis_index) const;

 private:
  AlgebraShape domain_, codomain_;
  CMatrix matrix_;
};

/// after ∘ before
StarMap compose(const StarMap& after, const StarMap& before);

struct StarMapReport {
  double multiplicativity = 0;
  double star_preservation = 0;
  double unitality = 0;
  bool pass = false;
};
StarMapReport check_star_map(const StarMap& rho, const Tolerance& tol = {});

/// Unital *-homomorphism b ↦ V (⊕_i b_i ⊗ I_{μ_ij}) V* into each codomain block j.
/// mult(i, j) is the multiplicity of domain block i inside codomain block j.
StarMap block_embedding(const AlgebraShape& domain, const std::vector<std::vector<int>>& mult,
                        const std::vector<CMatrix>& codomain_unitaries);

class Automorphism {
 public:
  Automorphism() = default;
  Automorphism(StarMap forward, StarMap inverse);

  static Automorphism identity(const AlgebraShape& s);
  /// α(a)_{σ(i)} = u_{σ(i)} a_i u_{σ(i)}*; σ must only move blocks between equal sizes.
  static Automorphism block(const AlgebraShape& s, const std::vector<int>& perm,
                            const std::vector<CMatrix>& unitaries);

  const AlgebraShape& shape() const { return forward_.domain(); }
  const StarMap& forward() const { return forward_; }
  const StarMap& inverse_map() const { return inverse_; }
  const CMatrix& matrix() const { return forward_.matrix(); }
  Automorphism inverse() const { return {inverse_, forward_}; }

  AlgebraElement operator()(const AlgebraElement& a) const { return forward_(a); }

 private:
  StarMap forward_, inverse_;
};

/// after ∘ before
Automorphism compose(const Automorphism& after, const Automorphism& before);

/// Block permutation of equal-size blocks composed with blockwise unitary
/// conjugation; deterministic per seed.
Automorphism random_automorphism(const AlgebraShape& shape, std::uint64_t seed);

/// max(||α∘α⁻¹ − id||, ||α⁻¹∘α − id||) on coordinate matrices.
double inverse_residual(const Automorphism& a);

}  // namespace ksv
