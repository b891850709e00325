#pragma once

#include <cstdint>
#include <vector>

#include "ksv/hilbert.hpp"

namespace ksv {

/// Linear map φ: A → L(E), stored as the images of the matrix units of A.
struct CPMap {
  AlgebraShape algebra;
  HilbertModule module;
  std::vector<CMatrix> images;
  bool strict = true;  // always true: A is unital

  CMatrix operator()(const AlgebraElement& a) const;
  ModuleMap image_map(const AlgebraElement& a) const { return {module, module, (*this)(a)}; }
  /// Largest realized norm of a basis image.
  double scale() const;
};

/// max_β ||φ(u_β*) − φ(u_β)*|| (realized)
double hermiticity_residual(const CPMap& phi);
/// max over images of the B-linearity residual.
double image_linearity_residual(const CPMap& phi);

struct CpReport {
  bool is_cp = false;
  std::vector<double> min_choi_eigenvalue;  // per block of A
  double hermiticity = 0;
};
/// Choi criterion per block of A on the realized images. Throws NonLinearMap if an
/// image is not B-linear.
CpReport check_cp(const CPMap& phi, const Tolerance& tol = {});

struct CorrespondenceReport {
  double multiplicativity = 0;
  double unitality = 0;
  bool pass = false;
};
CorrespondenceReport check_correspondence(const CPMap& phi, const Tolerance& tol = {});

/// φ(E^{(i)}_{kk'}) = Σ_l T_{ikl}* T_{ik'l} with random T_{ikl} ∈ L(E).
CPMap random_cp(const AlgebraShape& a, const HilbertModule& e, std::uint64_t seed);

/// Random unital *-representation of A on a rect module over B of dimension at
/// most max_dim (metrics are random positive definite).
CPMap random_correspondence(const AlgebraShape& a, const AlgebraShape& b, std::uint64_t seed, int max_dim);

/// a ↦ W φ(α⁻¹(a)) W* for an adjointable W on E.
CPMap conjugate(const CPMap& phi, const CMatrix& w, const Automorphism& alpha);
CPMap pullback(const CPMap& phi, const Automorphism& alpha);  // a ↦ φ(α(a))
CPMap operator+(const CPMap& a, const CPMap& b);
CPMap operator*(double s, const CPMap& a);

struct Intertwiner {
  ModuleMap eta;
  Automorphism alpha;
};

Intertwiner identity_intertwiner(const HilbertModule& e, const AlgebraShape& a);
/// (η₂η₁, α₂α₁)
Intertwiner compose(const Intertwiner& after, const Intertwiner& before);

/// Basis of {η B-linear : φ₂(α(a))η = ηφ₁(a)}; orthonormal in the realized
/// Frobenius inner product.
std::vector<CMatrix> intertwiner_space(const CPMap& phi1, const CPMap& phi2, const Automorphism& alpha,
                                       const Tolerance& tol = {});

struct MorphismReport {
  double intertwining = 0;  // φ₂(α(a))η − ηφ₁(a)
  double adjoint_side = 0;  // η*φ₂(α(a)) − φ₁(a)η*
  double commutation = 0;   // [φ₁(a), η*η] and [φ₂(α(a)), ηη*]
  double linearity = 0;
  double threshold = 0;
  bool pass = false;
};
MorphismReport check_morphism(const Intertwiner& m, const CPMap& phi1, const CPMap& phi2, const Tolerance& tol = {});

/// ||η₁x − η₂x|| + ||α₁(a) − α₂(a)||
double hom_pseudometric(const Intertwiner& m1, const Intertwiner& m2, const CVector& x, const AlgebraElement& a);

/// Largest violation (lhs − rhs) of the two inequalities bounding
/// ||Σ⟨x_i, φ₁(a_i*a_j)η*η x_j⟩|| and its mirror on E₂; ≤ 0 when they hold.
double bounded_family_excess(const Intertwiner& m, const CPMap& phi1, const CPMap& phi2,
                             const std::vector<AlgebraElement>& as, const std::vector<CVector>& xs,
                             const std::vector<CVector>& ys);

struct PropertiesReport {
  double adjoint_side = 0;
  double commutation = 0;
  double lower_positivity = 0;  // −min eig of φ₁(a*a)η*η (and mirror); ≤ 0 when positive
  double upper_positivity = 0;  // −min eig of ||η||²φ₁(a*a) − φ₁(a*a)η*η (and mirror)
};
PropertiesReport properties_lemma(const Intertwiner& m, const CPMap& phi1, const CPMap& phi2,
                                  const AlgebraElement& a);

}  // namespace ksv
