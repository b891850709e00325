#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "ksv/error.hpp"

namespace ksv {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Relative rank cutoff and residual pass threshold.
struct Tolerance {
  double rtol = 1e-10;
  double ctol = 1e-8;

  /// Threshold for a residual whose natural size is `scale`.
  double scaled(double scale) const { return ctol * (1.0 + scale); }
};

struct HermEig {
  RVector values;  // ascending
  CMatrix vectors;  // columns, unitary
};

struct RankKernel {
  int rank = 0;
  CMatrix range_basis;   // orthonormal eigenvectors of kept eigenvalues
  CMatrix kernel_basis;  // orthonormal complement
  RVector kept_values;   // eigenvalues matching range_basis columns
};

bool all_finite(const CMatrix& m);
void require_finite(const CMatrix& m, const char* where);

/// Largest singular value.
double operator_norm(const CMatrix& m);

/// Eigendecomposition of a Hermitian matrix; the input is symmetrized after the
/// Hermiticity check so tiny asymmetries do not leak into complex eigenvalues.
HermEig herm_eig(const CMatrix& m, const Tolerance& tol = {});

/// Tolerance-based range/kernel split of a PSD Gram matrix.
RankKernel rank_kernel(const CMatrix& g, const Tolerance& tol = {});

CMatrix pseudo_inverse(const CMatrix& m, const Tolerance& tol = {});

/// Orthonormal basis (columns) of the numerical null space of m. Singular
/// values below rtol·max(σ_max, scale) count as zero.
CMatrix null_space(const CMatrix& m, const Tolerance& tol = {}, double scale = 0.0);

/// f(H) for Hermitian H through its eigendecomposition.
template <class F>
CMatrix herm_function(const CMatrix& h, F&& f, const Tolerance& tol = {}) {
  HermEig e = herm_eig(h, tol);
  CMatrix out = e.vectors;
  for (Eigen::Index j = 0; j < out.cols(); ++j) out.col(j) *= f(e.values(j));
  return out * e.vectors.adjoint();
}

/// Square root and inverse square root of a positive definite matrix.
CMatrix psd_sqrt(const CMatrix& g);
CMatrix pd_inv_sqrt(const CMatrix& g);

/// Kronecker product a ⊗ b (index of a is the slow one).
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Smallest eigenvalue of the Hermitian part.
double min_herm_eigenvalue(const CMatrix& m);

}  // namespace ksv
