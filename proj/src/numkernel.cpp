#include "ksv/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SVD>

namespace ksv {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonHermitian: return "NonHermitian";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::SubmoduleViolation: return "SubmoduleViolation";
    case ErrorKind::SingularGram: return "SingularGram";
    case ErrorKind::TwistMismatch: return "TwistMismatch";
    case ErrorKind::NotCP: return "NotCP";
    case ErrorKind::NonLinearMap: return "NonLinearMap";
    case ErrorKind::WellDefinednessViolation: return "WellDefinednessViolation";
    case ErrorKind::ObjectMismatch: return "ObjectMismatch";
    case ErrorKind::SpanningFailure: return "SpanningFailure";
    case ErrorKind::NonConvergentInput: return "NonConvergentInput";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ValidationError: return "ValidationError";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

bool all_finite(const CMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

void require_finite(const CMatrix& m, const char* where) {
  if (!all_finite(m)) throw Error(ErrorKind::NonFinite, where);
}

double operator_norm(const CMatrix& m) {
  require_finite(m, "operator_norm");
  if (m.size() == 0) return 0.0;
  if (m.rows() == 1 || m.cols() == 1) return m.norm();
  Eigen::BDCSVD<CMatrix> svd(m);
  return svd.singularValues()(0);
}

HermEig herm_eig(const CMatrix& m, const Tolerance& tol) {
  require_finite(m, "herm_eig");
  if (m.rows() != m.cols()) throw Error(ErrorKind::ShapeMismatch, "herm_eig: matrix not square");
  if (m.size() == 0) return {RVector(0), CMatrix(0, 0)};
  const double asym = (m - m.adjoint()).norm();
  if (asym > tol.ctol * (1.0 + m.norm()))
    throw Error(ErrorKind::NonHermitian, "herm_eig: asymmetry " + std::to_string(asym));
  CMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  return {es.eigenvalues(), es.eigenvectors()};
}

RankKernel rank_kernel(const CMatrix& g, const Tolerance& tol) {
  const Eigen::Index n = g.rows();
  RankKernel out;
  if (n == 0) {
    out.range_basis = CMatrix(0, 0);
    out.kernel_basis = CMatrix(0, 0);
    out.kept_values = RVector(0);
    return out;
  }
  HermEig e = herm_eig(g, tol);
  const double lmax = std::max(e.values(n - 1), 0.0);
  const double gnorm = std::max(std::abs(e.values(0)), std::abs(e.values(n - 1)));
  if (e.values(0) < -tol.ctol * (1.0 + gnorm))
    throw Error(ErrorKind::NotPSD, "rank_kernel: eigenvalue " + std::to_string(e.values(0)));
  const double cut = tol.rtol * lmax;
  Eigen::Index first_kept = n;
  if (lmax > std::numeric_limits<double>::min()) {
    first_kept = 0;
    while (first_kept < n && e.values(first_kept) <= cut) ++first_kept;
  }
  out.rank = static_cast<int>(n - first_kept);
  out.kernel_basis = e.vectors.leftCols(first_kept);
  out.range_basis = e.vectors.rightCols(n - first_kept);
  out.kept_values = e.values.tail(n - first_kept);
  return out;
}

CMatrix pseudo_inverse(const CMatrix& m, const Tolerance& tol) {
  require_finite(m, "pseudo_inverse");
  if (m.size() == 0) return CMatrix::Zero(m.cols(), m.rows());
  Eigen::BDCSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& sv = svd.singularValues();
  const double cut = tol.rtol * sv(0);
  CMatrix out = CMatrix::Zero(m.cols(), m.rows());
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) <= cut || sv(k) == 0.0) break;
    out += svd.matrixV().col(k) * (1.0 / sv(k)) * svd.matrixU().col(k).adjoint();
  }
  return out;
}

CMatrix null_space(const CMatrix& m, const Tolerance& tol, double scale) {
  require_finite(m, "null_space");
  const Eigen::Index n = m.cols();
  if (m.rows() == 0 || m.norm() == 0.0) return CMatrix::Identity(n, n);
  Eigen::BDCSVD<CMatrix> svd(m, Eigen::ComputeFullV);
  const RVector& sv = svd.singularValues();
  const double cut = tol.rtol * std::max(sv(0), scale);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cut) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

CMatrix psd_sqrt(const CMatrix& g) {
  return herm_function(g, [](double x) { return std::sqrt(std::max(x, 0.0)); });
}

CMatrix pd_inv_sqrt(const CMatrix& g) {
  return herm_function(g, [](double x) {
    if (x <= 0.0) throw Error(ErrorKind::SingularGram, "pd_inv_sqrt: non-positive eigenvalue");
    return 1.0 / std::sqrt(x);
  });
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double min_herm_eigenvalue(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  CMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

}  // namespace ksv
