#include <Eigen/Dense>

#include "negdep/types.hpp"

namespace negdep {

CorrMatrix::CorrMatrix(int K, std::vector<double> row_major_entries)
    : k_(K), entries_(std::move(row_major_entries)), min_eigenvalue_(0.0) {
  if (K < 1) throw std::invalid_argument("CorrMatrix: K must be positive");
  if (entries_.size() != static_cast<std::size_t>(K) * static_cast<std::size_t>(K)) {
    throw std::invalid_argument("CorrMatrix: expected K*K entries");
  }
  for (int i = 0; i < K; ++i) {
    const double d = (*this)(i, i);
    if (std::abs(d - 1.0) > kSymmetryTol) {
      throw std::invalid_argument("CorrMatrix: diagonal must be 1");
    }
    for (int j = i + 1; j < K; ++j) {
      if (std::abs((*this)(i, j) - (*this)(j, i)) > kSymmetryTol) {
        throw std::invalid_argument("CorrMatrix: matrix must be symmetric");
      }
    }
  }
  Eigen::MatrixXd m(K, K);
  for (int i = 0; i < K; ++i)
    for (int j = 0; j < K; ++j) m(i, j) = (*this)(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  min_eigenvalue_ = solver.eigenvalues().minCoeff();
  if (min_eigenvalue_ < -kPsdSlack) {
    throw std::invalid_argument("CorrMatrix: not positive semidefinite (min eigenvalue " +
                                std::to_string(min_eigenvalue_) + ")");
  }
}

CorrMatrix CorrMatrix::identity(int K) {
  if (K < 1) throw std::invalid_argument("CorrMatrix: K must be positive");
  std::vector<double> e(static_cast<std::size_t>(K) * K, 0.0);
  for (int i = 0; i < K; ++i) e[static_cast<std::size_t>(i) * K + i] = 1.0;
  return CorrMatrix(K, std::move(e));
}

CorrMatrix CorrMatrix::equicorrelation(int K, double rho) {
  if (K < 1) throw std::invalid_argument("CorrMatrix: K must be positive");
  if (K > 1) {
    const double lo = -1.0 / static_cast<double>(K - 1);
    if (rho < lo - kPsdSlack || rho > 1.0) {
      throw std::invalid_argument("CorrMatrix: equicorrelation requires rho in [-1/(K-1), 1]");
    }
  }
  std::vector<double> e(static_cast<std::size_t>(K) * K, rho);
  for (int i = 0; i < K; ++i) e[static_cast<std::size_t>(i) * K + i] = 1.0;
  return CorrMatrix(K, std::move(e));
}

bool CorrMatrix::all_offdiag_nonpositive() const {
  for (int i = 0; i < k_; ++i)
    for (int j = 0; j < k_; ++j)
      if (i != j && (*this)(i, j) > 0.0) return false;
  return true;
}

}  // namespace negdep
