#ifndef NEGDEP_TYPES_HPP
#define NEGDEP_TYPES_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace negdep {

// Centralized numeric tolerances.
inline constexpr double kWeightSumTol = 1e-9;   // |sum(w) - K| allowed on the simplex
inline constexpr double kSymmetryTol = 1e-12;   // correlation matrix symmetry / unit diagonal
inline constexpr double kPsdSlack = 1e-10;      // smallest eigenvalue allowed below zero
inline constexpr double kEigenvalueFloor = 1e-10;  // eigenvalues below this are treated as zero

/// Ordered collection of K candidate p-values, each in [0,1].
class PVector {
 public:
  explicit PVector(std::vector<double> values);

  const std::vector<double>& values() const { return values_; }
  int size() const { return static_cast<int>(values_.size()); }
  double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }

 private:
  std::vector<double> values_;
};

/// Ordered collection of K candidate e-values: nonnegative, +infinity permitted.
class EVector {
 public:
  explicit EVector(std::vector<double> values);

  const std::vector<double>& values() const { return values_; }
  int size() const { return static_cast<int>(values_.size()); }
  double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }

 private:
  std::vector<double> values_;
};

/// Nonnegative prior weights summing to K (the simplex Delta_K).
class WeightVector {
 public:
  explicit WeightVector(std::vector<double> weights);

  const std::vector<double>& weights() const { return weights_; }
  int size() const { return static_cast<int>(weights_.size()); }
  double operator[](int i) const { return weights_[static_cast<std::size_t>(i)]; }

 private:
  std::vector<double> weights_;
};

/// Which of the K hypotheses are true nulls.
class NullMask {
 public:
  explicit NullMask(std::vector<bool> is_null);

  static NullMask all_null(int K);

  const std::vector<bool>& is_null() const { return is_null_; }
  int size() const { return static_cast<int>(is_null_.size()); }
  int K0() const { return k0_; }
  bool operator[](int i) const { return is_null_[static_cast<std::size_t>(i)]; }

 private:
  std::vector<bool> is_null_;
  int k0_ = 0;
};

/// K x K Gaussian correlation matrix: symmetric, unit diagonal, PSD up to
/// kPsdSlack. Construction validates all three (PSD via eigendecomposition).
class CorrMatrix {
 public:
  explicit CorrMatrix(int K, std::vector<double> row_major_entries);

  static CorrMatrix identity(int K);
  /// All off-diagonals equal to rho; requires rho in [-1/(K-1), 1].
  static CorrMatrix equicorrelation(int K, double rho);
  static CorrMatrix bivariate(double rho) { return equicorrelation(2, rho); }

  int size() const { return k_; }
  double operator()(int i, int j) const {
    return entries_[static_cast<std::size_t>(i) * k_ + j];
  }
  const std::vector<double>& entries() const { return entries_; }

  /// True iff every off-diagonal entry is <= 0.
  bool all_offdiag_nonpositive() const;

  double min_eigenvalue() const { return min_eigenvalue_; }

 private:
  int k_;
  std::vector<double> entries_;
  double min_eigenvalue_;
};

/// Output of BH-type step-up procedures. Indices are 1-based hypothesis
/// labels, sorted ascending; k_star == rejected.size().
struct RejectionSet {
  std::vector<int> rejected;
  int k_star = 0;

  bool empty() const { return rejected.empty(); }
  bool contains(int index_1based) const;
};

/// A Monte Carlo estimate with its standard error, replication count and seed.
struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::int64_t reps = 0;
  std::uint64_t seed = 0;

  /// Binomial proportion estimate: count successes out of reps.
  static McEstimate binomial(std::int64_t count, std::int64_t reps, std::uint64_t seed);
  /// Sample-mean estimate with std error s / sqrt(n).
  static McEstimate mean_of(const std::vector<double>& per_rep, std::uint64_t seed);
};

/// Non-overlapping, nonempty subsets of {1..K} (1-based indices).
class GroupPartition {
 public:
  explicit GroupPartition(std::vector<std::vector<int>> groups);

  /// Builds groups from per-element labels, in order of first appearance.
  static GroupPartition from_labels(const std::vector<std::string>& labels);

  const std::vector<std::vector<int>>& groups() const { return groups_; }
  int group_count() const { return static_cast<int>(groups_.size()); }
  /// Total number of indices covered by the groups.
  int covered_count() const { return covered_; }
  /// Throws if any index exceeds K.
  void check_bounds(int K) const;

 private:
  std::vector<std::vector<int>> groups_;
  int covered_ = 0;
};

}  // namespace negdep

#endif  // NEGDEP_TYPES_HPP
