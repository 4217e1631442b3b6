#ifndef NEGDEP_EMERGE_HPP
#define NEGDEP_EMERGE_HPP

#include <utility>
#include <vector>

#include "negdep/types.hpp"

namespace negdep {

/// Power-family calibrator phi_kappa(p) = kappa * p^(kappa-1), kappa in (0,1).
/// Nonnegative, decreasing on (0,1], unit integral over [0,1].
struct CalibratorSpec {
  double kappa;
  explicit CalibratorSpec(double kappa_in);
};

/// Moment-generating-function envelope for Chernoff e-variables. Only the
/// sub-Gaussian family psi(lambda) = lambda^2 / 2 (domain R) is built in.
struct SubPsiSpec {
  enum class Family { subGaussian };
  Family family = Family::subGaussian;
  double v = 1.0;   // variance proxy
  double mu = 0.0;  // mean

  double psi(double lambda) const;
  bool lambda_in_domain(double lambda) const;
};

/// Product of e-values over a 1-based index subset; empty subset gives 1.
double product_e(const EVector& e, const std::vector<int>& subset);

/// prod_i (1 - lambda_i + lambda_i e_i) for lambda_i in [0,1].
double lambda_product(const EVector& e, const std::vector<double>& lambdas);

/// Order-k U-statistic: average of all k-fold products of distinct entries.
/// Computed by the elementary-symmetric recurrence in O(K*k), normalized
/// in place so intermediate values stay at the scale of the result.
double u_statistic(const EVector& e, int k);

/// Convex combination sum_A w_A * prod_{i in A} e_i over 1-based subsets.
double convex_combo(const EVector& e,
                    const std::vector<std::pair<std::vector<int>, double>>& terms);

/// Entrywise calibration p -> kappa p^(kappa-1); p = 0 maps to +infinity.
EVector calibrate(const PVector& p, const CalibratorSpec& spec);

/// exp( sum_i lambda_i (x_i - mu_i) - sum_i psi_i(lambda_i) v_i ).
double chernoff_e(const std::vector<double>& x, const std::vector<SubPsiSpec>& specs,
                  const std::vector<double>& lambdas);

/// Arithmetic mean, valid under arbitrary dependence.
double average_e(const EVector& e);

}  // namespace negdep

#endif  // NEGDEP_EMERGE_HPP
