#ifndef NEGDEP_GENDEP_HPP
#define NEGDEP_GENDEP_HPP

#include <memory>
#include <string>
#include <vector>

#include "negdep/rng.hpp"
#include "negdep/types.hpp"

namespace negdep {

/// Precomputed factor A with A A^T = Sigma, from the eigendecomposition.
/// Eigenvalues below kEigenvalueFloor are zeroed, so exactly singular
/// correlation matrices (e.g. a counter-monotonic pair) keep their exact
/// linear structure instead of picking up regularization noise.
class GaussianFactor {
 public:
  /// Requires all off-diagonals <= 0 unless allow_mixed_signs is set (used
  /// only for probing mixed-sign territory and adversarial baselines).
  explicit GaussianFactor(const CorrMatrix& sigma, bool allow_mixed_signs = false);
  ~GaussianFactor();
  GaussianFactor(GaussianFactor&&) noexcept;
  GaussianFactor& operator=(GaussianFactor&&) noexcept;
  GaussianFactor(const GaussianFactor&) = delete;
  GaussianFactor& operator=(const GaussianFactor&) = delete;

  int size() const;
  int rank() const;

  /// Y = shift + A Z with Z iid standard normal.
  std::vector<double> sample_latent(const std::vector<double>& shift, Rng& rng) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// P_k = Phi(-Y_k) for Y ~ N(shift, Sigma); zero-shift coordinates are
/// marginally Uniform[0,1].
PVector sample_neg_gaussian_p(const GaussianFactor& factor,
                              const std::vector<double>& shift, Rng& rng);

/// Uniformly random permutation (Fisher-Yates) of a fixed vector.
std::vector<double> sample_permutation(const std::vector<double>& values, Rng& rng);

/// K values drawn without replacement from the bag, in draw order.
std::vector<double> sample_without_replacement(const std::vector<double>& bag, int K,
                                               Rng& rng);

/// Uniformly random m-subset of {1..K} as a 0/1 indicator vector.
std::vector<int> sample_multinomial_indicator(int m, int K, Rng& rng);

/// One game between a fixed pair: +1 first player wins, -1 second wins,
/// 0 draw. p_win + p_loss <= 1; the remainder is the draw probability.
int sample_game_outcome(double p_win, double p_loss, Rng& rng);

/// Round-robin scores S_i = sum_j X_ij where X_ij ~ Binomial(n_ij, p_ij)
/// independently across pairs (draws allowed when p_ij + p_ji < 1).
std::vector<int> sample_tournament_scores(const std::vector<std::vector<int>>& n_games,
                                          const std::vector<std::vector<double>>& win_prob,
                                          Rng& rng);

/// Knockout win counts for 2^rounds equally skilled players under a
/// uniformly random bracket; exactly one player ends with `rounds` wins.
std::vector<int> sample_knockout_scores(int rounds, Rng& rng);

/// P_i = Phi((X_i - X_{i+1 mod K}) / sqrt(2)) for iid standard normal X:
/// uniform marginals, negatively orthant dependent jointly.
PVector sample_cyclical_pvalues(int K, Rng& rng);

/// Random correlation matrix with strictly nonpositive off-diagonals,
/// scaled to strict diagonal dominance (hence positive definite).
CorrMatrix make_random_nonpositive_corr(int K, Rng& rng);

/// One (subset, threshold) cell of the weak-negative-dependence diagnostic.
struct WndCell {
  std::vector<int> subset;  // 1-based coordinates
  double threshold = 0.0;
  double joint = 0.0;       // estimate of P(all X_k <= x)
  double product = 0.0;     // product of marginal estimates
  double gap = 0.0;         // joint - product; <= 0 under the hypothesis
  double std_error = 0.0;   // delta-method SE of the gap
  bool flagged = false;     // gap > margin * std_error
};

struct WndReport {
  std::vector<WndCell> cells;
  double margin_sigmas = 3.0;
  bool any_flagged = false;
};

/// Estimates P(joint lower tail) - prod(marginals) per (subset, threshold)
/// with delta-method standard errors. Diagnostic only: finite samples can
/// refute but never prove the property.
WndReport wnd_diagnostic(const std::vector<std::vector<double>>& samples,
                         const std::vector<double>& thresholds,
                         const std::vector<std::vector<int>>& subsets,
                         double margin_sigmas = 3.0);

}  // namespace negdep

#endif  // NEGDEP_GENDEP_HPP
