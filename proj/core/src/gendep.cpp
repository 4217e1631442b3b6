#include "negdep/gendep.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace negdep {

struct GaussianFactor::Impl {
  Eigen::MatrixXd a;  // K x rank
};

GaussianFactor::GaussianFactor(const CorrMatrix& sigma, bool allow_mixed_signs)
    : impl_(std::make_unique<Impl>()) {
  if (!allow_mixed_signs && !sigma.all_offdiag_nonpositive()) {
    throw std::invalid_argument(
        "GaussianFactor: Sigma has positive off-diagonals; pass "
        "allow_mixed_signs to sample anyway");
  }
  const int K = sigma.size();
  Eigen::MatrixXd m(K, K);
  for (int i = 0; i < K; ++i)
    for (int j = 0; j < K; ++j) m(i, j) = sigma(i, j);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("GaussianFactor: eigendecomposition failed");
  }
  const Eigen::VectorXd& vals = solver.eigenvalues();
  std::vector<int> keep;
  for (int i = 0; i < K; ++i) {
    if (vals(i) >= kEigenvalueFloor) keep.push_back(i);
  }
  if (keep.empty()) {
    throw std::invalid_argument("GaussianFactor: Sigma has no usable spectrum");
  }
  impl_->a.resize(K, static_cast<int>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    impl_->a.col(static_cast<int>(c)) =
        solver.eigenvectors().col(keep[c]) * std::sqrt(vals(keep[c]));
  }
}

GaussianFactor::~GaussianFactor() = default;
GaussianFactor::GaussianFactor(GaussianFactor&&) noexcept = default;
GaussianFactor& GaussianFactor::operator=(GaussianFactor&&) noexcept = default;

int GaussianFactor::size() const { return static_cast<int>(impl_->a.rows()); }
int GaussianFactor::rank() const { return static_cast<int>(impl_->a.cols()); }

std::vector<double> GaussianFactor::sample_latent(const std::vector<double>& shift,
                                                  Rng& rng) const {
  const int K = size();
  if (static_cast<int>(shift.size()) != K) {
    throw std::invalid_argument("GaussianFactor: shift length must equal K");
  }
  Eigen::VectorXd z(rank());
  for (int i = 0; i < rank(); ++i) z(i) = rng.normal();
  Eigen::VectorXd y = impl_->a * z;
  std::vector<double> out(static_cast<std::size_t>(K));
  for (int i = 0; i < K; ++i) out[static_cast<std::size_t>(i)] = shift[static_cast<std::size_t>(i)] + y(i);
  return out;
}

PVector sample_neg_gaussian_p(const GaussianFactor& factor,
                              const std::vector<double>& shift, Rng& rng) {
  const std::vector<double> y = factor.sample_latent(shift, rng);
  std::vector<double> p(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) p[i] = norm_cdf(-y[i]);
  return PVector(std::move(p));
}

std::vector<double> sample_permutation(const std::vector<double>& values, Rng& rng) {
  std::vector<double> out = values;
  for (std::size_t i = out.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(out[i - 1], out[j]);
  }
  return out;
}

std::vector<double> sample_without_replacement(const std::vector<double>& bag, int K,
                                               Rng& rng) {
  if (K < 1 || static_cast<std::size_t>(K) > bag.size()) {
    throw std::invalid_argument("sample_without_replacement: need 1 <= K <= N");
  }
  std::vector<double> pool = bag;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    const std::size_t j = static_cast<std::size_t>(rng.below(pool.size() - static_cast<std::size_t>(k)));
    out.push_back(pool[j]);
    std::swap(pool[j], pool[pool.size() - 1 - static_cast<std::size_t>(k)]);
  }
  return out;
}

std::vector<int> sample_multinomial_indicator(int m, int K, Rng& rng) {
  if (K < 1 || m < 0 || m > K) {
    throw std::invalid_argument("sample_multinomial_indicator: need 0 <= m <= K");
  }
  std::vector<int> idx(static_cast<std::size_t>(K));
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<int> out(static_cast<std::size_t>(K), 0);
  for (int k = 0; k < m; ++k) {
    const std::size_t j = static_cast<std::size_t>(rng.below(idx.size() - static_cast<std::size_t>(k)));
    out[static_cast<std::size_t>(idx[j])] = 1;
    std::swap(idx[j], idx[idx.size() - 1 - static_cast<std::size_t>(k)]);
  }
  return out;
}

int sample_game_outcome(double p_win, double p_loss, Rng& rng) {
  if (!(p_win >= 0.0 && p_loss >= 0.0 && p_win + p_loss <= 1.0)) {
    throw std::domain_error("sample_game_outcome: need p_win, p_loss >= 0, sum <= 1");
  }
  const double u = rng.uniform01();
  if (u < p_win) return 1;
  if (u < p_win + p_loss) return -1;
  return 0;
}

std::vector<int> sample_tournament_scores(const std::vector<std::vector<int>>& n_games,
                                          const std::vector<std::vector<double>>& win_prob,
                                          Rng& rng) {
  const std::size_t K = n_games.size();
  if (K == 0 || win_prob.size() != K) {
    throw std::invalid_argument("sample_tournament_scores: matrix sizes must agree");
  }
  for (std::size_t i = 0; i < K; ++i) {
    if (n_games[i].size() != K || win_prob[i].size() != K) {
      throw std::invalid_argument("sample_tournament_scores: matrices must be K x K");
    }
    if (n_games[i][i] != 0) {
      throw std::invalid_argument("sample_tournament_scores: diagonal of n_games must be 0");
    }
    for (std::size_t j = i + 1; j < K; ++j) {
      if (n_games[i][j] != n_games[j][i] || n_games[i][j] < 0) {
        throw std::invalid_argument("sample_tournament_scores: n_games must be symmetric, >= 0");
      }
      if (!(win_prob[i][j] >= 0.0 && win_prob[j][i] >= 0.0 &&
            win_prob[i][j] + win_prob[j][i] <= 1.0)) {
        throw std::domain_error("sample_tournament_scores: need p_ij + p_ji <= 1");
      }
    }
  }
  std::vector<int> scores(K, 0);
  for (std::size_t i = 0; i < K; ++i) {
    for (std::size_t j = i + 1; j < K; ++j) {
      for (int g = 0; g < n_games[i][j]; ++g) {
        const int outcome = sample_game_outcome(win_prob[i][j], win_prob[j][i], rng);
        if (outcome > 0) ++scores[i];
        if (outcome < 0) ++scores[j];
      }
    }
  }
  return scores;
}

std::vector<int> sample_knockout_scores(int rounds, Rng& rng) {
  if (rounds < 1 || rounds > 20) {
    throw std::invalid_argument("sample_knockout_scores: rounds must lie in [1,20]");
  }
  const std::size_t n = std::size_t{1} << rounds;
  std::vector<int> alive(n);
  std::iota(alive.begin(), alive.end(), 0);
  // Uniformly random bracket = one uniform shuffle of the field.
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(alive[i - 1], alive[j]);
  }
  std::vector<int> wins(n, 0);
  while (alive.size() > 1) {
    std::vector<std::size_t> next;
    next.reserve(alive.size() / 2);
    for (std::size_t m = 0; m + 1 < alive.size(); m += 2) {
      const bool first_wins = (rng.next_u64() & 1u) == 0;
      const std::size_t winner = static_cast<std::size_t>(first_wins ? alive[m] : alive[m + 1]);
      ++wins[winner];
      next.push_back(winner);
    }
    alive.assign(next.begin(), next.end());
  }
  return wins;
}

PVector sample_cyclical_pvalues(int K, Rng& rng) {
  if (K < 2) throw std::invalid_argument("sample_cyclical_pvalues: K must be >= 2");
  std::vector<double> x(static_cast<std::size_t>(K));
  for (int i = 0; i < K; ++i) x[static_cast<std::size_t>(i)] = rng.normal();
  std::vector<double> p(static_cast<std::size_t>(K));
  for (int i = 0; i < K; ++i) {
    const double diff = x[static_cast<std::size_t>(i)] - x[static_cast<std::size_t>((i + 1) % K)];
    p[static_cast<std::size_t>(i)] = norm_cdf(diff * M_SQRT1_2);
  }
  return PVector(std::move(p));
}

CorrMatrix make_random_nonpositive_corr(int K, Rng& rng) {
  if (K < 1) throw std::invalid_argument("make_random_nonpositive_corr: K must be positive");
  std::vector<double> mag(static_cast<std::size_t>(K) * K, 0.0);
  std::vector<double> rowsum(static_cast<std::size_t>(K), 0.0);
  for (int i = 0; i < K; ++i) {
    for (int j = i + 1; j < K; ++j) {
      const double u = 0.1 + 0.9 * rng.uniform01();
      mag[static_cast<std::size_t>(i) * K + j] = u;
      mag[static_cast<std::size_t>(j) * K + i] = u;
      rowsum[static_cast<std::size_t>(i)] += u;
      rowsum[static_cast<std::size_t>(j)] += u;
    }
  }
  const double max_sum = *std::max_element(rowsum.begin(), rowsum.end());
  const double scale = max_sum > 0.0 ? 0.9 / max_sum : 0.0;
  std::vector<double> entries(static_cast<std::size_t>(K) * K, 0.0);
  for (int i = 0; i < K; ++i) {
    for (int j = 0; j < K; ++j) {
      entries[static_cast<std::size_t>(i) * K + j] =
          i == j ? 1.0 : -mag[static_cast<std::size_t>(i) * K + j] * scale;
    }
  }
  return CorrMatrix(K, std::move(entries));
}

WndReport wnd_diagnostic(const std::vector<std::vector<double>>& samples,
                         const std::vector<double>& thresholds,
                         const std::vector<std::vector<int>>& subsets,
                         double margin_sigmas) {
  if (samples.size() < 10000) {
    throw std::invalid_argument("wnd_diagnostic: need at least 1e4 samples");
  }
  if (thresholds.empty() || subsets.empty()) {
    throw std::invalid_argument("wnd_diagnostic: degenerate threshold or subset grid");
  }
  const std::size_t n = samples.size();
  const std::size_t dim = samples.front().size();
  for (const auto& subset : subsets) {
    if (subset.empty()) throw std::invalid_argument("wnd_diagnostic: empty subset");
    for (int c : subset) {
      if (c < 1 || static_cast<std::size_t>(c) > dim) {
        throw std::invalid_argument("wnd_diagnostic: subset coordinate out of range");
      }
    }
  }

  WndReport report;
  report.margin_sigmas = margin_sigmas;
  for (const auto& subset : subsets) {
    const std::size_t s = subset.size();
    for (double x : thresholds) {
      // Indicator moments: joint J = prod I_k, marginals I_k.
      std::vector<double> mean_i(s, 0.0);
      double mean_j = 0.0;
      std::vector<double> cov_ji(s, 0.0);   // E[J I_k] accumulators
      std::vector<std::vector<double>> cov_ii(s, std::vector<double>(s, 0.0));
      for (const auto& row : samples) {
        double j = 1.0;
        std::vector<double> ind(s);
        for (std::size_t k = 0; k < s; ++k) {
          ind[k] = row[static_cast<std::size_t>(subset[k] - 1)] <= x ? 1.0 : 0.0;
          j *= ind[k];
        }
        mean_j += j;
        for (std::size_t k = 0; k < s; ++k) {
          mean_i[k] += ind[k];
          cov_ji[k] += j * ind[k];  // == j since indicators
          for (std::size_t l = 0; l <= k; ++l) cov_ii[k][l] += ind[k] * ind[l];
        }
      }
      const double dn = static_cast<double>(n);
      mean_j /= dn;
      for (std::size_t k = 0; k < s; ++k) {
        mean_i[k] /= dn;
        cov_ji[k] = cov_ji[k] / dn - mean_j * mean_i[k];
        for (std::size_t l = 0; l <= k; ++l) {
          cov_ii[k][l] = cov_ii[k][l] / dn - mean_i[k] * mean_i[l];
          cov_ii[l][k] = cov_ii[k][l];
        }
      }
      const double var_j = mean_j * (1.0 - mean_j);

      WndCell cell;
      cell.subset = subset;
      cell.threshold = x;
      cell.joint = mean_j;
      cell.product = 1.0;
      for (std::size_t k = 0; k < s; ++k) cell.product *= mean_i[k];
      cell.gap = cell.joint - cell.product;

      // Delta method on g = J - prod I_k: grad = (1, -prod_{l != k} I_l).
      std::vector<double> grad(s);
      for (std::size_t k = 0; k < s; ++k) {
        double g = -1.0;
        for (std::size_t l = 0; l < s; ++l) {
          if (l != k) g *= mean_i[l];
        }
        grad[k] = g;
      }
      double var = var_j;
      for (std::size_t k = 0; k < s; ++k) {
        var += 2.0 * grad[k] * cov_ji[k];
        for (std::size_t l = 0; l < s; ++l) var += grad[k] * grad[l] * cov_ii[k][l];
      }
      cell.std_error = std::sqrt(std::max(var, 0.0) / dn);
      cell.flagged = cell.gap > margin_sigmas * cell.std_error;
      report.any_flagged = report.any_flagged || cell.flagged;
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

}  // namespace negdep
