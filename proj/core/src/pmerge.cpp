#include "negdep/pmerge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "negdep/core.hpp"

namespace negdep {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::domain_error("alpha must lie in (0,1)");
  }
}

double simes_of_sorted(const std::vector<double>& sorted) {
  const double K = static_cast<double>(sorted.size());
  double best = kInf;
  for (std::size_t k = 1; k <= sorted.size(); ++k) {
    const double v = sorted[k - 1] * K / static_cast<double>(k);
    best = std::min(best, v);
  }
  return std::min(best, 1.0);
}

}  // namespace

double simes(const PVector& p) {
  return simes_of_sorted(order_statistics(p));
}

double weighted_simes(const PVector& p, const WeightVector& w) {
  if (p.size() != w.size()) {
    throw std::invalid_argument("weighted_simes: p and w must have equal length");
  }
  std::vector<double> q(static_cast<std::size_t>(p.size()));
  for (int i = 0; i < p.size(); ++i) {
    if (w[i] == 0.0) {
      q[static_cast<std::size_t>(i)] = (p[i] == 0.0) ? 0.0 : kInf;
    } else {
      q[static_cast<std::size_t>(i)] = p[i] / w[i];
    }
  }
  std::sort(q.begin(), q.end());
  const double K = static_cast<double>(q.size());
  double best = kInf;
  for (std::size_t k = 1; k <= q.size(); ++k) {
    best = std::min(best, q[k - 1] * K / static_cast<double>(k));
  }
  return std::clamp(best, 0.0, 1.0);
}

double simes_bound_additive(double alpha, int K) {
  check_alpha(alpha);
  if (K < 1) throw std::invalid_argument("simes_bound_additive: K must be >= 1");
  double sum = alpha;
  const double logK = std::log(static_cast<double>(K));
  for (int k = 2; k <= K; ++k) {
    // log of C(K,k) (alpha k / K)^k, via log-gamma so K up to 1e6 stays finite.
    const double log_binom = std::lgamma(K + 1.0) - std::lgamma(k + 1.0) - std::lgamma(K - k + 1.0);
    const double log_term = log_binom + k * (std::log(alpha) + std::log(static_cast<double>(k)) - logK);
    const double term = std::exp(log_term);
    sum += term;
    if (sum >= 1.0) return 1.0;
    // Terms decay geometrically once (e alpha)^k takes over; stop when negligible.
    if (k > 4 && term < 1e-18 * sum) break;
  }
  return std::min(sum, 1.0);
}

double simes_bound_tilde(double alpha) {
  check_alpha(alpha);
  const double ea = M_E * alpha;
  if (ea >= 1.0) return 1.0;
  const double raw = alpha + 2.0 * alpha * alpha + 4.5 * alpha * alpha * alpha +
                     (1.0 / std::sqrt(8.0 * M_PI)) * (ea * ea * ea * ea) / (1.0 - ea);
  return std::min(raw, 1.0);
}

double simes_bound_cubic(double alpha) {
  if (!(alpha > 0.0 && alpha <= 0.1)) {
    throw std::domain_error("simes_bound_cubic: valid only for alpha in (0, 0.1]");
  }
  return alpha + 2.0 * alpha * alpha + 6.0 * alpha * alpha * alpha;
}

double simes_corrected_p(const PVector& p) {
  const double factor = std::min(kSimesFactorAllAlpha, harmonic_ell(p.size()));
  return std::min(factor * simes(p), 1.0);
}

SimesBoundReport bound_report(double alpha, int K) {
  check_alpha(alpha);
  if (K < 1) throw std::invalid_argument("bound_report: K must be >= 1");
  SimesBoundReport r;
  r.alpha = alpha;
  r.K = K;
  r.additive_general = simes_bound_additive(alpha, K);
  const double ea = M_E * alpha;
  r.succinct = (ea >= 1.0) ? std::numeric_limits<double>::infinity()
                           : alpha + 2.0 * alpha * alpha + 4.5 * alpha * alpha * alpha +
                                 (1.0 / std::sqrt(8.0 * M_PI)) * (ea * ea * ea * ea) / (1.0 - ea);
  r.tilde_s = simes_bound_tilde(alpha);
  if (alpha <= 0.1) r.cubic = simes_bound_cubic(alpha);
  r.hommel = std::min(harmonic_ell(K) * alpha, 1.0);
  return r;
}

SimesOfSimesResult simes_of_simes(const PVector& p, const GroupPartition& groups) {
  groups.check_bounds(p.size());
  SimesOfSimesResult result;
  result.group_values.reserve(static_cast<std::size_t>(groups.group_count()));
  for (const auto& g : groups.groups()) {
    std::vector<double> sub;
    sub.reserve(g.size());
    for (int idx : g) sub.push_back(p[idx - 1]);
    result.group_values.push_back(simes(PVector(std::move(sub))));
  }
  result.value = simes(PVector(result.group_values));
  const double f_total = std::min(kSimesFactorAllAlpha, harmonic_ell(groups.covered_count()));
  const double f_groups = std::min(kSimesFactorAllAlpha, harmonic_ell(groups.group_count()));
  result.na_factor_total = f_total * f_total;
  result.na_factor_groups = f_groups * f_groups;
  result.prd_factor = 1.0;
  return result;
}

}  // namespace negdep
