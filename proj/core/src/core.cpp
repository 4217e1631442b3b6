#include "negdep/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "negdep/types.hpp"

namespace negdep {

PVector::PVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) {
    throw std::invalid_argument("PVector: need at least one entry");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("PVector: entry " + std::to_string(i + 1) +
                                  " is not a probability in [0,1]");
    }
  }
}

EVector::EVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) {
    throw std::invalid_argument("EVector: need at least one entry");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (std::isnan(v) || v < 0.0) {
      throw std::invalid_argument("EVector: entry " + std::to_string(i + 1) +
                                  " must be nonnegative");
    }
  }
}

WeightVector::WeightVector(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) {
    throw std::invalid_argument("WeightVector: need at least one entry");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    const double w = weights_[i];
    if (!(w >= 0.0) || std::isinf(w)) {
      throw std::invalid_argument("WeightVector: entry " + std::to_string(i + 1) +
                                  " must be finite and nonnegative");
    }
    sum += w;
  }
  const double K = static_cast<double>(weights_.size());
  if (std::abs(sum - K) > kWeightSumTol) {
    throw std::invalid_argument("WeightVector: weights must sum to K=" +
                                std::to_string(weights_.size()) + " (got sum " +
                                std::to_string(sum) + ")");
  }
}

NullMask::NullMask(std::vector<bool> is_null) : is_null_(std::move(is_null)) {
  if (is_null_.empty()) {
    throw std::invalid_argument("NullMask: need at least one entry");
  }
  k0_ = static_cast<int>(std::count(is_null_.begin(), is_null_.end(), true));
}

NullMask NullMask::all_null(int K) {
  if (K < 1) throw std::invalid_argument("NullMask: K must be positive");
  return NullMask(std::vector<bool>(static_cast<std::size_t>(K), true));
}

bool RejectionSet::contains(int index_1based) const {
  return std::binary_search(rejected.begin(), rejected.end(), index_1based);
}

McEstimate McEstimate::binomial(std::int64_t count, std::int64_t reps, std::uint64_t seed) {
  if (reps <= 0) throw std::invalid_argument("McEstimate: reps must be positive");
  if (count < 0 || count > reps) throw std::invalid_argument("McEstimate: count out of range");
  McEstimate est;
  est.estimate = static_cast<double>(count) / static_cast<double>(reps);
  est.std_error = std::sqrt(est.estimate * (1.0 - est.estimate) / static_cast<double>(reps));
  est.reps = reps;
  est.seed = seed;
  return est;
}

namespace {

// Kahan-compensated sum, evaluated in index order.
double compensated_sum(const std::vector<double>& xs) {
  double sum = 0.0;
  double c = 0.0;
  for (double x : xs) {
    const double y = x - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace

McEstimate McEstimate::mean_of(const std::vector<double>& per_rep, std::uint64_t seed) {
  if (per_rep.empty()) throw std::invalid_argument("McEstimate: no replications");
  const double n = static_cast<double>(per_rep.size());
  const double mean = compensated_sum(per_rep) / n;
  double ss = 0.0;
  double c = 0.0;
  for (double x : per_rep) {
    const double d = (x - mean) * (x - mean);
    const double y = d - c;
    const double t = ss + y;
    c = (t - ss) - y;
    ss = t;
  }
  McEstimate est;
  est.estimate = mean;
  est.std_error = per_rep.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  est.reps = static_cast<std::int64_t>(per_rep.size());
  est.seed = seed;
  return est;
}

GroupPartition::GroupPartition(std::vector<std::vector<int>> groups) : groups_(std::move(groups)) {
  if (groups_.empty()) {
    throw std::invalid_argument("GroupPartition: need at least one group");
  }
  std::vector<int> seen;
  for (const auto& g : groups_) {
    if (g.empty()) throw std::invalid_argument("GroupPartition: groups must be nonempty");
    for (int idx : g) {
      if (idx < 1) throw std::invalid_argument("GroupPartition: indices are 1-based");
      seen.push_back(idx);
    }
  }
  covered_ = static_cast<int>(seen.size());
  std::sort(seen.begin(), seen.end());
  if (std::adjacent_find(seen.begin(), seen.end()) != seen.end()) {
    throw std::invalid_argument("GroupPartition: groups must be disjoint");
  }
}

GroupPartition GroupPartition::from_labels(const std::vector<std::string>& labels) {
  std::vector<std::string> order;
  std::vector<std::vector<int>> groups;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto it = std::find(order.begin(), order.end(), labels[i]);
    std::size_t g;
    if (it == order.end()) {
      order.push_back(labels[i]);
      groups.emplace_back();
      g = groups.size() - 1;
    } else {
      g = static_cast<std::size_t>(it - order.begin());
    }
    groups[g].push_back(static_cast<int>(i) + 1);
  }
  return GroupPartition(std::move(groups));
}

void GroupPartition::check_bounds(int K) const {
  for (const auto& g : groups_) {
    for (int idx : g) {
      if (idx > K) {
        throw std::invalid_argument("GroupPartition: index " + std::to_string(idx) +
                                    " exceeds K=" + std::to_string(K));
      }
    }
  }
}

std::vector<double> order_statistics(const PVector& p) {
  std::vector<double> sorted = p.values();
  std::sort(sorted.begin(), sorted.end());
  return sorted;
}

std::vector<int> order_permutation(const PVector& p) {
  std::vector<int> idx(static_cast<std::size_t>(p.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return p[a] < p[b]; });
  return idx;
}

double harmonic_ell(int K) {
  if (K < 1) throw std::invalid_argument("harmonic_ell: K must be >= 1");
  double sum = 0.0;
  for (int k = K; k >= 1; --k) {
    sum += 1.0 / static_cast<double>(k);
  }
  return sum;
}

}  // namespace negdep
