#include "negdep/emerge.hpp"

#include <cmath>
#include <limits>

namespace negdep {

namespace {

void check_subset(const EVector& e, const std::vector<int>& subset) {
  for (int idx : subset) {
    if (idx < 1 || idx > e.size()) {
      throw std::out_of_range("e-value index " + std::to_string(idx) +
                              " outside {1.." + std::to_string(e.size()) + "}");
    }
  }
}

}  // namespace

CalibratorSpec::CalibratorSpec(double kappa_in) : kappa(kappa_in) {
  if (!(kappa > 0.0 && kappa < 1.0)) {
    throw std::domain_error("CalibratorSpec: kappa must lie in (0,1)");
  }
}

double SubPsiSpec::psi(double lambda) const {
  switch (family) {
    case Family::subGaussian:
      return 0.5 * lambda * lambda;
  }
  throw std::logic_error("SubPsiSpec: unknown family");
}

bool SubPsiSpec::lambda_in_domain(double lambda) const {
  switch (family) {
    case Family::subGaussian:
      return std::isfinite(lambda);
  }
  return false;
}

double product_e(const EVector& e, const std::vector<int>& subset) {
  check_subset(e, subset);
  double prod = 1.0;
  for (int idx : subset) prod *= e[idx - 1];
  return prod;
}

double lambda_product(const EVector& e, const std::vector<double>& lambdas) {
  if (static_cast<int>(lambdas.size()) != e.size()) {
    throw std::invalid_argument("lambda_product: lambda length must equal K");
  }
  double prod = 1.0;
  for (int i = 0; i < e.size(); ++i) {
    const double l = lambdas[static_cast<std::size_t>(i)];
    if (!(l >= 0.0 && l <= 1.0)) {
      throw std::domain_error("lambda_product: each lambda must lie in [0,1]");
    }
    prod *= 1.0 - l + l * e[i];
  }
  return prod;
}

double u_statistic(const EVector& e, int k) {
  const int K = e.size();
  if (k < 1 || k > K) {
    throw std::domain_error("u_statistic: order k must lie in {1..K}");
  }
  // u[j] holds the order-j U-statistic of the first n entries:
  // u(n,j) = ((n-j) u(n-1,j) + j e_n u(n-1,j-1)) / n.
  std::vector<double> u(static_cast<std::size_t>(k) + 1, 0.0);
  u[0] = 1.0;
  for (int n = 1; n <= K; ++n) {
    const double en = e[n - 1];
    const int top = std::min(n, k);
    for (int j = top; j >= 1; --j) {
      const double carry = static_cast<double>(n - j) * u[static_cast<std::size_t>(j)];
      const double enter = static_cast<double>(j) * en * u[static_cast<std::size_t>(j) - 1];
      u[static_cast<std::size_t>(j)] = (carry + enter) / static_cast<double>(n);
    }
  }
  return u[static_cast<std::size_t>(k)];
}

double convex_combo(const EVector& e,
                    const std::vector<std::pair<std::vector<int>, double>>& terms) {
  double wsum = 0.0;
  for (const auto& [subset, w] : terms) {
    if (!(w >= 0.0)) throw std::domain_error("convex_combo: weights must be nonnegative");
    check_subset(e, subset);
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > kWeightSumTol) {
    throw std::domain_error("convex_combo: weights must sum to 1");
  }
  double total = 0.0;
  for (const auto& [subset, w] : terms) {
    total += w * product_e(e, subset);
  }
  return total;
}

EVector calibrate(const PVector& p, const CalibratorSpec& spec) {
  std::vector<double> out(static_cast<std::size_t>(p.size()));
  for (int i = 0; i < p.size(); ++i) {
    out[static_cast<std::size_t>(i)] =
        p[i] == 0.0 ? std::numeric_limits<double>::infinity()
                    : spec.kappa * std::pow(p[i], spec.kappa - 1.0);
  }
  return EVector(std::move(out));
}

double chernoff_e(const std::vector<double>& x, const std::vector<SubPsiSpec>& specs,
                  const std::vector<double>& lambdas) {
  if (x.size() != specs.size() || x.size() != lambdas.size()) {
    throw std::invalid_argument("chernoff_e: x, specs and lambdas must have equal length");
  }
  double exponent = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!specs[i].lambda_in_domain(lambdas[i])) {
      throw std::domain_error("chernoff_e: lambda outside psi domain");
    }
    exponent += lambdas[i] * (x[i] - specs[i].mu) - specs[i].psi(lambdas[i]) * specs[i].v;
  }
  return std::exp(exponent);
}

double average_e(const EVector& e) {
  double sum = 0.0;
  for (int i = 0; i < e.size(); ++i) sum += e[i];
  return sum / static_cast<double>(e.size());
}

}  // namespace negdep
