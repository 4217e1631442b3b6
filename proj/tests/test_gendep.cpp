#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "negdep/gendep.hpp"
#include "negdep/rng.hpp"

using namespace negdep;

namespace {

// Kolmogorov-Smirnov distance to Uniform[0,1]; critical value at the 1e-3
// level for n draws is sqrt(-ln(5e-4) / (2n)).
double ks_uniform(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max({d, std::abs(xs[i] - lo), std::abs(xs[i] - hi)});
  }
  return d;
}

constexpr double kKsCrit1e3At1e5 = 0.0061647799877781865;

double chi2_stat(const std::map<std::string, long>& counts, long total, std::size_t cells) {
  const double expected = static_cast<double>(total) / static_cast<double>(cells);
  double stat = 0.0;
  for (const auto& [key, n] : counts) {
    const double d = static_cast<double>(n) - expected;
    stat += d * d / expected;
  }
  stat += expected * static_cast<double>(cells - counts.size());  // unobserved cells
  return stat;
}

}  // namespace

TEST_CASE("rng streams are reproducible and distinct") {
  Rng a(42, 7, 3);
  Rng b(42, 7, 3);
  Rng c(42, 7, 4);
  Rng d(42, 8, 3);
  bool same_ab = true;
  bool same_ac = true;
  bool same_ad = true;
  for (int i = 0; i < 64; ++i) {
    const auto va = a.next_u64();
    same_ab = same_ab && va == b.next_u64();
    same_ac = same_ac && va == c.next_u64();
    same_ad = same_ad && va == d.next_u64();
  }
  CHECK(same_ab);
  CHECK_FALSE(same_ac);
  CHECK_FALSE(same_ad);
}

TEST_CASE("uniform01 stays strictly inside (0,1)") {
  Rng rng(1, 2);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform01();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("below is unbiased on small ranges") {
  Rng rng(3, 1);
  std::vector<long> counts(5, 0);
  const long n = 200000;
  for (long i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(rng.below(5))];
  for (long c : counts) {
    CHECK(std::abs(static_cast<double>(c) - n / 5.0) < 4.0 * std::sqrt(n * 0.2 * 0.8));
  }
}

TEST_CASE("norm_quantile matches reference values") {
  CHECK(norm_quantile(0.5) == 0.0);
  CHECK(norm_quantile(0.975) == doctest::Approx(1.959963984540054).epsilon(1e-13));
  CHECK(norm_quantile(0.2) == doctest::Approx(-0.8416212335729142).epsilon(1e-13));
  CHECK(norm_quantile(0.0001) == doctest::Approx(-3.7190164854556804).epsilon(1e-13));
  CHECK(norm_quantile(1e-10) == doctest::Approx(-6.361340902404056).epsilon(1e-13));
  CHECK(norm_quantile(0.7) == doctest::Approx(0.5244005127080407).epsilon(1e-13));
  CHECK_THROWS_AS(norm_quantile(0.0), std::domain_error);
  CHECK_THROWS_AS(norm_quantile(1.0), std::domain_error);
}

TEST_CASE("norm_cdf and norm_quantile round-trip") {
  CHECK(norm_cdf(1.96) == doctest::Approx(0.9750021048517795).epsilon(1e-14));
  CHECK(norm_cdf(-3.0) == doctest::Approx(0.0013498980316300933).epsilon(1e-12));
  for (double p : {1e-8, 1e-4, 0.023, 0.31, 0.5, 0.77, 0.9995, 1 - 1e-9}) {
    CHECK(norm_cdf(norm_quantile(p)) == doctest::Approx(p).epsilon(1e-12));
  }
}

TEST_CASE("GaussianFactor rejects positive off-diagonals without the override") {
  CHECK_THROWS_AS(GaussianFactor(CorrMatrix::equicorrelation(3, 0.5)), std::invalid_argument);
  CHECK_NOTHROW(GaussianFactor(CorrMatrix::equicorrelation(3, 0.5), true));
  CHECK_NOTHROW(GaussianFactor(CorrMatrix::equicorrelation(3, -0.5)));
}

TEST_CASE("identity factor gives independent uniform p-values") {
  const GaussianFactor factor(CorrMatrix::identity(2));
  CHECK(factor.rank() == 2);
  Rng rng(101, 0);
  const std::vector<double> shift = {0.0, 0.0};
  const long n = 100000;
  std::vector<double> p1(n);
  double cross = 0.0;
  for (long i = 0; i < n; ++i) {
    const PVector p = sample_neg_gaussian_p(factor, shift, rng);
    p1[static_cast<std::size_t>(i)] = p[0];
    cross += (p[0] - 0.5) * (p[1] - 0.5);
  }
  CHECK(ks_uniform(p1) < kKsCrit1e3At1e5);
  // empirical correlation of uniforms ~ N(0, 1/(12 sqrt(n)))
  const double corr = cross / n * 12.0;
  CHECK(std::abs(corr) < 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("pairwise rho = -1 gives an exactly counter-monotonic pair") {
  const GaussianFactor factor(CorrMatrix::bivariate(-1.0));
  CHECK(factor.rank() == 1);  // the zero eigenvalue is dropped, not inflated
  Rng rng(102, 0);
  const std::vector<double> shift = {0.0, 0.0};
  for (int i = 0; i < 1000; ++i) {
    const auto y = factor.sample_latent(shift, rng);
    CHECK(y[1] == doctest::Approx(-y[0]).epsilon(1e-12));
    const PVector p = sample_neg_gaussian_p(factor, shift, rng);
    CHECK(p[0] + p[1] == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("equicorrelation at the PSD boundary is accepted (K=3, rho=-1/2)") {
  const CorrMatrix sigma = CorrMatrix::equicorrelation(3, -0.5);
  CHECK(sigma.min_eigenvalue() >= -kPsdSlack);
  const GaussianFactor factor(sigma);
  CHECK(factor.rank() == 2);  // singular direction dropped
  Rng rng(103, 0);
  const auto y = factor.sample_latent({0.0, 0.0, 0.0}, rng);
  CHECK(y[0] + y[1] + y[2] == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("latent correlation converges to Sigma") {
  Rng corr_rng(104, 0);
  const CorrMatrix sigma = make_random_nonpositive_corr(4, corr_rng);
  const GaussianFactor factor(sigma);
  Rng rng(105, 0);
  const long n = 100000;
  const std::vector<double> shift(4, 0.0);
  std::vector<std::vector<double>> ys(4, std::vector<double>(n));
  for (long i = 0; i < n; ++i) {
    const auto y = factor.sample_latent(shift, rng);
    for (int k = 0; k < 4; ++k) ys[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] = y[static_cast<std::size_t>(k)];
  }
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      double cov = 0.0, va = 0.0, vb = 0.0;
      for (long i = 0; i < n; ++i) {
        cov += ys[a][i] * ys[b][i];
        va += ys[a][i] * ys[a][i];
        vb += ys[b][i] * ys[b][i];
      }
      const double corr = cov / std::sqrt(va * vb);
      CHECK(std::abs(corr - sigma(a, b)) < 5.0 / std::sqrt(static_cast<double>(n)));
    }
  }
}

TEST_CASE("neg_gaussian null marginals are uniform (KS at the 1e-3 band)") {
  const CorrMatrix sigma = CorrMatrix::equicorrelation(5, -0.2);
  const GaussianFactor factor(sigma);
  // nonzero shift on the last two coordinates; nulls must stay uniform
  const std::vector<double> shift = {0.0, 0.0, 0.0, 2.0, 3.0};
  Rng rng(106, 0);
  const long n = 100000;
  std::vector<double> p0(n), p2(n);
  for (long i = 0; i < n; ++i) {
    const PVector p = sample_neg_gaussian_p(factor, shift, rng);
    p0[static_cast<std::size_t>(i)] = p[0];
    p2[static_cast<std::size_t>(i)] = p[2];
  }
  CHECK(ks_uniform(p0) < kKsCrit1e3At1e5);
  CHECK(ks_uniform(p2) < kKsCrit1e3At1e5);
}

TEST_CASE("cyclical p-values: uniform marginals, K=2 antisymmetry") {
  Rng rng(107, 0);
  const long n = 100000;
  std::vector<double> first(n);
  for (long i = 0; i < n; ++i) {
    const PVector p = sample_cyclical_pvalues(6, rng);
    first[static_cast<std::size_t>(i)] = p[0];
  }
  CHECK(ks_uniform(first) < kKsCrit1e3At1e5);
  for (int i = 0; i < 1000; ++i) {
    const PVector p = sample_cyclical_pvalues(2, rng);
    CHECK(p[0] + p[1] == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(sample_cyclical_pvalues(1, rng), std::invalid_argument);
}

TEST_CASE("sample_permutation: multiset preserved, uniform over orders") {
  Rng rng(108, 0);
  const std::vector<double> values = {1.0, 2.0, 3.0};
  std::map<std::string, long> counts;
  const long n = 100000;
  for (long i = 0; i < n; ++i) {
    const auto perm = sample_permutation(values, rng);
    auto sorted = perm;
    std::sort(sorted.begin(), sorted.end());
    REQUIRE(sorted == values);
    std::string key;
    for (double v : perm) key += std::to_string(static_cast<int>(v));
    ++counts[key];
  }
  CHECK(counts.size() == 6);
  CHECK(chi2_stat(counts, n, 6) < 20.515005652432873);  // chi^2_5 at 1e-3
  CHECK(sample_permutation({0.9}, rng) == std::vector<double>{0.9});
}

TEST_CASE("two-element permutation is a fair coin") {
  Rng rng(109, 0);
  long first = 0;
  const long n = 100000;
  for (long i = 0; i < n; ++i) {
    if (sample_permutation({1.0, 2.0}, rng)[0] == 1.0) ++first;
  }
  const double se = std::sqrt(0.25 / n);
  CHECK(std::abs(first / static_cast<double>(n) - 0.5) < 3.0 * se);
}

TEST_CASE("sample_without_replacement: exact law on ordered pairs") {
  Rng rng(110, 0);
  const std::vector<double> bag = {1.0, 2.0, 3.0};
  std::map<std::string, long> counts;
  const long n = 100000;
  for (long i = 0; i < n; ++i) {
    const auto draw = sample_without_replacement(bag, 2, rng);
    REQUIRE(draw.size() == 2);
    REQUIRE(draw[0] != draw[1]);
    ++counts[std::to_string(static_cast<int>(draw[0])) + std::to_string(static_cast<int>(draw[1]))];
  }
  CHECK(counts.size() == 6);
  CHECK(chi2_stat(counts, n, 6) < 20.515005652432873);
  // K = N: a permutation of the bag
  auto full = sample_without_replacement(bag, 3, rng);
  std::sort(full.begin(), full.end());
  CHECK(full == bag);
  CHECK_THROWS_AS(sample_without_replacement(bag, 4, rng), std::invalid_argument);
}

TEST_CASE("sample_multinomial_indicator: uniform m-subsets") {
  Rng rng(111, 0);
  CHECK(sample_multinomial_indicator(3, 3, rng) == std::vector<int>{1, 1, 1});
  CHECK(sample_multinomial_indicator(0, 3, rng) == std::vector<int>{0, 0, 0});
  CHECK_THROWS_AS(sample_multinomial_indicator(4, 3, rng), std::invalid_argument);

  std::map<std::string, long> counts;
  const long n = 100000;
  for (long i = 0; i < n; ++i) {
    const auto ind = sample_multinomial_indicator(1, 3, rng);
    REQUIRE(std::accumulate(ind.begin(), ind.end(), 0) == 1);
    ++counts[std::to_string(ind[0]) + std::to_string(ind[1]) + std::to_string(ind[2])];
  }
  CHECK(counts.size() == 3);
  CHECK(chi2_stat(counts, n, 3) < 13.815510557964274);  // chi^2_2 at 1e-3

  std::map<std::string, long> pair_counts;
  for (long i = 0; i < n; ++i) {
    const auto ind = sample_multinomial_indicator(2, 4, rng);
    REQUIRE(std::accumulate(ind.begin(), ind.end(), 0) == 2);
    std::string key;
    for (int b : ind) key += static_cast<char>('0' + b);
    ++pair_counts[key];
  }
  CHECK(pair_counts.size() == 6);
  CHECK(chi2_stat(pair_counts, n, 6) < 20.515005652432873);
}

TEST_CASE("tournament scores: structure and exact two-player law") {
  Rng rng(112, 0);
  const std::vector<std::vector<int>> zero = {{0, 0}, {0, 0}};
  const std::vector<std::vector<double>> fair = {{0.0, 0.5}, {0.5, 0.0}};
  CHECK(sample_tournament_scores(zero, fair, rng) == std::vector<int>{0, 0});

  const std::vector<std::vector<int>> one = {{0, 1}, {1, 0}};
  long wins1 = 0;
  const long n = 100000;
  for (long i = 0; i < n; ++i) {
    const auto s = sample_tournament_scores(one, fair, rng);
    REQUIRE(s[0] + s[1] == 1);  // no draws
    wins1 += s[0];
  }
  CHECK(std::abs(wins1 / static_cast<double>(n) - 0.5) < 3.0 * std::sqrt(0.25 / n));

  // with draws, (0,0) becomes possible
  const std::vector<std::vector<double>> withdraw = {{0.0, 0.3}, {0.3, 0.0}};
  bool saw_draw = false;
  for (int i = 0; i < 1000 && !saw_draw; ++i) {
    const auto s = sample_tournament_scores(one, withdraw, rng);
    saw_draw = s[0] + s[1] == 0;
  }
  CHECK(saw_draw);

  CHECK_THROWS_AS(sample_tournament_scores({{1}}, {{0.0}}, rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_tournament_scores(one, {{0.0, 0.7}, {0.7, 0.0}}, rng),
                  std::domain_error);
}

TEST_CASE("knockout scores: structural win-count multiset") {
  Rng rng(113, 0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto wins = sample_knockout_scores(2, rng);
    auto sorted = wins;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted == std::vector<int>{0, 0, 1, 2});
  }
  // r=1: one winner, one loser
  const auto two = sample_knockout_scores(1, rng);
  CHECK(two[0] + two[1] == 1);
  // counts of players with w wins equal 2^(r-w-1) for w < r
  for (int trial = 0; trial < 50; ++trial) {
    const auto wins = sample_knockout_scores(4, rng);
    std::map<int, int> hist;
    for (int w : wins) ++hist[w];
    CHECK(hist[4] == 1);
    for (int w = 0; w < 4; ++w) CHECK(hist[w] == (1 << (4 - w - 1)));
  }
  CHECK_THROWS_AS(sample_knockout_scores(0, rng), std::invalid_argument);
}

TEST_CASE("wnd_diagnostic exact oracles for the extreme copulas") {
  Rng rng(114, 0);
  const long n = 100000;
  std::vector<std::vector<double>> counter(n), comono(n);
  for (long i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    counter[static_cast<std::size_t>(i)] = {u, 1.0 - u};
    comono[static_cast<std::size_t>(i)] = {u, u};
  }
  // counter-monotonic at x=0.3: joint 0, product 0.09, gap -0.09
  const WndReport rc = wnd_diagnostic(counter, {0.3}, {{1, 2}});
  CHECK(rc.cells.size() == 1);
  CHECK(rc.cells[0].joint == 0.0);
  CHECK(rc.cells[0].gap == doctest::Approx(-0.09).epsilon(0.05));
  CHECK_FALSE(rc.any_flagged);
  // comonotonic at x=0.3: joint 0.3, product 0.09, gap +0.21, flagged
  const WndReport rm = wnd_diagnostic(comono, {0.3}, {{1, 2}});
  CHECK(rm.cells[0].gap == doctest::Approx(0.21).epsilon(0.05));
  CHECK(rm.any_flagged);
  // independent uniforms: gap within +-3 SE of zero (some margin)
  std::vector<std::vector<double>> indep(n);
  for (auto& row : indep) row = {rng.uniform01(), rng.uniform01()};
  const WndReport ri = wnd_diagnostic(indep, {0.5}, {{1, 2}});
  CHECK(std::abs(ri.cells[0].gap) <= 4.0 * ri.cells[0].std_error);

  CHECK_THROWS_AS(wnd_diagnostic(counter, {}, {{1, 2}}), std::invalid_argument);
  CHECK_THROWS_AS(wnd_diagnostic(counter, {0.3}, {{1, 5}}), std::invalid_argument);
  std::vector<std::vector<double>> tiny(100, {0.5, 0.5});
  CHECK_THROWS_AS(wnd_diagnostic(tiny, {0.3}, {{1, 2}}), std::invalid_argument);
}

TEST_CASE("make_random_nonpositive_corr yields valid strictly-negative matrices") {
  Rng rng(115, 0);
  for (int K : {2, 5, 20}) {
    const CorrMatrix sigma = make_random_nonpositive_corr(K, rng);
    CHECK(sigma.all_offdiag_nonpositive());
    CHECK(sigma.min_eigenvalue() > 0.0);
    for (int i = 0; i < K; ++i) {
      for (int j = 0; j < K; ++j) {
        if (i != j) CHECK(sigma(i, j) < 0.0);
      }
    }
  }
}
