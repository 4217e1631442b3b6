#ifndef NEGDEP_MC_HPP
#define NEGDEP_MC_HPP

#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "negdep/gendep.hpp"
#include "negdep/rng.hpp"
#include "negdep/types.hpp"

namespace negdep {

enum class SamplerKind {
  independent,
  neg_gaussian,
  counter_monotonic_pairs,
  permutation,
  without_replacement,
  multinomial_indicator,
  tournament_binary,
  knockout_random,
  cyclical,
};

const char* to_string(SamplerKind kind);
SamplerKind sampler_kind_from_string(const std::string& s);

/// Which random vector to draw each replication, with kind-specific params.
struct SamplerConfig {
  SamplerKind kind = SamplerKind::independent;
  int K = 1;

  std::optional<CorrMatrix> sigma;        // neg_gaussian
  bool allow_mixed_signs = false;         // neg_gaussian: permit positive off-diagonals
  std::vector<double> shift;              // neg_gaussian: 0 for nulls, > 0 alternatives
  std::vector<double> values;             // permutation: the fixed vector
  std::vector<double> bag;                // without_replacement
  int m = 0;                              // multinomial_indicator
  std::vector<std::vector<int>> n_games;  // tournament_binary
  std::vector<std::vector<double>> win_prob;
  int rounds = 0;                         // knockout_random
};

/// Materialized p-vector sampler (factorizes Sigma once). Only kinds that
/// produce candidate p-values are accepted.
class PSampler {
 public:
  explicit PSampler(const SamplerConfig& config);

  PVector draw(Rng& rng) const;
  int size() const { return config_.K; }
  /// Nulls are the zero-shift coordinates (everything, absent a shift).
  NullMask null_mask() const;

 private:
  SamplerConfig config_;
  std::optional<GaussianFactor> factor_;
  std::vector<double> shift_;
};

enum class Procedure {
  simes,
  weighted_simes,
  simes_of_simes,
  bh,
  by,
  group_simes_bh,
  evalue_pipeline,
};

const char* to_string(Procedure p);
Procedure procedure_from_string(const std::string& s);

enum class MergeMethod { product, lambda, ustat, average, convex };

/// calibrate -> merge recipe for e-value experiments.
struct EvaluePipeline {
  double kappa = 0.7;
  MergeMethod method = MergeMethod::product;
  int ustat_order = 2;
  std::vector<double> lambdas;  // broadcast when a single value is given
  std::vector<std::pair<std::vector<int>, double>> convex_terms;
};

struct ExperimentSpec {
  SamplerConfig sampler;
  Procedure procedure = Procedure::simes;
  double alpha = 0.05;
  std::int64_t reps = 100000;
  RngSeed seed;
  std::optional<NullMask> null_mask;        // default: derived from the sampler
  std::optional<WeightVector> weights;      // weighted_simes
  std::optional<GroupPartition> groups;     // simes_of_simes / group_simes_bh
  EvaluePipeline pipeline;                  // evalue_pipeline
  int threads = 1;
};

void validate(const ExperimentSpec& spec);

enum class CheckDirection { upper, lower };

/// One bound check: pass iff the estimate respects the bound within
/// margin_sigmas standard errors (direction selects the side).
struct VerificationResult {
  std::string name;
  std::string bound_name;
  McEstimate estimate;
  double bound = 0.0;
  double margin_sigmas = 3.0;
  CheckDirection direction = CheckDirection::upper;
  /// Signed distance past the bound in SE units ((est - bound)/se for upper).
  double excess_sigmas = 0.0;
  bool pass = false;
  bool reran_at_10x = false;  // multiplicity protocol: failed checks rerun once
  bool exploratory = false;   // informational record; never fails a run
};

VerificationResult verify(const McEstimate& est, double bound, double margin_sigmas = 3.0,
                          CheckDirection direction = CheckDirection::upper);

/// Deterministic parallel replication: rep r uses Rng(seed, stream, r) and
/// writes slot r; all reductions happen afterwards in index order, so the
/// result is identical for every thread count.
template <typename T, typename PerRep>
std::vector<T> run_replications(std::int64_t reps, RngSeed seed, int threads, PerRep&& fn) {
  std::vector<T> out(static_cast<std::size_t>(reps));
  const int workers =
      std::max(1, static_cast<int>(std::min<std::int64_t>(threads, reps)));
  if (workers == 1) {
    for (std::int64_t r = 0; r < reps; ++r) {
      Rng rng(seed, static_cast<std::uint64_t>(r));
      out[static_cast<std::size_t>(r)] = fn(r, rng);
    }
    return out;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  const std::int64_t chunk = (reps + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::int64_t lo = w * chunk;
    const std::int64_t hi = std::min(reps, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] {
      for (std::int64_t r = lo; r < hi; ++r) {
        Rng rng(seed, static_cast<std::uint64_t>(r));
        out[static_cast<std::size_t>(r)] = fn(r, rng);
      }
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

/// Fraction of replications with simes(P) <= alpha; requires all-null.
McEstimate estimate_simes_type1(const ExperimentSpec& spec);

/// Mean FDP (with SE of the mean) of the configured BH-type procedure.
McEstimate estimate_bh_fdr(const ExperimentSpec& spec);

/// Mean of the merged e-value under the configured pipeline.
McEstimate estimate_evalue_mean(const ExperimentSpec& spec);

/// Type-1 error of the bivariate Simes test per (alpha, rho) cell.
/// Result is indexed [alpha][rho].
std::vector<std::vector<McEstimate>> scan_bivariate_gaussian(
    const std::vector<double>& alphas, const std::vector<double>& rhos, std::int64_t reps,
    RngSeed seed, int threads = 1, bool allow_positive_rho = false);

/// Round-robin betting pipeline: per-game e-values 1 +/- epsilon, products
/// per pair and per player, order-2 U-statistic across players. Returns the
/// empirical mean of the global e-value under the fair null.
McEstimate tournament_pipeline(int K, int games_per_pair, double epsilon, std::int64_t reps,
                               RngSeed seed, int threads = 1, double draw_prob = 0.0);

/// A formatted reference table (also exposed as CSV for golden comparison).
struct PaperTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::string csv() const;
};

/// Simes bound summary at the six reference alpha levels.
PaperTable reproduce_table1();
/// BH FDR bound summary at the three reference alpha levels.
PaperTable reproduce_table2();

}  // namespace negdep

#endif  // NEGDEP_MC_HPP
