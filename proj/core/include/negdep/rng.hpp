#ifndef NEGDEP_RNG_HPP
#define NEGDEP_RNG_HPP

#include <cstdint>

namespace negdep {

/// Identifies one reproducible random stream. Distinct (seed, stream_id)
/// pairs give statistically independent streams; replication r of an
/// experiment uses Rng(seed, stream_id, r).
struct RngSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

/// PCG64 (XSL-RR) generator. Stream and replication selection are folded
/// into the initial state via SplitMix64, so sequences are bitwise
/// reproducible regardless of how replications are scheduled onto threads.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t rep = 0);
  explicit Rng(RngSeed s, std::uint64_t rep = 0) : Rng(s.seed, s.stream_id, rep) {}

  std::uint64_t next_u64();

  /// Uniform double strictly inside (0,1): 53 random bits, half-offset.
  double uniform01();

  /// Uniform integer in {0,...,n-1} (unbiased, Lemire rejection).
  std::uint64_t below(std::uint64_t n);

  /// Standard normal via the inverse CDF (deterministic, no state coupling).
  double normal();

 private:
  unsigned __int128 state_;
  unsigned __int128 inc_;
};

/// SplitMix64 finalizer; exposed for deriving stream ids from labels.
std::uint64_t mix64(std::uint64_t x);

/// FNV-1a 64-bit hash of a byte string, for naming streams after scenarios.
std::uint64_t fnv1a64(const char* s);

/// Standard normal CDF.
double norm_cdf(double x);

/// Standard normal quantile (Wichura's PPND16), |error| ~ 1e-16 in p.
double norm_quantile(double p);

}  // namespace negdep

#endif  // NEGDEP_RNG_HPP
