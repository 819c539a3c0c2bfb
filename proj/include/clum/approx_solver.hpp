#pragma once

// Randomised bisection for the CLUM cost function. Given an oracle for the
// largest payout q_max and its multiplicity s_qmax, the invariant splits into
//
//     U1(c) = (s_qmax / N) ln(c - q_max)                    (exact)
//     U2(c) = (1/N) sum_{q_j < q_max} ln(c - q_j)          (sampled)
//
// and the search keeps [a, b] around the root of U1 + U2 = ln C0, starting
// from [max{q_max, C0}, q_max + C0]. With integral payouts every sampled log
// term lies in [0, ln(C0 + q_max)], which fixes the Hoeffding sample size.

#include <cstdint>
#include <span>
#include <vector>

#include "clum/market.hpp"
#include "clum/rng.hpp"

namespace clum {

struct MaxStats {
  Quantity q_max = 0;
  std::uint64_t s_qmax = 0;
  friend bool operator==(const MaxStats&, const MaxStats&) = default;
};

struct OutcomeSample {
  OutcomeIndex index = 0;
  Quantity payout = 0;
};

// Query interface the approximate solver needs from a market.
class OutcomeOracle {
 public:
  virtual ~OutcomeOracle() = default;

  virtual std::uint64_t outcome_count() const = 0;
  virtual MaxStats max_stats() const = 0;
  virtual Quantity payout(OutcomeIndex index) const = 0;

  // Uniform draw over all N outcomes.
  virtual OutcomeSample sample_outcome(Rng& rng) const {
    const OutcomeIndex j = rng.below(outcome_count());
    return {j, payout(j)};
  }
};

// Oracle over a materialised share vector; the vector must outlive it.
class ExplicitOracle final : public OutcomeOracle {
 public:
  explicit ExplicitOracle(std::span<const Quantity> q);

  std::uint64_t outcome_count() const override { return q_.size(); }
  MaxStats max_stats() const override { return stats_; }
  Quantity payout(OutcomeIndex index) const override;

 private:
  std::span<const Quantity> q_;
  MaxStats stats_;
};

struct ApproxConfig {
  double epsilon = 0.05;
  double delta = 0.05;

  void validate() const;
};

// ceil(log2(1/epsilon)): the bound on bisection rounds.
int max_search_rounds(double epsilon);

// Accepted samples per round: ceil(T L^2 ln(2/delta) / (2 epsilon^2)) with
// L = max{0, ln(C0 + q_max)}; forced to 1 when L = 0.
std::uint64_t u2_sample_size(double c0, const MaxStats& stats, const ApproxConfig& cfg);

double u1(double c, const MaxStats& stats, std::uint64_t outcome_count);

struct U2Estimate {
  double value = 0.0;
  std::uint64_t samples = 0;  // accepted draws
  std::uint64_t draws = 0;    // including rejected ones
};

// Monte Carlo estimate of U2(c_hat). Rejection-samples uniform outcomes until
// q_j < q_max. Throws SamplingError when the rejection budget
// 64 m N / (N - s_qmax) is exhausted.
U2Estimate estimate_u2(double c_hat, double c0, const MaxStats& stats,
                       const OutcomeOracle& oracle, const ApproxConfig& cfg, Rng& rng);

struct SearchRound {
  double lower = 0.0;     // a^t
  double upper = 0.0;     // b^t
  double midpoint = 0.0;  // C-hat^t
  double u_hat = 0.0;     // U1 + U2-hat at the midpoint
};

struct CostEstimate {
  double c_hat = 0.0;
  double epsilon = 0.0;
  double delta = 0.0;
  int iterations = 0;
  bool terminated_early = false;
  double lower = 0.0;  // final bracket
  double upper = 0.0;
  MaxStats stats;
  std::uint64_t samples_per_round = 0;
  std::uint64_t total_draws = 0;
  std::vector<SearchRound> trace;

  // Multiplicative band the estimate is guaranteed (w.h.p.) to respect.
  double band() const noexcept { return 1.0 + 2.0 * epsilon; }
};

CostEstimate approximate_cost(double c0, const OutcomeOracle& oracle,
                              const ApproxConfig& cfg, Rng& rng);

}  // namespace clum
