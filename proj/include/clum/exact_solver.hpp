#pragma once

// Exact solution of the CLUM invariant
//
//     (1/N) * sum_j ln(C - q_j) = ln C0
//
// for an explicit share vector. The unknown is carried as u = ln(C - q_max);
// the left-hand side is strictly increasing and convex in u, so Newton steps
// safeguarded by a bisection bracket converge from the bracket on
// max{C0, q_max} <= C <= q_max + C0.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "clum/market.hpp"

namespace clum {

struct SolveConfig {
  double abs_tol = 1e-12;  // on the log-domain invariant residual
  int max_iter = 200;

  void validate() const;
};

// Share vector compressed to (payout value, multiplicity) pairs, sorted by
// value. The invariant only depends on this multiset.
class PayoutHistogram {
 public:
  struct Bin {
    Quantity value;
    std::uint64_t count;
  };

  PayoutHistogram() = default;
  static PayoutHistogram from_values(std::span<const Quantity> q);
  // Bins may arrive in any order and repeat; zero counts are dropped.
  static PayoutHistogram from_bins(std::vector<Bin> bins);

  const std::vector<Bin>& bins() const noexcept { return bins_; }
  std::uint64_t outcome_count() const noexcept { return total_; }
  Quantity q_max() const;
  std::uint64_t count_at_max() const;

 private:
  std::vector<Bin> bins_;
  std::uint64_t total_ = 0;
};

struct CostSolution {
  CostLevel level;         // C = q_max + exp(log_offset)
  double cost = 0.0;       // level.cost() rounded to double
  double residual = 0.0;   // invariant residual at `level`
  int iterations = 0;
};

// (1/N) sum_j ln(C - q_j) - ln C0 for C = q_max + exp(log_offset).
double invariant_residual(const PayoutHistogram& hist, double c0, double log_offset);

CostSolution solve_cost_exact(const PayoutHistogram& hist, double c0,
                              const SolveConfig& cfg = {});
CostSolution solve_cost_exact(std::span<const Quantity> q, double c0,
                              const SolveConfig& cfg = {});

// C(after) - C(before) for buying `quantity` shares of `security`.
// Throws CapacityError when the market cannot be materialised.
double trade_cost(const MarketState& state, const Security& security,
                  Quantity quantity, const SolveConfig& cfg = {},
                  std::uint64_t max_outcomes = kMaxMaterializedOutcomes);

// Difference of two solved costs, formed as (q_max' - q_max) + (t' - t) so
// that large payouts do not swamp the offsets.
double cost_difference(const CostSolution& after, const CostSolution& before);

}  // namespace clum
