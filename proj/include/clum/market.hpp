#pragma once

// Market state, securities and the price formulas of a constant log utility
// market maker (CLUM), given a known value of the cost function.
//
// Outcome encoding for Boolean markets: outcome index j is an n-bit
// assignment where event e (1-based) is true iff bit (e - 1) of j is set.

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace clum {

using Quantity = std::int64_t;
using OutcomeIndex = std::uint64_t;

struct Literal {
  int event = 1;  // 1-based event index
  bool positive = true;

  bool holds(OutcomeIndex outcome) const noexcept {
    return (((outcome >> (event - 1)) & 1U) != 0) == positive;
  }
  friend bool operator==(const Literal&, const Literal&) = default;
};

// Disjunction of two literals over distinct events.
struct Clause2 {
  Literal first;
  Literal second;

  bool holds(OutcomeIndex outcome) const noexcept {
    return first.holds(outcome) || second.holds(outcome);
  }
  friend bool operator==(const Clause2&, const Clause2&) = default;
};

// Arrow-Debreu security on a single outcome.
struct Indicator {
  OutcomeIndex outcome = 0;
  friend bool operator==(const Indicator&, const Indicator&) = default;
};

// Pays on every outcome index in [lo, hi].
struct Interval {
  OutcomeIndex lo = 0;
  OutcomeIndex hi = 0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

using Security = std::variant<Clause2, Indicator, Interval>;

bool pays_on(const Security& security, OutcomeIndex outcome) noexcept;

struct LedgerEntry {
  Security security;
  Quantity quantity = 0;
};

class MarketState {
 public:
  // Boolean market over n events, N = 2^n outcomes.
  static MarketState boolean(double c0, int n_events);
  // Market over N ordered outcomes (interval / indicator securities).
  static MarketState indexed(double c0, std::uint64_t outcome_count);

  double c0() const noexcept { return c0_; }
  std::optional<int> n_events() const noexcept { return n_events_; }
  std::uint64_t outcome_count() const noexcept { return outcome_count_; }
  const std::vector<LedgerEntry>& ledger() const noexcept { return ledger_; }

  // Throws DomainError if the security is malformed for this market.
  void validate(const Security& security) const;

  // Appends a purchase. Zero quantities are accepted and recorded.
  void buy(const Security& security, Quantity quantity);

  bool interval_only() const noexcept;

 private:
  MarketState(double c0, std::optional<int> n_events, std::uint64_t outcome_count);

  double c0_;
  std::optional<int> n_events_;
  std::uint64_t outcome_count_;
  std::vector<LedgerEntry> ledger_;
};

// Default bound on the number of outcomes the brute-force paths materialise.
inline constexpr std::uint64_t kMaxMaterializedOutcomes = std::uint64_t{1} << 20;

Quantity payout_for_outcome(const MarketState& state, OutcomeIndex outcome);

// Explicit share vector q_j = payout_for_outcome(state, j) for all j.
// Throws CapacityError when N exceeds max_outcomes.
std::vector<Quantity> materialize(const MarketState& state,
                                  std::uint64_t max_outcomes = kMaxMaterializedOutcomes);

// A cost value C expressed relative to the largest payout: C = q_max + t with
// t = exp(log_offset) > 0. Keeping log t explicit lets the solvers represent
// costs whose offset underflows a double (t can be as small as e^-50000 when
// q_max >> C0 and few outcomes attain q_max).
struct CostLevel {
  double q_max = 0.0;
  double log_offset = 0.0;

  double offset() const noexcept;
  double cost() const noexcept { return q_max + offset(); }

  // Throws SingularityError if cost <= q_max.
  static CostLevel from_cost(double cost, double q_max);
};

Quantity max_payout(std::span<const Quantity> q);

// (C - q_max) / (C - q_j): the reciprocal weight of outcome j scaled so the
// top payout has weight 1. Lies in (0, 1]; may round to 0 for extreme ratios.
double relative_weight(const CostLevel& level, Quantity q_j) noexcept;

double outcome_price(std::span<const Quantity> q, const CostLevel& level,
                     OutcomeIndex j);
double outcome_price(std::span<const Quantity> q, double cost, OutcomeIndex j);

// All N outcome prices.
std::vector<double> outcome_prices(std::span<const Quantity> q, const CostLevel& level);

double security_price(std::span<const Quantity> q, const CostLevel& level,
                      const Security& security);
double security_price(std::span<const Quantity> q, double cost,
                      const Security& security);

// 1/p_j split into the number of outcomes tied with q_j (each contributing
// exactly one) and the remaining sum over the other outcomes.
struct ReciprocalPrice {
  std::uint64_t tied = 0;
  double remainder = 0.0;
};

ReciprocalPrice reciprocal_outcome_price(std::span<const Quantity> q,
                                         const CostLevel& level, OutcomeIndex j);

}  // namespace clum
