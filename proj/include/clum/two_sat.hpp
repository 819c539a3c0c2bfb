#pragma once

// #2-SAT through CLUM pricing: buy q = C0 (2^n - 1) shares of every clause
// security, then price the indicator of one satisfying assignment w. The
// model count is floor(1 / p_w).

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "clum/exact_solver.hpp"
#include "clum/market.hpp"

namespace clum {

struct TwoSatFormula {
  int n = 0;
  std::vector<Clause2> clauses;

  // Throws DomainError on malformed clauses.
  void validate() const;
};

// Parses DIMACS CNF restricted to clauses of exactly two literals.
TwoSatFormula parse_dimacs(std::istream& in);

// Implication-graph / strongly-connected-components check. Returns a
// satisfying assignment (bit e-1 = event e) or nullopt.
std::optional<OutcomeIndex> two_sat_find_assignment(const TwoSatFormula& f);

inline constexpr int kMaxBruteForceEvents = 24;
inline constexpr int kMaxPricingEvents = 16;

std::uint64_t count_models_brute_force(const TwoSatFormula& f);

struct PricingCount {
  std::uint64_t count = 0;
  bool satisfiable = false;
  OutcomeIndex witness = 0;
  double price = 0.0;           // p_w
  ReciprocalPrice reciprocal;   // 1/p_w = tied + remainder
  CostSolution cost;            // C after the k clause purchases
  Quantity share_quantity = 0;  // q
  int reruns = 0;               // tighter-tolerance re-solves taken
};

// Runs the reduction end to end. Throws CapacityError above
// kMaxPricingEvents and NumericError if the price lands within 1e-6 of an
// integer boundary even after the tighter re-solve.
PricingCount count_models_via_pricing_detailed(const TwoSatFormula& f, double c0 = 1.0);
std::uint64_t count_models_via_pricing(const TwoSatFormula& f, double c0 = 1.0);

// Share quantity used by the reduction: ceil(C0 (2^n - 1)).
Quantity reduction_share_quantity(int n, double c0);

MarketState reduction_market(const TwoSatFormula& f, double c0);

}  // namespace clum
