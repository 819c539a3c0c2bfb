#include "clum/market.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "clum/errors.hpp"
#include "clum/numeric.hpp"

namespace clum {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_index(OutcomeIndex j, std::size_t n) {
  if (j >= n) {
    throw DomainError("outcome index " + std::to_string(j) + " out of range [0, " +
                      std::to_string(n) + ")");
  }
}

}  // namespace

bool pays_on(const Security& security, OutcomeIndex outcome) noexcept {
  return std::visit(
      Overloaded{
          [&](const Clause2& c) { return c.holds(outcome); },
          [&](const Indicator& s) { return s.outcome == outcome; },
          [&](const Interval& s) { return s.lo <= outcome && outcome <= s.hi; },
      },
      security);
}

MarketState::MarketState(double c0, std::optional<int> n_events,
                         std::uint64_t outcome_count)
    : c0_(c0), n_events_(n_events), outcome_count_(outcome_count) {
  if (!(c0 > 0.0) || !std::isfinite(c0)) {
    throw DomainError("C0 must be a positive finite number");
  }
  if (outcome_count == 0) throw DomainError("outcome count must be positive");
}

MarketState MarketState::boolean(double c0, int n_events) {
  if (n_events < 0 || n_events > 62) {
    throw DomainError("event count must lie in [0, 62]");
  }
  return MarketState(c0, n_events, std::uint64_t{1} << n_events);
}

MarketState MarketState::indexed(double c0, std::uint64_t outcome_count) {
  return MarketState(c0, std::nullopt, outcome_count);
}

void MarketState::validate(const Security& security) const {
  std::visit(
      Overloaded{
          [&](const Clause2& c) {
            if (!n_events_) {
              throw DomainError("clause securities need a Boolean market");
            }
            for (const Literal& lit : {c.first, c.second}) {
              if (lit.event < 1 || lit.event > *n_events_) {
                throw DomainError("literal event " + std::to_string(lit.event) +
                                  " outside 1.." + std::to_string(*n_events_));
              }
            }
            if (c.first.event == c.second.event) {
              throw DomainError("clause literals must name distinct events");
            }
          },
          [&](const Indicator& s) {
            if (s.outcome >= outcome_count_) {
              throw DomainError("indicator outcome out of range");
            }
          },
          [&](const Interval& s) {
            if (s.lo > s.hi || s.hi >= outcome_count_) {
              throw DomainError("interval must satisfy 0 <= lo <= hi < N");
            }
          },
      },
      security);
}

void MarketState::buy(const Security& security, Quantity quantity) {
  validate(security);
  if (quantity < 0) throw DomainError("quantities must be nonnegative");
  ledger_.push_back({security, quantity});
}

bool MarketState::interval_only() const noexcept {
  return std::all_of(ledger_.begin(), ledger_.end(), [](const LedgerEntry& e) {
    return std::holds_alternative<Interval>(e.security);
  });
}

Quantity payout_for_outcome(const MarketState& state, OutcomeIndex outcome) {
  check_index(outcome, state.outcome_count());
  Quantity total = 0;
  for (const LedgerEntry& entry : state.ledger()) {
    if (pays_on(entry.security, outcome)) total += entry.quantity;
  }
  return total;
}

std::vector<Quantity> materialize(const MarketState& state,
                                  std::uint64_t max_outcomes) {
  const std::uint64_t n = state.outcome_count();
  if (n > max_outcomes) {
    throw CapacityError("outcome space of size " + std::to_string(n) +
                        " exceeds the materialisation bound " +
                        std::to_string(max_outcomes) +
                        "; use the approximate solver");
  }
  std::vector<Quantity> q(n, 0);
  // Interval purchases go through a difference array.
  std::vector<Quantity> diff(n + 1, 0);
  for (const LedgerEntry& entry : state.ledger()) {
    std::visit(Overloaded{
                   [&](const Clause2& c) {
                     for (OutcomeIndex j = 0; j < n; ++j) {
                       if (c.holds(j)) q[j] += entry.quantity;
                     }
                   },
                   [&](const Indicator& s) { q[s.outcome] += entry.quantity; },
                   [&](const Interval& s) {
                     diff[s.lo] += entry.quantity;
                     diff[s.hi + 1] -= entry.quantity;
                   },
               },
               entry.security);
  }
  Quantity running = 0;
  for (OutcomeIndex j = 0; j < n; ++j) {
    running += diff[j];
    q[j] += running;
  }
  return q;
}

double CostLevel::offset() const noexcept { return std::exp(log_offset); }

CostLevel CostLevel::from_cost(double cost, double q_max) {
  if (!(cost > q_max)) {
    throw SingularityError("cost must exceed the largest payout (C > q_max)");
  }
  return CostLevel{q_max, std::log(cost - q_max)};
}

Quantity max_payout(std::span<const Quantity> q) {
  if (q.empty()) throw DomainError("empty share vector");
  return *std::max_element(q.begin(), q.end());
}

double relative_weight(const CostLevel& level, Quantity q_j) noexcept {
  return shifted_fraction(level.log_offset, level.q_max - static_cast<double>(q_j));
}

namespace {

void check_level(std::span<const Quantity> q, const CostLevel& level) {
  if (static_cast<double>(max_payout(q)) != level.q_max) {
    throw DomainError("cost level does not match the share vector's q_max");
  }
}

double total_weight(std::span<const Quantity> q, const CostLevel& level) {
  CompensatedSum sum;
  for (Quantity v : q) sum += relative_weight(level, v);
  return sum.value();
}

}  // namespace

double outcome_price(std::span<const Quantity> q, const CostLevel& level,
                     OutcomeIndex j) {
  check_index(j, q.size());
  check_level(q, level);
  return relative_weight(level, q[j]) / total_weight(q, level);
}

double outcome_price(std::span<const Quantity> q, double cost, OutcomeIndex j) {
  return outcome_price(q, CostLevel::from_cost(cost, static_cast<double>(max_payout(q))), j);
}

std::vector<double> outcome_prices(std::span<const Quantity> q, const CostLevel& level) {
  check_level(q, level);
  std::vector<double> p(q.size());
  CompensatedSum sum;
  for (std::size_t j = 0; j < q.size(); ++j) {
    p[j] = relative_weight(level, q[j]);
    sum += p[j];
  }
  const double total = sum.value();
  for (double& x : p) x /= total;
  return p;
}

double security_price(std::span<const Quantity> q, const CostLevel& level,
                      const Security& security) {
  check_level(q, level);
  CompensatedSum inside;
  CompensatedSum all;
  if (const auto* iv = std::get_if<Interval>(&security)) {
    if (iv->lo > iv->hi || iv->hi >= q.size()) throw DomainError("interval out of range");
    for (std::size_t j = 0; j < q.size(); ++j) {
      const double w = relative_weight(level, q[j]);
      all += w;
      if (j >= iv->lo && j <= iv->hi) inside += w;
    }
  } else {
    if (const auto* ind = std::get_if<Indicator>(&security)) check_index(ind->outcome, q.size());
    for (std::size_t j = 0; j < q.size(); ++j) {
      const double w = relative_weight(level, q[j]);
      all += w;
      if (pays_on(security, j)) inside += w;
    }
  }
  return inside.value() / all.value();
}

double security_price(std::span<const Quantity> q, double cost,
                      const Security& security) {
  return security_price(
      q, CostLevel::from_cost(cost, static_cast<double>(max_payout(q))), security);
}

ReciprocalPrice reciprocal_outcome_price(std::span<const Quantity> q,
                                         const CostLevel& level, OutcomeIndex j) {
  check_index(j, q.size());
  check_level(q, level);
  const double gap_j = level.q_max - static_cast<double>(q[j]);
  const double log_num = log_shifted(level.log_offset, gap_j);
  ReciprocalPrice out;
  CompensatedSum rest;
  for (Quantity v : q) {
    if (v == q[j]) {
      ++out.tied;
      continue;
    }
    const double gap = level.q_max - static_cast<double>(v);
    rest += std::exp(log_num - log_shifted(level.log_offset, gap));
  }
  out.remainder = rest.value();
  return out;
}

}  // namespace clum
