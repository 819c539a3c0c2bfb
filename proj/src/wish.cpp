#include "clum/wish.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "clum/errors.hpp"
#include "clum/exact_solver.hpp"

namespace clum {

bool ParityHash::satisfied_by(OutcomeIndex outcome) const noexcept {
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if ((std::popcount(rows[r] & outcome) & 1) != rhs[r]) return false;
  }
  return true;
}

ParityHash ParityHash::sample(int n, int constraints, Rng& rng) {
  if (n < 0 || n > 62 || constraints < 0 || constraints > n) {
    throw DomainError("parity hash needs 0 <= constraints <= n <= 62");
  }
  ParityHash h;
  h.n = n;
  const std::uint64_t mask = n == 0 ? 0 : (~std::uint64_t{0} >> (64 - n));
  h.rows.reserve(constraints);
  h.rhs.reserve(constraints);
  for (int r = 0; r < constraints; ++r) {
    h.rows.push_back(rng() & mask);
    h.rhs.push_back(rng.bit() ? 1 : 0);
  }
  return h;
}

void WishConfig::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
  if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
  if (c < 2) throw DomainError("c must be at least 2");
  if (k < 1) throw DomainError("k must be at least 1");
}

int WishConfig::rounds(int n) const {
  validate();
  if (n < 1) return 1;
  const double t = std::ceil(std::log(static_cast<double>(n) / delta) / alpha);
  return std::max(1, static_cast<int>(t));
}

namespace {

std::vector<OutcomeIndex> sorted_side(const std::vector<double>& w,
                                      const std::vector<bool>& inside, bool want_inside) {
  std::vector<OutcomeIndex> idx;
  for (OutcomeIndex j = 0; j < w.size(); ++j) {
    if (inside[j] == want_inside) idx.push_back(j);
  }
  std::stable_sort(idx.begin(), idx.end(),
                   [&](OutcomeIndex a, OutcomeIndex b) { return w[a] > w[b]; });
  return idx;
}

int events_for(std::size_t outcomes) {
  if (outcomes == 0 || !std::has_single_bit(outcomes)) {
    throw DomainError("weight vector length must be a power of two");
  }
  const int n = std::countr_zero(outcomes);
  if (n > kMaxEnumerationEvents) {
    throw CapacityError("enumeration k-MAP oracle supports at most " +
                        std::to_string(kMaxEnumerationEvents) + " events");
  }
  return n;
}

std::vector<bool> clause_membership(std::size_t outcomes, const Clause2& s) {
  std::vector<bool> inside(outcomes);
  for (OutcomeIndex j = 0; j < outcomes; ++j) inside[j] = s.holds(j);
  return inside;
}

}  // namespace

EnumerationKMapOracle::EnumerationKMapOracle(std::span<const double> weights,
                                             std::vector<bool> inside)
    : n_(events_for(weights.size())), weights_(weights.begin(), weights.end()) {
  if (inside.size() != weights_.size()) throw DomainError("membership size mismatch");
  for (double w : weights_) {
    if (!(w > 0.0)) throw DomainError("weights must be positive");
  }
  inside_sorted_ = sorted_side(weights_, inside, true);
  outside_sorted_ = sorted_side(weights_, inside, false);
}

EnumerationKMapOracle::EnumerationKMapOracle(std::span<const double> weights,
                                             const Clause2& security)
    : EnumerationKMapOracle(weights, clause_membership(weights.size(), security)) {}

std::uint64_t EnumerationKMapOracle::side_size(Side side) const {
  return side == Side::kInside ? inside_sorted_.size() : outside_sorted_.size();
}

double EnumerationKMapOracle::kth_largest(const ParityHash& hash, Side side,
                                          std::size_t k) const {
  const auto& order = side == Side::kInside ? inside_sorted_ : outside_sorted_;
  std::size_t seen = 0;
  for (OutcomeIndex j : order) {
    if (!hash.satisfied_by(j)) continue;
    if (++seen == k) return weights_[j];
  }
  return 0.0;
}

double k_map_constrained(std::span<const double> weights, const ParityHash& hash,
                         const Clause2& security, Side side, std::size_t k) {
  events_for(weights.size());
  if (k < 1) throw DomainError("k must be at least 1");
  std::vector<double> feasible;
  for (OutcomeIndex j = 0; j < weights.size(); ++j) {
    if (security.holds(j) != (side == Side::kInside)) continue;
    if (hash.satisfied_by(j)) feasible.push_back(weights[j]);
  }
  if (feasible.size() < k) return 0.0;
  std::nth_element(feasible.begin(), feasible.begin() + static_cast<std::ptrdiff_t>(k - 1),
                   feasible.end(), std::greater<>());
  return feasible[k - 1];
}

double lower_median(std::vector<double> values) {
  if (values.empty()) throw DomainError("median of an empty set");
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>((values.size() - 1) / 2);
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

double aggregate_levels(std::span<const double> medians) {
  if (medians.empty()) return 0.0;
  double total = medians[0];
  for (std::size_t i = 0; i + 1 < medians.size(); ++i) {
    total += medians[i + 1] * std::ldexp(1.0, static_cast<int>(i));
  }
  return total;
}

WishResult wish_estimate(const KMapOracle& oracle, const WishConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  const int n = oracle.event_count();
  WishResult out;
  out.rounds = cfg.rounds(n);
  if (oracle.side_size(Side::kOutside) == 0 || oracle.side_size(Side::kInside) == 0) {
    out.degenerate = true;
    out.price = oracle.side_size(Side::kOutside) == 0 ? 1.0 : 0.0;
    return out;
  }

  const auto rounds = static_cast<std::size_t>(out.rounds);
  std::vector<double> inside(rounds);
  std::vector<double> outside(rounds);
  for (int i = 0; i <= n; ++i) {
    for (std::size_t t = 0; t < rounds; ++t) {
      Rng cell(seed, (static_cast<std::uint64_t>(i) << 32) | t);
      const ParityHash hash = ParityHash::sample(n, i, cell);
      ++out.hash_draws;
      inside[t] = oracle.kth_largest(hash, Side::kInside, cfg.k);
      outside[t] = oracle.kth_largest(hash, Side::kOutside, cfg.k);
      out.kmap_calls += 2;
    }
    out.inside_medians.push_back(lower_median(inside));
    out.outside_medians.push_back(lower_median(outside));
  }
  out.inside_total = aggregate_levels(out.inside_medians);
  out.outside_total = aggregate_levels(out.outside_medians);
  const double denom = out.inside_total + out.outside_total;
  if (!(denom > 0.0)) {
    throw NumericError("every k-MAP median is zero; increase n or lower k");
  }
  out.price = out.inside_total / denom;
  return out;
}

std::vector<double> clum_weights(const MarketState& state) {
  if (!state.n_events()) throw DomainError("clause pricing needs a Boolean market");
  if (*state.n_events() > kMaxEnumerationEvents) {
    throw CapacityError("weights are enumerated for at most " +
                        std::to_string(kMaxEnumerationEvents) + " events");
  }
  const std::vector<Quantity> q = materialize(state);
  const CostSolution sol = solve_cost_exact(q, state.c0());
  std::vector<double> w(q.size());
  for (std::size_t j = 0; j < q.size(); ++j) {
    w[j] = relative_weight(sol.level, q[j]);
    if (!(w[j] > 0.0)) throw NumericError("outcome weight underflows a double");
  }
  return w;
}

WishResult wish_price(const MarketState& state, const Clause2& security,
                      const WishConfig& cfg, std::uint64_t seed) {
  state.validate(security);
  const std::vector<double> w = clum_weights(state);
  const EnumerationKMapOracle oracle(w, security);
  return wish_estimate(oracle, cfg, seed);
}

std::vector<double> level_weights(std::vector<double> side_weights, int n) {
  if (n < 0 || n > 30) throw DomainError("level weights need 0 <= n <= 30");
  const std::size_t total = std::size_t{1} << n;
  if (side_weights.size() > total) throw DomainError("more weights than outcomes");
  std::sort(side_weights.begin(), side_weights.end(), std::greater<>());
  side_weights.resize(total, 0.0);
  std::vector<double> levels(n + 1);
  for (int i = 0; i <= n; ++i) levels[i] = side_weights[(std::size_t{1} << i) - 1];
  return levels;
}

LevelBounds outside_bounds(std::span<const double> levels, int c) {
  if (levels.empty()) throw DomainError("no levels");
  const int n = static_cast<int>(levels.size()) - 1;
  LevelBounds out{levels[0], levels[0]};
  for (int i = 0; i < n; ++i) {
    const double scale = std::ldexp(1.0, i);
    out.lower += levels[std::min(i + c + 1, n)] * scale;
    out.upper += levels[i] * scale;
  }
  return out;
}

LevelBounds inside_bounds(std::span<const double> levels, int c) {
  if (levels.empty()) throw DomainError("no levels");
  const int n = static_cast<int>(levels.size()) - 1;
  LevelBounds out{levels[0], levels[0]};
  for (int i = 0; i < n; ++i) {
    const double scale = std::ldexp(1.0, i);
    out.lower += levels[std::min(i + 2, n)] * scale;
    out.upper += levels[std::max(i - c, 0)] * scale;
  }
  return out;
}

}  // namespace clum
