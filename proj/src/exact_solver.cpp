#include "clum/exact_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "clum/errors.hpp"
#include "clum/numeric.hpp"

namespace clum {

void SolveConfig::validate() const {
  if (!(abs_tol > 0.0)) throw DomainError("abs_tol must be positive");
  if (max_iter < 1) throw DomainError("max_iter must be at least 1");
}

PayoutHistogram PayoutHistogram::from_values(std::span<const Quantity> q) {
  std::vector<Quantity> sorted(q.begin(), q.end());
  std::sort(sorted.begin(), sorted.end());
  PayoutHistogram h;
  for (Quantity v : sorted) {
    if (v < 0) throw DomainError("payouts must be nonnegative");
    if (!h.bins_.empty() && h.bins_.back().value == v) {
      ++h.bins_.back().count;
    } else {
      h.bins_.push_back({v, 1});
    }
  }
  h.total_ = sorted.size();
  return h;
}

PayoutHistogram PayoutHistogram::from_bins(std::vector<Bin> bins) {
  std::sort(bins.begin(), bins.end(),
            [](const Bin& a, const Bin& b) { return a.value < b.value; });
  PayoutHistogram h;
  for (const Bin& b : bins) {
    if (b.value < 0) throw DomainError("payouts must be nonnegative");
    if (b.count == 0) continue;
    if (!h.bins_.empty() && h.bins_.back().value == b.value) {
      h.bins_.back().count += b.count;
    } else {
      h.bins_.push_back(b);
    }
    h.total_ += b.count;
  }
  return h;
}

Quantity PayoutHistogram::q_max() const {
  if (bins_.empty()) throw DomainError("empty histogram");
  return bins_.back().value;
}

std::uint64_t PayoutHistogram::count_at_max() const {
  if (bins_.empty()) throw DomainError("empty histogram");
  return bins_.back().count;
}

namespace {

// A histogram bin seen from the top payout: every outcome in it sits `gap`
// below q_max.
struct GapBin {
  double weight;  // count / N
  double gap;
};

class Invariant {
 public:
  Invariant(const PayoutHistogram& hist, double c0) : log_c0_(std::log(c0)) {
    const auto n = static_cast<double>(hist.outcome_count());
    const double q_max = static_cast<double>(hist.q_max());
    top_weight_ = static_cast<double>(hist.count_at_max()) / n;
    for (const auto& b : hist.bins()) {
      if (b.value == hist.q_max()) continue;
      bins_.push_back({static_cast<double>(b.count) / n, q_max - static_cast<double>(b.value)});
    }
  }

  double value(double u) const {
    CompensatedSum sum;
    sum += top_weight_ * u;
    for (const GapBin& b : bins_) sum += b.weight * log_shifted(u, b.gap);
    sum += -log_c0_;
    return sum.value();
  }

  double slope(double u) const {
    CompensatedSum sum;
    sum += top_weight_;
    for (const GapBin& b : bins_) sum += b.weight * shifted_fraction(u, b.gap);
    return sum.value();
  }

  double top_weight() const { return top_weight_; }
  double log_c0() const { return log_c0_; }
  const std::vector<GapBin>& bins() const { return bins_; }

 private:
  double log_c0_;
  double top_weight_ = 0.0;
  std::vector<GapBin> bins_;
};

}  // namespace

double invariant_residual(const PayoutHistogram& hist, double c0, double log_offset) {
  return Invariant(hist, c0).value(log_offset);
}

CostSolution solve_cost_exact(const PayoutHistogram& hist, double c0,
                              const SolveConfig& cfg) {
  cfg.validate();
  if (!(c0 > 0.0) || !std::isfinite(c0)) throw DomainError("C0 must be positive");
  if (hist.outcome_count() == 0) throw DomainError("empty share vector");

  const double q_max = static_cast<double>(hist.q_max());
  const double log_c0 = std::log(c0);
  CostSolution out;
  out.level.q_max = q_max;

  // Uniform payouts: the invariant forces C = q_max + C0 exactly.
  if (hist.count_at_max() == hist.outcome_count()) {
    out.level.log_offset = log_c0;
    out.cost = q_max + c0;
    out.residual = 0.0;
    return out;
  }

  const Invariant f(hist, c0);

  // Upper end of the offset bracket: t = C0 (every log term >= ln C0).
  double hi = log_c0;
  // Lower end: the tighter of C >= C0 and the bound obtained by replacing
  // every non-top log term with its value at t = C0.
  double penalty = 0.0;
  {
    CompensatedSum s;
    for (const GapBin& b : f.bins()) s += b.weight * std::log1p(b.gap / c0);
    penalty = s.value();
  }
  double lo = log_c0 - penalty / f.top_weight();
  if (q_max < c0) lo = std::max(lo, std::log(c0 - q_max));
  if (!(lo <= hi)) lo = hi;

  double u = hi;
  double fu = f.value(u);
  int it = 0;
  while (std::fabs(fu) > cfg.abs_tol) {
    if (it >= cfg.max_iter) {
      throw ConvergenceError("exact solver did not converge within " +
                                 std::to_string(cfg.max_iter) + " iterations",
                             lo, hi);
    }
    ++it;
    if (fu > 0.0) {
      hi = u;
    } else {
      lo = u;
    }
    const double slope = f.slope(u);
    double next = u - fu / slope;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    if (next == u || next == lo || next == hi) {
      // Bracket has collapsed to adjacent doubles.
      throw ConvergenceError("exact solver bracket collapsed above tolerance", lo, hi);
    }
    u = next;
    fu = f.value(u);
  }

  // Polish: inside the tolerance Newton is quadratic, so one more step
  // reaches working precision for the price of one evaluation.
  if (fu != 0.0) {
    const double polished = u - fu / f.slope(u);
    if (polished >= lo && polished <= hi && std::isfinite(polished)) {
      const double fp = f.value(polished);
      if (std::fabs(fp) < std::fabs(fu)) {
        u = polished;
        fu = fp;
      }
    }
  }

  // Post-hoc checks on the returned level.
  CLUM_CHECK(u <= log_c0);
  CLUM_CHECK(q_max >= c0 || std::exp(u) >= (c0 - q_max) * (1.0 - 1e-12));

  out.level.log_offset = u;
  out.cost = out.level.cost();
  out.residual = fu;
  out.iterations = it;
  return out;
}

CostSolution solve_cost_exact(std::span<const Quantity> q, double c0,
                              const SolveConfig& cfg) {
  return solve_cost_exact(PayoutHistogram::from_values(q), c0, cfg);
}

double cost_difference(const CostSolution& after, const CostSolution& before) {
  return (after.level.q_max - before.level.q_max) +
         (after.level.offset() - before.level.offset());
}

double trade_cost(const MarketState& state, const Security& security,
                  Quantity quantity, const SolveConfig& cfg,
                  std::uint64_t max_outcomes) {
  state.validate(security);
  if (quantity < 0) throw DomainError("trade quantity must be nonnegative");
  if (quantity == 0) return 0.0;
  MarketState next = state;
  next.buy(security, quantity);
  const auto before = solve_cost_exact(materialize(state, max_outcomes), state.c0(), cfg);
  const auto after = solve_cost_exact(materialize(next, max_outcomes), state.c0(), cfg);
  return cost_difference(after, before);
}

}  // namespace clum
