#include "clum/approx_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "clum/errors.hpp"
#include "clum/numeric.hpp"

namespace clum {

ExplicitOracle::ExplicitOracle(std::span<const Quantity> q) : q_(q) {
  if (q.empty()) throw DomainError("empty share vector");
  stats_.q_max = *std::max_element(q.begin(), q.end());
  stats_.s_qmax = static_cast<std::uint64_t>(std::count(q.begin(), q.end(), stats_.q_max));
}

Quantity ExplicitOracle::payout(OutcomeIndex index) const {
  if (index >= q_.size()) throw DomainError("outcome index out of range");
  return q_[index];
}

void ApproxConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon <= 0.5)) throw DomainError("epsilon must lie in (0, 1/2]");
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
}

int max_search_rounds(double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  int rounds = 0;
  while (std::ldexp(1.0, -rounds) > epsilon) ++rounds;
  return rounds;
}

namespace {

double log_range(double c0, const MaxStats& stats) {
  return std::max(0.0, std::log(c0 + static_cast<double>(stats.q_max)));
}

void check_stats(const MaxStats& stats, std::uint64_t n) {
  if (stats.q_max < 0 || stats.s_qmax < 1 || stats.s_qmax > n) {
    throw DomainError("oracle returned inconsistent max statistics");
  }
}

}  // namespace

std::uint64_t u2_sample_size(double c0, const MaxStats& stats, const ApproxConfig& cfg) {
  const double l = log_range(c0, stats);
  if (l == 0.0) return 1;
  const int rounds = max_search_rounds(cfg.epsilon);
  const double m = std::ceil(rounds * l * l * std::log(2.0 / cfg.delta) /
                             (2.0 * cfg.epsilon * cfg.epsilon));
  return static_cast<std::uint64_t>(m);
}

double u1(double c, const MaxStats& stats, std::uint64_t outcome_count) {
  const double q_max = static_cast<double>(stats.q_max);
  if (!(c > q_max)) throw SingularityError("U1 needs c > q_max");
  return static_cast<double>(stats.s_qmax) / static_cast<double>(outcome_count) *
         std::log(c - q_max);
}

U2Estimate estimate_u2(double c_hat, double c0, const MaxStats& stats,
                       const OutcomeOracle& oracle, const ApproxConfig& cfg, Rng& rng) {
  cfg.validate();
  const std::uint64_t n = oracle.outcome_count();
  check_stats(stats, n);
  U2Estimate out;
  if (stats.s_qmax == n) return out;
  if (log_range(c0, stats) == 0.0) {
    out.samples = 1;
    return out;
  }
  if (!(c_hat >= static_cast<double>(stats.q_max))) {
    throw DomainError("U2 estimate needs c_hat >= q_max");
  }

  const std::uint64_t m = u2_sample_size(c0, stats, cfg);
  const double below_max = static_cast<double>(n - stats.s_qmax);
  const double budget = std::ceil(64.0 * static_cast<double>(m) * static_cast<double>(n) / below_max);

  CompensatedSum sum;
  while (out.samples < m) {
    if (static_cast<double>(out.draws) >= budget) {
      throw SamplingError("rejection sampling exceeded its budget of " +
                          std::to_string(static_cast<std::uint64_t>(budget)) + " draws");
    }
    const OutcomeSample s = oracle.sample_outcome(rng);
    ++out.draws;
    if (s.payout > stats.q_max) throw DomainError("sampled payout exceeds q_max");
    if (s.payout == stats.q_max) continue;
    sum += std::log(c_hat - static_cast<double>(s.payout));
    ++out.samples;
  }
  out.value = below_max / static_cast<double>(n) * (sum.value() / static_cast<double>(m));
  return out;
}

CostEstimate approximate_cost(double c0, const OutcomeOracle& oracle,
                              const ApproxConfig& cfg, Rng& rng) {
  cfg.validate();
  if (!(c0 > 0.0) || !std::isfinite(c0)) throw DomainError("C0 must be positive");
  const std::uint64_t n = oracle.outcome_count();
  const MaxStats stats = oracle.max_stats();
  check_stats(stats, n);

  CostEstimate est;
  est.epsilon = cfg.epsilon;
  est.delta = cfg.delta;
  est.stats = stats;
  const double q_max = static_cast<double>(stats.q_max);
  double a = std::max(q_max, c0);
  double b = c0 + q_max;
  CLUM_CHECK(b / a <= 2.0);

  if (stats.s_qmax == n) {
    // Every outcome carries q_max: the invariant is solved by q_max + C0.
    est.c_hat = b;
    est.lower = a;
    est.upper = b;
    return est;
  }

  const int max_rounds = max_search_rounds(cfg.epsilon);
  est.samples_per_round = u2_sample_size(c0, stats, cfg);
  const double log_c0 = std::log(c0);
  const double stop_ratio = std::exp(cfg.epsilon);

  double c_hat = 0.5 * (a + b);
  while (b / a > stop_ratio) {
    CLUM_CHECK(est.iterations < max_rounds);
    c_hat = 0.5 * (a + b);
    const U2Estimate u2 = estimate_u2(c_hat, c0, stats, oracle, cfg, rng);
    const double u_hat = u1(c_hat, stats, n) + u2.value;
    est.total_draws += u2.draws;
    est.trace.push_back({a, b, c_hat, u_hat});
    ++est.iterations;
    if (u_hat > log_c0 + cfg.epsilon) {
      b = c_hat;
    } else if (u_hat <= log_c0 - cfg.epsilon) {
      a = c_hat;
    } else {
      est.terminated_early = true;
      break;
    }
  }
  if (!est.terminated_early) c_hat = 0.5 * (a + b);
  est.c_hat = c_hat;
  est.lower = a;
  est.upper = b;
  return est;
}

}  // namespace clum
