// Acceptance gate: one PASS/FAIL line per criterion, exit status 0 only if
// every criterion passes. Tolerances and budgets are pinned here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "clum/approx_solver.hpp"
#include "clum/exact_solver.hpp"
#include "clum/interval_tree.hpp"
#include "clum/two_sat.hpp"
#include "clum/wish.hpp"
#include "oracles.hpp"

using namespace clum;

namespace {

// Criterion 1
constexpr int kResidualLedgers = 1000;
constexpr double kResidualTol = 1e-10;
constexpr double kResidualBudgetSec = 10.0;
// Criteria 2, 3
constexpr int kCountingInstances = 500;
constexpr int kCountingMaxEvents = 12;
constexpr double kCountingBudgetSec = 60.0;
constexpr double kSubsidySlack = 1e-9;
// Criteria 4, 5
constexpr int kBandClasses = 20;
constexpr int kBandSeeds = 200;
constexpr double kBandBudgetSec = 300.0;
// Criteria 6, 7
constexpr int kFuzzSequences = 10000;
constexpr int kFuzzMaxPurchases = 128;
constexpr int kMinProbes = 10000;
constexpr double kFuzzBudgetSec = 120.0;
// Ops per purchase <= kOpsPerLog * log2(k + 1); fitted on the fuzz corpus.
constexpr double kOpsPerLog = 32.0;
// Criterion 8
constexpr int kWishSeeds = 100;
constexpr double kWishAlpha = 0.05;
constexpr double kWishDelta = 0.1;
constexpr double kWishFactor = 64.0;
// Criterion 9
constexpr int kPropertyCases = 100000;
constexpr double kNormalizationTol = 1e-9;

struct Verdict {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Long-double residual of the invariant at C = q_max + exp(log_offset). The
// top outcomes contribute log_offset directly, so an offset below the long
// double range does not turn into ln 0.
long double offset_residual(const std::vector<Quantity>& q, double c0, double log_offset) {
  const Quantity qmax = *std::max_element(q.begin(), q.end());
  const long double t = std::exp(static_cast<long double>(log_offset));
  long double s = 0.0L;
  for (Quantity v : q) {
    s += v == qmax ? static_cast<long double>(log_offset)
                   : std::log(t + static_cast<long double>(qmax - v));
  }
  return s / static_cast<long double>(q.size()) - std::log(static_cast<long double>(c0));
}

// ---------------------------------------------------------------- 1

std::vector<Quantity> random_ledger(std::mt19937_64& gen) {
  const std::uint64_t n = 1 + gen() % 4096;
  const Quantity cap = static_cast<Quantity>(std::pow(10.0, static_cast<double>(gen() % 7)));
  std::vector<Quantity> q(n, 0);
  switch (gen() % 4) {
    case 0:  // dense uniform
      for (auto& v : q) v = static_cast<Quantity>(gen() % (cap + 1));
      break;
    case 1:  // sparse spikes over a flat floor
      for (auto& v : q) v = cap / 10;
      for (int s = 0; s < 1 + static_cast<int>(gen() % 8); ++s) q[gen() % n] = cap;
      break;
    case 2: {  // interval and indicator purchases through the market
      auto state = MarketState::indexed(1.0, n);
      for (int p = 0; p < 1 + static_cast<int>(gen() % 30); ++p) {
        std::uint64_t lo = gen() % n, hi = gen() % n;
        if (lo > hi) std::swap(lo, hi);
        const Quantity qty = static_cast<Quantity>(gen() % (cap / 10 + 1));
        if (gen() % 3 == 0) state.buy(Indicator{lo}, qty); else state.buy(Interval{lo, hi}, qty);
      }
      q = materialize(state);
      break;
    }
    default:  // one outcome pulls far ahead
      for (auto& v : q) v = static_cast<Quantity>(gen() % 3);
      q[gen() % n] = cap;
  }
  return q;
}

Verdict criterion_residual() {
  std::mt19937_64 gen(101);
  Verdict v;
  double worst = 0.0;
  int bad = 0;
  const auto start = Clock::now();
  for (int i = 0; i < kResidualLedgers; ++i) {
    const auto q = random_ledger(gen);
    const double c0 = std::ldexp(1.0 + (gen() % 1000) / 1000.0, static_cast<int>(gen() % 14) - 4);
    const auto sol = solve_cost_exact(q, c0);
    const double r = static_cast<double>(std::fabs(offset_residual(q, c0, sol.level.log_offset)));
    worst = std::max(worst, r);
    const double qmax = static_cast<double>(max_payout(q));
    // The offset bound is checked on the solver's own variable: exp(ln C0)
    // can land an ulp either side of C0 on a flat ledger.
    const bool bracket = sol.level.log_offset <= std::log(c0) && sol.cost >= std::max(c0, qmax) &&
                         sol.cost <= qmax + c0;
    if (!(r <= kResidualTol) || !bracket) ++bad;
  }
  const double secs = seconds_since(start);
  v.pass = bad == 0 && secs < kResidualBudgetSec;
  v.detail = fmt("%d ledgers, worst |residual| %.3g (tol %.0e), %d violations, %.2fs (budget %.0fs)",
                 kResidualLedgers, worst, kResidualTol, bad, secs, kResidualBudgetSec);
  return v;
}

// ---------------------------------------------------------------- 2, 3

struct CountingStats {
  int instances = 0;
  int mismatches = 0;
  int subsidy_checked = 0;
  int subsidy_violations = 0;
  double worst_offset_ratio = 0.0;  // t / C0
  double secs = 0.0;
  std::string error;
};

CountingStats run_counting() {
  std::mt19937_64 gen(202);
  CountingStats st;
  const auto start = Clock::now();
  while (st.instances < kCountingInstances) {
    const int n = 2 + static_cast<int>(gen() % (kCountingMaxEvents - 1));
    const int max_k = std::min((1 << n) - 1, 4 * n);
    const int k = 1 + static_cast<int>(gen() % max_k);
    std::vector<std::pair<int, int>> raw;
    TwoSatFormula f;
    f.n = n;
    for (int i = 0; i < k; ++i) {
      const int a = 1 + static_cast<int>(gen() % n);
      int b = 1 + static_cast<int>(gen() % (n - 1));
      if (b >= a) ++b;
      const bool pa = gen() % 2, pb = gen() % 2;
      raw.push_back({pa ? a : -a, pb ? b : -b});
      f.clauses.push_back({{a, pa}, {b, pb}});
    }
    if (!two_sat_find_assignment(f)) continue;
    ++st.instances;
    const double c0 = (gen() % 4 == 0) ? 0.5 + (gen() % 8) / 2.0 : 1.0;
    const auto pc = count_models_via_pricing_detailed(f, c0);
    const auto brute = count_models_brute_force(f);
    if (pc.count != brute || brute != oracle::count_models(n, raw)) ++st.mismatches;

    // C - k q < C0 whenever some outcome falsifies a clause.
    if (brute < (std::uint64_t{1} << n)) {
      ++st.subsidy_checked;
      const double kq = static_cast<double>(k) * static_cast<double>(pc.share_quantity);
      const double lhs = (pc.cost.level.q_max - kq) + pc.cost.level.offset();
      st.worst_offset_ratio = std::max(st.worst_offset_ratio, lhs / c0);
      if (!(lhs < c0 + kSubsidySlack)) ++st.subsidy_violations;
    }
  }
  st.secs = seconds_since(start);
  return st;
}

// ---------------------------------------------------------------- 4, 5

struct BandClass {
  std::string name;
  std::uint64_t n;
  double c0;
  IntervalTree tree;
};

IntervalTree build_class(int id, std::uint64_t n, std::mt19937_64& gen) {
  IntervalTree tree(n);
  auto random_range = [&](std::uint64_t max_len) {
    const std::uint64_t len = 1 + gen() % std::min(max_len, n);
    const std::uint64_t lo = gen() % (n - len + 1);
    return std::pair{lo, lo + len - 1};
  };
  switch (id % 5) {
    case 0:  // a few wide purchases
      for (int p = 0; p < 4; ++p) {
        auto [lo, hi] = random_range(n);
        tree.purchase(lo, hi, 1);
      }
      break;
    case 1:  // many narrow purchases
      for (int p = 0; p < 60; ++p) {
        auto [lo, hi] = random_range(std::max<std::uint64_t>(1, n / 64));
        tree.purchase(lo, hi, 1);
      }
      break;
    case 2:  // nested bets toward the centre
      for (std::uint64_t p = 0; p < 4; ++p) tree.purchase(p * n / 10, n - 1 - p * n / 10, 1);
      break;
    case 3:  // single hot outcome
    {
      tree.purchase(0, n - 1, 1);
      const std::uint64_t hot = gen() % n;
      tree.purchase(hot, hot, 2);
      break;
    }
    default:  // mixed quantities
      for (int p = 0; p < 12; ++p) {
        auto [lo, hi] = random_range(n / 2 + 1);
        tree.purchase(lo, hi, 1 + static_cast<Quantity>(gen() % 2));
      }
  }
  return tree;
}

struct BandStats {
  bool pass = true;
  std::string detail;
  // Criterion 5 accounting.
  std::uint64_t runs = 0;
  std::uint64_t iteration_violations = 0;
  std::uint64_t ratio_violations = 0;
  std::uint64_t halving_violations = 0;
  std::string error;
};

BandStats run_band() {
  std::mt19937_64 gen(303);
  const std::uint64_t sizes[] = {1u << 8, 1u << 10, 1u << 12, 1u << 14, 1u << 16};
  const double subsidies[] = {0.5, 1.0, 2.0, 1.5};
  std::vector<BandClass> classes;
  for (int id = 0; id < kBandClasses; ++id) {
    const std::uint64_t n = sizes[(id / 5 + id) % 5];
    const double c0 = subsidies[id % 4];
    classes.push_back({fmt("class%02d", id), n, c0, build_class(id, n, gen)});
  }

  const ApproxConfig configs[] = {{0.05, 0.05}, {0.02, 0.1}};
  BandStats out;
  double worst_rate = 1.0;
  std::string worst_name;
  const auto start = Clock::now();
  for (const ApproxConfig& cfg : configs) {
    const int cap = max_search_rounds(cfg.epsilon);
    for (const BandClass& bc : classes) {
      const double exact = solve_cost_exact(bc.tree.histogram(), bc.c0).cost;
      const IntervalOracle oracle(bc.tree);
      int good = 0;
      for (int seed = 0; seed < kBandSeeds; ++seed) {
        Rng rng(static_cast<std::uint64_t>(seed), 0x5eed);
        const CostEstimate est = approximate_cost(bc.c0, oracle, cfg, rng);
        ++out.runs;
        if (est.iterations > cap) ++out.iteration_violations;
        const double a1 = std::max(bc.c0, static_cast<double>(est.stats.q_max));
        const double b1 = bc.c0 + static_cast<double>(est.stats.q_max);
        if (!(b1 / a1 <= 2.0)) ++out.ratio_violations;
        if (!est.trace.empty() &&
            (est.trace.front().lower != a1 || est.trace.front().upper != b1)) {
          ++out.ratio_violations;
        }
        for (std::size_t t = 0; t + 1 < est.trace.size(); ++t) {
          const double w = est.trace[t].upper - est.trace[t].lower;
          const double w2 = est.trace[t + 1].upper - est.trace[t + 1].lower;
          if (w2 != w / 2) ++out.halving_violations;
        }
        const double band = 1.0 + 2.0 * cfg.epsilon;
        good += est.c_hat <= exact * band && exact <= est.c_hat * band;
      }
      const double rate = static_cast<double>(good) / kBandSeeds;
      if (rate < 1.0 - cfg.delta) out.pass = false;
      if (rate < worst_rate) {
        worst_rate = rate;
        worst_name = fmt("%s N=%llu eps=%.2f", bc.name.c_str(),
                         static_cast<unsigned long long>(bc.n), cfg.epsilon);
      }
    }
  }
  const double secs = seconds_since(start);
  if (secs >= kBandBudgetSec) out.pass = false;
  out.detail = fmt("%d classes x %d seeds x 2 configs, worst in-band rate %.3f (%s), %.1fs (budget %.0fs)",
                   kBandClasses, kBandSeeds, worst_rate, worst_name.c_str(), secs, kBandBudgetSec);
  return out;
}

// ---------------------------------------------------------------- 6, 7

struct FuzzStats {
  int mismatches = 0;
  std::uint64_t probes = 0;
  std::uint64_t purchases = 0;
  int endpoint_violations = 0;
  int height_violations = 0;
  double worst_ops_ratio = 0.0;
  double long_run_ops_ratio = 0.0;
  double secs = 0.0;
  std::string error;
};

// Adds one purchase to both structures, returns ops used by the tree.
std::uint64_t fuzz_purchase(IntervalTree& tree, oracle::Mirror& mirror, std::uint64_t lo,
                            std::uint64_t hi, Quantity v) {
  const std::uint64_t before = tree.op_counter().total();
  tree.purchase(lo, hi, v);
  mirror.add(lo, hi, v);
  return tree.op_counter().total() - before;
}

FuzzStats run_fuzz() {
  std::mt19937_64 gen(404);
  FuzzStats st;
  const int probes_per_sequence = 2 + kMinProbes / kFuzzSequences * 2;
  const auto start = Clock::now();
  for (int s = 0; s < kFuzzSequences; ++s) {
    const std::uint64_t n = 1 + static_cast<std::uint64_t>(
                                    std::pow(1e9, std::uniform_real_distribution<double>(0, 1)(gen)));
    IntervalTree tree(n);
    oracle::Mirror mirror(n);
    const int count = 1 + static_cast<int>(gen() % kFuzzMaxPurchases);
    bool ok = true;
    for (int p = 0; p < count; ++p) {
      std::uint64_t lo = gen() % n, hi = gen() % n;
      if (lo > hi) std::swap(lo, hi);
      if (gen() % 8 == 0) hi = lo;
      const Quantity v = gen() % 16 == 0 ? 1000000 : static_cast<Quantity>(1 + gen() % 5);
      const std::uint64_t ops = fuzz_purchase(tree, mirror, lo, hi, v);
      ++st.purchases;
      const double k = static_cast<double>(tree.endpoint_count());
      st.worst_ops_ratio = std::max(st.worst_ops_ratio, ops / std::log2(k + 1));
      if (tree.height() > IntervalTree::height_bound(tree.endpoint_count())) ++st.height_violations;
      const auto [mv, mc] = mirror.max();
      ok = ok && tree.query_max() == MaxStats{mv, mc};
      for (std::uint64_t probe : {lo, hi, lo == 0 ? lo : lo - 1, hi + 1 < n ? hi + 1 : hi}) {
        ok = ok && tree.value_at(probe) == mirror.at(probe);
        ++st.probes;
      }
    }
    for (int p = 0; p < probes_per_sequence; ++p) {
      const std::uint64_t i = gen() % n;
      ok = ok && tree.value_at(i) == mirror.at(i);
      ++st.probes;
    }
    if (tree.endpoint_count() > 2 * tree.purchase_count()) ++st.endpoint_violations;
    if (s % 500 == 0) tree.check_invariants();
    st.mismatches += ok ? 0 : 1;
  }

  // One long sequence: the fitted constant must still hold at larger k.
  {
    const std::uint64_t n = 1000000000ULL;
    IntervalTree tree(n);
    oracle::Mirror mirror(n);
    for (int p = 0; p < 4096; ++p) {
      std::uint64_t lo = gen() % n, hi = gen() % n;
      if (lo > hi) std::swap(lo, hi);
      const std::uint64_t ops = fuzz_purchase(tree, mirror, lo, hi, 1);
      const double k = static_cast<double>(tree.endpoint_count());
      st.long_run_ops_ratio = std::max(st.long_run_ops_ratio, ops / std::log2(k + 1));
    }
    const auto [mv, mc] = mirror.max();
    if (!(tree.query_max() == MaxStats{mv, mc})) ++st.mismatches;
    if (tree.endpoint_count() > 2 * tree.purchase_count()) ++st.endpoint_violations;
    tree.check_invariants();
  }
  st.secs = seconds_since(start);
  return st;
}

// ---------------------------------------------------------------- 8

Verdict criterion_wish() {
  std::mt19937_64 gen(505);
  Verdict v;
  std::string parts;
  for (int n = 8; n <= 10; ++n) {
    // Sparse unit clause purchases keep every weight ratio inside double range.
    auto state = MarketState::boolean(1.0 + gen() % 3, n);
    for (int p = 0; p < n / 2; ++p) {
      const int a = 1 + static_cast<int>(gen() % n);
      int b = 1 + static_cast<int>(gen() % (n - 1));
      if (b >= a) ++b;
      state.buy(Clause2{{a, gen() % 2 == 0}, {b, gen() % 2 == 0}}, 1);
    }
    const Clause2 s{{1, gen() % 2 == 0}, {2 + static_cast<int>(gen() % (n - 1)), gen() % 2 == 0}};
    const auto q = materialize(state);
    const double truth = security_price(q, solve_cost_exact(q, state.c0()).level, s);

    WishConfig cfg;
    cfg.alpha = kWishAlpha;
    cfg.delta = kWishDelta;
    int good = 0;
    double worst = 1.0;
    for (int seed = 0; seed < kWishSeeds; ++seed) {
      const double est = wish_price(state, s, cfg, static_cast<std::uint64_t>(seed)).price;
      const double factor = est > 0 ? std::max(est / truth, truth / est) : INFINITY;
      worst = std::max(worst, factor);
      good += factor <= kWishFactor;
    }
    const bool rate_ok = good >= static_cast<int>(std::ceil((1.0 - kWishDelta) * kWishSeeds));

    // Deterministic level-bound check on the sorted weights of each side.
    const auto w = clum_weights(state);
    std::vector<double> inside, outside;
    for (OutcomeIndex j = 0; j < w.size(); ++j) (s.holds(j) ? inside : outside).push_back(w[j]);
    bool bound_ok = true;
    double worst_inside = 0.0;
    for (int c = 2; c <= 5; ++c) {
      const auto ob = outside_bounds(level_weights(outside, n), c);
      bound_ok = bound_ok && ob.upper <= std::ldexp(ob.lower, c + 1) * (1 + 1e-12);
      const auto ib = inside_bounds(level_weights(inside, n), c);
      worst_inside = std::max(worst_inside, ib.upper / std::ldexp(ib.lower, c + 1));
    }
    v.pass = v.pass && rate_ok && bound_ok;
    parts += fmt("n=%d: %d/%d within x%.0f (worst x%.2f), U'<=2^(c+1)L' %s, inside U/(2^(c+1)L) max %.2f; ",
                 n, good, kWishSeeds, kWishFactor, worst, bound_ok ? "ok" : "VIOLATED", worst_inside);
  }
  v.detail = parts + fmt("alpha override %.3g, delta %.2g", kWishAlpha, kWishDelta);
  return v;
}

// ---------------------------------------------------------------- 9

Verdict criterion_properties() {
  std::mt19937_64 gen(606);
  int norm_bad = 0, mono_bad = 0;
  double worst_norm = 0.0;
  for (int i = 0; i < kPropertyCases; ++i) {
    std::vector<Quantity> q(2 + gen() % 63);
    const Quantity cap = static_cast<Quantity>(1 + gen() % 1000);
    for (auto& x : q) x = static_cast<Quantity>(gen() % (cap + 1));
    const auto qmax = static_cast<double>(max_payout(q));
    // Any valid C: strictly above q_max + 1 so the bumped vector stays valid.
    const double c = qmax + 1.0 + std::ldexp(1.0 + (gen() % 1000) / 100.0, static_cast<int>(gen() % 8) - 4);
    const auto p = outcome_prices(q, CostLevel::from_cost(c, qmax));
    double total = 0.0;
    for (double x : p) total += x;
    worst_norm = std::max(worst_norm, std::fabs(total - 1.0));
    if (std::fabs(total - 1.0) > kNormalizationTol) ++norm_bad;

    const std::size_t j = gen() % q.size();
    auto q2 = q;
    ++q2[j];
    const auto p2 = outcome_prices(q2, CostLevel::from_cost(c, static_cast<double>(max_payout(q2))));
    bool ok = p2[j] > p[j];
    for (std::size_t k = 0; k < q.size(); ++k) {
      if (k != j) ok = ok && p2[k] < p[k];
    }
    if (!ok) ++mono_bad;
  }
  Verdict v;
  v.pass = norm_bad == 0 && mono_bad == 0;
  v.detail = fmt("%d cases, worst |sum-1| %.3g (tol %.0e), %d normalization and %d monotonicity failures",
                 kPropertyCases, worst_norm, kNormalizationTol, norm_bad, mono_bad);
  return v;
}

// Runs a shared driver, recording an exception instead of aborting the gate.
template <class Stats>
Stats capture(Stats (*driver)()) {
  try {
    return driver();
  } catch (const std::exception& e) {
    Stats st;
    st.error = e.what();
    return st;
  }
}

std::string with_error(const std::string& detail, const std::string& error) {
  return error.empty() ? detail : "threw: " + error;
}

}  // namespace

int main() {
  int failures = 0;
  auto guarded = [](const std::function<Verdict()>& body) {
    try {
      return body();
    } catch (const std::exception& e) {
      return Verdict{false, std::string("threw: ") + e.what()};
    }
  };
  auto report = [&](int id, const char* name, const Verdict& v) {
    std::printf("%s criterion %d (%s): %s\n", v.pass ? "PASS" : "FAIL", id, name, v.detail.c_str());
    std::fflush(stdout);
    failures += v.pass ? 0 : 1;
  };

  report(1, "invariant residual", guarded(criterion_residual));

  const CountingStats cs = capture(run_counting);
  report(2, "model counting via pricing",
         {cs.error.empty() && cs.mismatches == 0 && cs.secs < kCountingBudgetSec,
          with_error(fmt("%d satisfiable instances (n<=%d), %d mismatches, %.2fs (budget %.0fs)", cs.instances,
              kCountingMaxEvents, cs.mismatches, cs.secs, kCountingBudgetSec), cs.error)});
  report(3, "subsidy bound after clause purchases",
         {cs.error.empty() && cs.subsidy_violations == 0 && cs.subsidy_checked > 0,
          with_error(fmt("%d instances checked, %d violations, max (C - kq)/C0 = %.6f", cs.subsidy_checked,
              cs.subsidy_violations, cs.worst_offset_ratio), cs.error)});

  const BandStats bs = capture(run_band);
  report(4, "approximation band", {bs.error.empty() && bs.pass, with_error(bs.detail, bs.error)});
  report(5, "bisection round cap and initial ratio",
         {bs.error.empty() && bs.runs > 0 && bs.iteration_violations == 0 && bs.ratio_violations == 0 && bs.halving_violations == 0,
          with_error(fmt("%llu runs, %llu round-cap, %llu ratio, %llu halving violations",
              static_cast<unsigned long long>(bs.runs),
              static_cast<unsigned long long>(bs.iteration_violations),
              static_cast<unsigned long long>(bs.ratio_violations),
              static_cast<unsigned long long>(bs.halving_violations)), bs.error)});

  const FuzzStats fs = capture(run_fuzz);
  report(6, "interval tree oracle equivalence",
         {fs.error.empty() && fs.mismatches == 0 && fs.height_violations == 0 && fs.probes >= kMinProbes &&
              fs.secs < kFuzzBudgetSec,
          with_error(fmt("%d sequences, %llu purchases, %llu value_at probes, %d mismatches, %d height "
              "violations, %.1fs (budget %.0fs)",
              kFuzzSequences + 1, static_cast<unsigned long long>(fs.purchases),
              static_cast<unsigned long long>(fs.probes), fs.mismatches, fs.height_violations, fs.secs,
              kFuzzBudgetSec), fs.error)});
  report(7, "interval purchase complexity",
         {fs.error.empty() && fs.purchases > 0 && fs.endpoint_violations == 0 && fs.worst_ops_ratio <= kOpsPerLog &&
              fs.long_run_ops_ratio <= kOpsPerLog,
          with_error(fmt("%d sequences with k > 2 x purchases; max ops/log2(k+1) = %.2f (fuzz), %.2f (4096-purchase "
              "run), pinned c = %.1f",
              fs.endpoint_violations, fs.worst_ops_ratio, fs.long_run_ops_ratio, kOpsPerLog), fs.error)});

  report(8, "hash-based clause pricing", guarded(criterion_wish));
  report(9, "normalization and monotonicity", guarded(criterion_properties));

  std::printf("%s: %d of 9 criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
