#include <cmath>
#include <functional>
#include <string>

#include <nlohmann/json.hpp>

#include "clum/approx_solver.hpp"
#include "clum/cli.hpp"
#include "clum/errors.hpp"
#include "clum/exact_solver.hpp"
#include "clum/interval_tree.hpp"
#include "clum/two_sat.hpp"

namespace clum::cli {

using nlohmann::json;

namespace {

json check(const std::string& name, const std::function<bool(json&)>& body) {
  json detail = json::object();
  bool pass = false;
  try {
    pass = body(detail);
  } catch (const std::exception& e) {
    detail["exception"] = e.what();
  }
  return {{"name", name}, {"pass", pass}, {"detail", detail}};
}

}  // namespace

json run_selftest() {
  json checks = json::array();

  checks.push_back(check("two-outcome cost is the golden ratio", [](json& d) {
    const std::vector<Quantity> q{1, 0};
    const auto sol = solve_cost_exact(q, 1.0);
    d["C"] = sol.cost;
    return std::abs(sol.cost - (1.0 + std::sqrt(5.0)) / 2.0) < 1e-12;
  }));

  checks.push_back(check("prices sum to one", [](json& d) {
    const std::vector<Quantity> q{5, 0, 3, 3, 9, 1, 0, 2};
    const auto sol = solve_cost_exact(q, 2.0);
    double total = 0.0;
    for (double p : outcome_prices(q, sol.level)) total += p;
    d["sum"] = total;
    return std::abs(total - 1.0) < 1e-12;
  }));

  checks.push_back(check("2-SAT counts agree across routes", [](json& d) {
    TwoSatFormula f;
    f.n = 4;
    f.clauses = {{{1, true}, {2, true}}, {{2, false}, {3, true}}, {{3, false}, {4, false}}};
    const auto brute = count_models_brute_force(f);
    const auto priced = count_models_via_pricing(f);
    d["brute"] = brute;
    d["pricing"] = priced;
    return brute == priced;
  }));

  checks.push_back(check("interval tree max and audit", [](json& d) {
    IntervalTree tree(10);
    tree.purchase(0, 4, 1);
    tree.purchase(2, 6, 2);
    tree.check_invariants();
    const MaxStats m = tree.query_max();
    d["q_max"] = m.q_max;
    d["s_qmax"] = m.s_qmax;
    return m.q_max == 3 && m.s_qmax == 3;
  }));

  checks.push_back(check("approximate cost within band", [](json& d) {
    IntervalTree tree(1000);
    tree.purchase(100, 400, 2);
    tree.purchase(300, 900, 1);
    const PayoutHistogram hist = tree.histogram();
    const double exact = solve_cost_exact(hist, 1.5).cost;
    ApproxConfig cfg;
    cfg.epsilon = 0.1;
    cfg.delta = 0.05;
    Rng rng(7);
    const CostEstimate est = approximate_cost(1.5, IntervalOracle(tree), cfg, rng);
    d["exact"] = exact;
    d["c_hat"] = est.c_hat;
    return est.c_hat <= est.band() * exact && exact <= est.band() * est.c_hat;
  }));

  return checks;
}

}  // namespace clum::cli
