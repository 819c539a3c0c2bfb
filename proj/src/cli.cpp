#include "clum/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "clum/approx_solver.hpp"
#include "clum/errors.hpp"
#include "clum/exact_solver.hpp"
#include "clum/interval_tree.hpp"
#include "clum/ledger_io.hpp"
#include "clum/two_sat.hpp"
#include "clum/wish.hpp"

namespace clum::cli {

using nlohmann::json;

namespace {

struct Common {
  std::optional<std::uint64_t> seed;
  std::uint64_t resolved_seed() const {
    if (seed) return *seed;
    if (const char* env = std::getenv("CLUM_SEED")) {
      std::size_t used = 0;
      try {
        const unsigned long long v = std::stoull(env, &used);
        if (used == std::string(env).size()) return v;
      } catch (const std::exception&) {
      }
      throw DomainError("CLUM_SEED must be a nonnegative integer");
    }
    return 0;
  }
};

json report(const std::string& command, json inputs, json result, json diagnostics,
            std::uint64_t seed) {
  json r;
  r["command"] = command;
  r["inputs"] = std::move(inputs);
  r["result"] = std::move(result);
  r["diagnostics"] = std::move(diagnostics);
  r["seed"] = seed;
  return r;
}

json estimate_json(const CostEstimate& est) {
  return {{"c_hat", est.c_hat},
          {"lower", est.lower},
          {"upper", est.upper},
          {"band", est.band()}};
}

json estimate_diagnostics(const CostEstimate& est) {
  return {{"iterations", est.iterations},
          {"max_iterations", max_search_rounds(est.epsilon)},
          {"terminated_early", est.terminated_early},
          {"q_max", est.stats.q_max},
          {"s_qmax", est.stats.s_qmax},
          {"samples_per_round", est.samples_per_round},
          {"total_draws", est.total_draws}};
}

void emit_trace(const CostEstimate& est, std::ostream& out) {
  for (std::size_t t = 0; t < est.trace.size(); ++t) {
    const SearchRound& r = est.trace[t];
    out << json{{"round", t + 1},
                {"a", r.lower},
                {"b", r.upper},
                {"c_hat", r.midpoint},
                {"u_hat", r.u_hat}}
               .dump()
        << '\n';
  }
}

// Approximate cost through the cheapest available oracle.
CostEstimate approximate_state(const MarketState& state, const ApproxConfig& cfg, Rng& rng,
                               std::string& path) {
  if (state.interval_only()) {
    const IntervalTree tree = interval_tree_from_ledger(state);
    path = "interval-tree";
    return approximate_cost(state.c0(), IntervalOracle(tree), cfg, rng);
  }
  const std::vector<Quantity> q = materialize(state);
  path = "explicit";
  return approximate_cost(state.c0(), ExplicitOracle(q), cfg, rng);
}

json solution_json(const CostSolution& sol) {
  return {{"C", sol.cost},
          {"q_max", sol.level.q_max},
          {"log_offset", sol.level.log_offset},
          {"offset", sol.level.offset()}};
}

Clause2 parse_clause(const std::string& text) {
  std::istringstream in(text);
  long a = 0;
  long b = 0;
  std::string extra;
  if (!(in >> a >> b) || (in >> extra) || a == 0 || b == 0) {
    throw DomainError("--clause expects two nonzero DIMACS literals, e.g. \"1 -2\"");
  }
  return Clause2{Literal{static_cast<int>(std::labs(a)), a > 0},
                 Literal{static_cast<int>(std::labs(b)), b > 0}};
}

struct Quote {
  double cost = 0.0;
  json result;
  json diagnostics;
};

Quote quote_trade(const MarketState& state, const Security& security, Quantity qty,
                  const ApproxConfig& cfg, std::uint64_t seed) {
  state.validate(security);
  if (qty < 0) throw DomainError("--qty must be nonnegative");
  MarketState next = state;
  next.buy(security, qty);
  Quote q;
  if (next.interval_only()) {
    const Rng base(seed);
    Rng before_rng = base.substream(0);
    Rng after_rng = base.substream(1);
    std::string path;
    const CostEstimate before = approximate_state(state, cfg, before_rng, path);
    const CostEstimate after = approximate_state(next, cfg, after_rng, path);
    q.cost = after.c_hat - before.c_hat;
    q.result = {{"cost", q.cost}, {"c_before", before.c_hat}, {"c_after", after.c_hat}};
    q.diagnostics = {{"path", "interval-tree+approx"},
                     {"before", estimate_diagnostics(before)},
                     {"after", estimate_diagnostics(after)}};
    return q;
  }
  const SolveConfig scfg;
  const auto before = solve_cost_exact(materialize(state), state.c0(), scfg);
  const auto after = solve_cost_exact(materialize(next), state.c0(), scfg);
  q.cost = cost_difference(after, before);
  q.result = {{"cost", q.cost}, {"c_before", before.cost}, {"c_after", after.cost}};
  q.diagnostics = {{"path", "exact"},
                   {"residual_before", before.residual},
                   {"residual_after", after.residual}};
  return q;
}

IntervalMarket load_or_create_interval_market(const std::string& path,
                                              std::optional<std::uint64_t> n,
                                              std::optional<double> c0) {
  std::ifstream probe(path);
  if (probe.good()) {
    probe.close();
    return interval_market_from_json(read_json_file(path));
  }
  if (!n || !c0) {
    throw DomainError("state file " + path + " does not exist; pass --N and --c0 to create it");
  }
  if (!(*c0 > 0.0)) throw DomainError("--c0 must be positive");
  return IntervalMarket{*c0, IntervalTree(*n)};
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Constant log utility market maker pricing engine", "clum"};
  app.require_subcommand(1);

  Common common;
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", common.seed, "RNG seed (falls back to $CLUM_SEED, then 0)");
  };
  std::string ledger_path;
  double tol = 1e-12;
  ApproxConfig acfg;
  bool trace = false;

  auto* solve_exact = app.add_subcommand("solve-exact", "Solve the cost invariant exactly");
  solve_exact->add_option("--ledger", ledger_path, "Ledger JSON")->required();
  solve_exact->add_option("--tol", tol, "Residual tolerance on the invariant");

  auto* solve_approx = app.add_subcommand("solve-approx", "Approximate the cost function");
  solve_approx->add_option("--ledger", ledger_path, "Ledger JSON")->required();
  solve_approx->add_option("--epsilon", acfg.epsilon)->required();
  solve_approx->add_option("--delta", acfg.delta)->required();
  solve_approx->add_flag("--trace", trace, "Print the bisection rounds as JSON lines");
  add_seed(solve_approx);

  std::string security_text;
  Quantity qty = 1;
  std::string out_path;
  auto* quote = app.add_subcommand("quote", "Quote the cost of a purchase");
  auto* trade = app.add_subcommand("trade", "Quote a purchase and record it in the ledger");
  for (CLI::App* sub : {quote, trade}) {
    sub->add_option("--ledger", ledger_path, "Ledger JSON")->required();
    sub->add_option("--security", security_text, "Security JSON object")->required();
    sub->add_option("--qty", qty, "Quantity to buy");
    sub->add_option("--epsilon", acfg.epsilon, "Approximation error (interval path)");
    sub->add_option("--delta", acfg.delta, "Failure probability (interval path)");
    add_seed(sub);
  }
  trade->add_option("--out", out_path, "Where to write the updated ledger (default: in place)");

  std::string dimacs_path;
  std::string via = "pricing";
  double reduction_c0 = 1.0;
  auto* count = app.add_subcommand("count-models", "Count 2-SAT models");
  count->add_option("--dimacs", dimacs_path, "2-SAT DIMACS CNF")->required();
  count->add_option("--via", via, "pricing | brute")
      ->check(CLI::IsMember({"pricing", "brute"}));
  count->add_option("--c0", reduction_c0, "Initial subsidy of the reduction market");

  auto* interval = app.add_subcommand("interval", "Interval-betting market");
  interval->require_subcommand(1);
  std::string state_path = "interval_state.json";
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;
  std::optional<std::uint64_t> universe;
  std::optional<double> interval_c0;
  auto* ibuy = interval->add_subcommand("buy", "Buy an interval security");
  auto* imax = interval->add_subcommand("max", "Report q_max and s_qmax");
  auto* iquote = interval->add_subcommand("quote", "Approximate the cost of an interval purchase");
  for (CLI::App* sub : {ibuy, imax, iquote}) {
    sub->add_option("--state", state_path, "Interval market snapshot JSON");
  }
  for (CLI::App* sub : {ibuy, iquote}) {
    sub->add_option("--lo", lo)->required();
    sub->add_option("--hi", hi)->required();
    sub->add_option("--qty", qty);
  }
  ibuy->add_option("--N", universe, "Outcome count when creating a new state");
  ibuy->add_option("--c0", interval_c0, "Initial subsidy when creating a new state");
  iquote->add_option("--epsilon", acfg.epsilon)->required();
  iquote->add_option("--delta", acfg.delta)->required();
  add_seed(iquote);

  std::string clause_text;
  WishConfig wcfg;
  std::optional<double> alpha;
  auto* wish = app.add_subcommand("wish-price", "Hash-based constant-factor clause price");
  wish->add_option("--ledger", ledger_path, "Ledger JSON (Boolean market)")->required();
  wish->add_option("--clause", clause_text, "Two DIMACS literals, e.g. \"1 -2\"")->required();
  wish->add_option("--delta", wcfg.delta);
  wish->add_option("--alpha", alpha, "Override alpha (weakens the formal guarantee)");
  wish->add_option("--k", wcfg.k);
  wish->add_option("--c", wcfg.c);
  add_seed(wish);

  auto* selftest = app.add_subcommand("selftest", "Run the embedded invariant suite");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    std::ostringstream help;
    const int code = app.exit(e, help, help);
    (code == 0 ? out : err) << help.str();
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    json rep;
    if (*solve_exact) {
      SolveConfig cfg;
      cfg.abs_tol = tol;
      const MarketState state = load_ledger(ledger_path);
      const auto sol = solve_cost_exact(materialize(state), state.c0(), cfg);
      rep = report("solve-exact", {{"ledger", ledger_path}, {"tol", tol}}, solution_json(sol),
                   {{"residual", sol.residual}, {"iterations", sol.iterations}}, 0);
    } else if (*solve_approx) {
      acfg.validate();
      const std::uint64_t seed = common.resolved_seed();
      const MarketState state = load_ledger(ledger_path);
      Rng rng(seed);
      std::string path;
      const CostEstimate est = approximate_state(state, acfg, rng, path);
      if (trace) emit_trace(est, out);
      json diag = estimate_diagnostics(est);
      diag["oracle"] = path;
      rep = report("solve-approx",
                   {{"ledger", ledger_path}, {"epsilon", acfg.epsilon}, {"delta", acfg.delta}},
                   estimate_json(est), diag, seed);
    } else if (*quote || *trade) {
      const std::uint64_t seed = common.resolved_seed();
      MarketState state = load_ledger(ledger_path);
      json sec_doc;
      try {
        sec_doc = json::parse(security_text);
      } catch (const json::parse_error& e) {
        throw DomainError(std::string("--security is not valid JSON: ") + e.what());
      }
      const Security security = security_from_json(sec_doc);
      Quote q = quote_trade(state, security, qty, acfg, seed);
      json inputs = {{"ledger", ledger_path}, {"security", security_to_json(security)}, {"qty", qty}};
      if (*trade) {
        state.buy(security, qty);
        const std::string target = out_path.empty() ? ledger_path : out_path;
        save_ledger(state, target);
        q.diagnostics["written"] = target;
      }
      rep = report(*quote ? "quote" : "trade", inputs, q.result, q.diagnostics, seed);
    } else if (*count) {
      std::ifstream in(dimacs_path);
      if (!in) throw DomainError("cannot open " + dimacs_path);
      const TwoSatFormula f = parse_dimacs(in);
      json result;
      json diag;
      if (via == "brute") {
        result["count"] = count_models_brute_force(f);
      } else {
        const PricingCount pc = count_models_via_pricing_detailed(f, reduction_c0);
        result["count"] = pc.count;
        diag = {{"satisfiable", pc.satisfiable}};
        if (pc.satisfiable) {
          diag["witness"] = pc.witness;
          diag["price"] = pc.price;
          diag["tied"] = pc.reciprocal.tied;
          diag["remainder"] = pc.reciprocal.remainder;
          diag["share_quantity"] = pc.share_quantity;
          diag["cost_offset"] = pc.cost.level.offset();
          diag["reruns"] = pc.reruns;
        }
      }
      rep = report("count-models",
                   {{"dimacs", dimacs_path}, {"via", via}, {"n", f.n}, {"k", f.clauses.size()}},
                   result, diag, 0);
    } else if (*interval) {
      if (*ibuy) {
        IntervalMarket market = load_or_create_interval_market(state_path, universe, interval_c0);
        market.tree.purchase(lo, hi, qty);
        write_json_file(interval_market_to_json(market), state_path);
        const MaxStats m = market.tree.query_max();
        rep = report("interval buy", {{"state", state_path}, {"lo", lo}, {"hi", hi}, {"qty", qty}},
                     {{"q_max", m.q_max}, {"s_qmax", m.s_qmax}},
                     {{"endpoints", market.tree.endpoint_count()},
                      {"purchases", market.tree.purchase_count()},
                      {"height", market.tree.height()}},
                     0);
      } else if (*imax) {
        const IntervalMarket market = interval_market_from_json(read_json_file(state_path));
        const MaxStats m = market.tree.query_max();
        rep = report("interval max", {{"state", state_path}},
                     {{"q_max", m.q_max}, {"s_qmax", m.s_qmax}},
                     {{"endpoints", market.tree.endpoint_count()}}, 0);
      } else {
        acfg.validate();
        const std::uint64_t seed = common.resolved_seed();
        const IntervalMarket market = interval_market_from_json(read_json_file(state_path));
        IntervalTree after = market.tree;
        after.purchase(lo, hi, qty);
        const Rng base(seed);
        Rng before_rng = base.substream(0);
        Rng after_rng = base.substream(1);
        const CostEstimate c_before =
            approximate_cost(market.c0, IntervalOracle(market.tree), acfg, before_rng);
        const CostEstimate c_after = approximate_cost(market.c0, IntervalOracle(after), acfg, after_rng);
        rep = report("interval quote",
                     {{"state", state_path}, {"lo", lo}, {"hi", hi}, {"qty", qty},
                      {"epsilon", acfg.epsilon}, {"delta", acfg.delta}},
                     {{"cost", c_after.c_hat - c_before.c_hat},
                      {"c_before", c_before.c_hat},
                      {"c_after", c_after.c_hat}},
                     {{"path", "interval-tree+approx"},
                      {"before", estimate_diagnostics(c_before)},
                      {"after", estimate_diagnostics(c_after)}},
                     seed);
      }
    } else if (*wish) {
      const std::uint64_t seed = common.resolved_seed();
      if (alpha) {
        wcfg.alpha = *alpha;
        err << "warning: alpha override " << *alpha
            << " departs from 0.000762; the constant-factor guarantee no longer applies\n";
      }
      const MarketState state = load_ledger(ledger_path);
      const Clause2 clause = parse_clause(clause_text);
      const WishResult w = wish_price(state, clause, wcfg, seed);
      const std::vector<Quantity> qv = materialize(state);
      const auto sol = solve_cost_exact(qv, state.c0());
      const double exact = security_price(qv, sol.level, clause);
      rep = report("wish-price",
                   {{"ledger", ledger_path}, {"clause", clause_text}, {"delta", wcfg.delta},
                    {"alpha", wcfg.alpha}, {"k", wcfg.k}, {"c", wcfg.c}},
                   {{"price", w.price}},
                   {{"rounds", w.rounds}, {"hash_draws", w.hash_draws},
                    {"kmap_calls", w.kmap_calls}, {"inside_total", w.inside_total},
                    {"outside_total", w.outside_total}, {"degenerate", w.degenerate},
                    {"exact_price", exact}},
                   seed);
    } else if (*selftest) {
      json checks = run_selftest();
      bool ok = true;
      for (const json& c : checks) ok = ok && c.at("pass").get<bool>();
      rep = report("selftest", json::object(), {{"pass", ok}, {"checks", checks}}, json::object(), 0);
      out << rep.dump() << '\n';
      return ok ? kExitOk : kExitNumeric;
    }
    out << rep.dump() << '\n';
    return kExitOk;
  } catch (const CapacityError& e) {
    err << "capacity error: " << e.what() << '\n';
    return kExitCapacity;
  } catch (const NumericError& e) {
    err << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
}

}  // namespace clum::cli
