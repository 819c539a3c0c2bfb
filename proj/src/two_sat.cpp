#include "clum/two_sat.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>
#include <string>

#include "clum/errors.hpp"

namespace clum {

void TwoSatFormula::validate() const {
  if (n < 0 || n > 62) throw DomainError("event count must lie in [0, 62]");
  for (const Clause2& c : clauses) {
    for (const Literal& lit : {c.first, c.second}) {
      if (lit.event < 1 || lit.event > n) {
        throw DomainError("literal refers to event " + std::to_string(lit.event) +
                          " outside 1.." + std::to_string(n));
      }
    }
    if (c.first.event == c.second.event) {
      throw DomainError("clause literals must name distinct events");
    }
  }
}

TwoSatFormula parse_dimacs(std::istream& in) {
  TwoSatFormula f;
  bool have_header = false;
  long declared = 0;
  std::vector<long> pending;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (first == "c" || first[0] == 'c' || first[0] == '%') continue;
    if (first == "p") {
      std::string fmt;
      long n = -1;
      if (have_header || !(ls >> fmt >> n >> declared) || fmt != "cnf" || n < 0 ||
          n > 62 || declared < 0) {
        throw DomainError("malformed DIMACS header on line " + std::to_string(line_no));
      }
      f.n = static_cast<int>(n);
      have_header = true;
      continue;
    }
    if (!have_header) throw DomainError("DIMACS clause before the 'p cnf' header");
    std::istringstream tokens(line);
    long lit = 0;
    while (tokens >> lit) {
      if (lit != 0) {
        pending.push_back(lit);
        continue;
      }
      if (pending.size() != 2) {
        throw DomainError("line " + std::to_string(line_no) +
                          ": only clauses of exactly two literals are supported");
      }
      auto to_literal = [&](long v) {
        if (std::labs(v) > f.n) throw DomainError("literal exceeds declared event count");
        return Literal{static_cast<int>(std::labs(v)), v > 0};
      };
      f.clauses.push_back({to_literal(pending[0]), to_literal(pending[1])});
      pending.clear();
    }
    if (!tokens.eof()) {
      throw DomainError("unexpected token on DIMACS line " + std::to_string(line_no));
    }
  }
  if (!have_header) throw DomainError("missing DIMACS header");
  if (!pending.empty()) throw DomainError("last DIMACS clause is not terminated by 0");
  if (static_cast<long>(f.clauses.size()) != declared) {
    throw DomainError("DIMACS header declares " + std::to_string(declared) +
                      " clauses, found " + std::to_string(f.clauses.size()));
  }
  f.validate();
  return f;
}

namespace {

// Literal node: 2 (e - 1) for x_e, 2 (e - 1) + 1 for not x_e.
int node_of(const Literal& lit) { return 2 * (lit.event - 1) + (lit.positive ? 0 : 1); }

// Iterative Tarjan. Components are numbered in reverse topological order.
std::vector<int> strongly_connected_components(const std::vector<std::vector<int>>& adj) {
  const int v_count = static_cast<int>(adj.size());
  std::vector<int> index(v_count, -1), low(v_count, 0), comp(v_count, -1);
  std::vector<char> on_stack(v_count, 0);
  std::vector<int> stack;
  std::vector<std::pair<int, std::size_t>> call;
  int next_index = 0;
  int next_comp = 0;

  for (int root = 0; root < v_count; ++root) {
    if (index[root] != -1) continue;
    call.push_back({root, 0});
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      auto& [v, edge] = call.back();
      if (edge < adj[v].size()) {
        const int w = adj[v][edge++];
        if (index[w] == -1) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        int w = -1;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = next_comp;
        } while (w != v);
        ++next_comp;
      }
      const int finished = v;
      call.pop_back();
      if (!call.empty()) {
        const int parent = call.back().first;
        low[parent] = std::min(low[parent], low[finished]);
      }
    }
  }
  return comp;
}

}  // namespace

std::optional<OutcomeIndex> two_sat_find_assignment(const TwoSatFormula& f) {
  f.validate();
  std::vector<std::vector<int>> adj(2 * static_cast<std::size_t>(f.n));
  for (const Clause2& c : f.clauses) {
    const int a = node_of(c.first);
    const int b = node_of(c.second);
    adj[a ^ 1].push_back(b);
    adj[b ^ 1].push_back(a);
  }
  const auto comp = strongly_connected_components(adj);
  OutcomeIndex assignment = 0;
  for (int e = 0; e < f.n; ++e) {
    const int pos = 2 * e;
    const int neg = pos + 1;
    if (comp[pos] == comp[neg]) return std::nullopt;
    // Tarjan numbers sink components first; pick the literal that comes
    // later in topological order.
    if (comp[pos] < comp[neg]) assignment |= OutcomeIndex{1} << e;
  }
  return assignment;
}

std::uint64_t count_models_brute_force(const TwoSatFormula& f) {
  f.validate();
  if (f.n > kMaxBruteForceEvents) {
    throw CapacityError("brute-force counting supports at most " +
                        std::to_string(kMaxBruteForceEvents) + " events");
  }
  // A clause is falsified iff both of its event bits take the "wrong" value.
  struct Falsifier {
    OutcomeIndex mask;
    OutcomeIndex pattern;
  };
  std::vector<Falsifier> falsifiers;
  falsifiers.reserve(f.clauses.size());
  for (const Clause2& c : f.clauses) {
    const OutcomeIndex ma = OutcomeIndex{1} << (c.first.event - 1);
    const OutcomeIndex mb = OutcomeIndex{1} << (c.second.event - 1);
    falsifiers.push_back({ma | mb, (c.first.positive ? 0 : ma) | (c.second.positive ? 0 : mb)});
  }
  const OutcomeIndex total = OutcomeIndex{1} << f.n;
  std::uint64_t count = 0;
  for (OutcomeIndex w = 0; w < total; ++w) {
    bool ok = true;
    for (const Falsifier& fz : falsifiers) {
      if ((w & fz.mask) == fz.pattern) {
        ok = false;
        break;
      }
    }
    count += ok ? 1 : 0;
  }
  return count;
}

Quantity reduction_share_quantity(int n, double c0) {
  const double q = std::ceil(c0 * (std::ldexp(1.0, n) - 1.0));
  if (!(q >= 0.0) || q > 9.0e15) throw CapacityError("reduction share quantity not representable");
  return static_cast<Quantity>(q);
}

MarketState reduction_market(const TwoSatFormula& f, double c0) {
  f.validate();
  MarketState state = MarketState::boolean(c0, f.n);
  const Quantity q = reduction_share_quantity(f.n, c0);
  for (const Clause2& c : f.clauses) state.buy(c, q);
  return state;
}

PricingCount count_models_via_pricing_detailed(const TwoSatFormula& f, double c0) {
  f.validate();
  if (f.n > kMaxPricingEvents) {
    throw CapacityError("pricing-based counting supports at most " +
                        std::to_string(kMaxPricingEvents) + " events");
  }
  if (!(c0 > 0.0)) throw DomainError("C0 must be positive");
  PricingCount out;
  const auto witness = two_sat_find_assignment(f);
  if (!witness) return out;
  if (f.clauses.size() >= (OutcomeIndex{1} << f.n)) {
    throw DomainError("the reduction requires fewer clauses than outcomes (k < 2^n)");
  }
  out.satisfiable = true;
  out.witness = *witness;

  const MarketState state = reduction_market(f, c0);
  out.share_quantity = reduction_share_quantity(f.n, c0);
  const std::vector<Quantity> q = materialize(state);
  const auto hist = PayoutHistogram::from_values(q);
  CLUM_CHECK(q[out.witness] == hist.q_max());

  constexpr double kBoundaryGuard = 1e-6;
  auto ambiguous = [&](double r) {
    const double nearest = std::round(r);
    return nearest >= 1.0 && std::fabs(r - nearest) < kBoundaryGuard;
  };

  SolveConfig cfg;
  out.cost = solve_cost_exact(hist, c0, cfg);
  out.reciprocal = reciprocal_outcome_price(q, out.cost.level, out.witness);
  if (ambiguous(out.reciprocal.remainder)) {
    ++out.reruns;
    cfg.abs_tol = 1e-15;
    cfg.max_iter = 400;
    try {
      out.cost = solve_cost_exact(hist, c0, cfg);
    } catch (const ConvergenceError&) {
      // Keep the original solution; the ambiguity check below decides.
    }
    out.reciprocal = reciprocal_outcome_price(q, out.cost.level, out.witness);
    if (ambiguous(out.reciprocal.remainder)) {
      throw NumericError("1/p lies within 1e-6 of an integer; floor is not reliable");
    }
  }
  out.price = 1.0 / (static_cast<double>(out.reciprocal.tied) + out.reciprocal.remainder);
  out.count = out.reciprocal.tied +
              static_cast<std::uint64_t>(std::floor(out.reciprocal.remainder));
  return out;
}

std::uint64_t count_models_via_pricing(const TwoSatFormula& f, double c0) {
  return count_models_via_pricing_detailed(f, c0).count;
}

}  // namespace clum
