#include "clum/ledger_io.hpp"

#include <fstream>
#include <initializer_list>
#include <string_view>

#include <nlohmann/json.hpp>

#include "clum/errors.hpp"

namespace clum {

using nlohmann::json;

namespace {

void require_object(const json& obj, std::string_view what) {
  if (!obj.is_object()) throw DomainError(std::string(what) + " must be a JSON object");
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed,
                    std::string_view what) {
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (std::string_view a : allowed) known = known || key == a;
    if (!known) throw DomainError("unknown field '" + key + "' in " + std::string(what));
  }
}

const json& field(const json& obj, const char* name, std::string_view what) {
  auto it = obj.find(name);
  if (it == obj.end()) {
    throw DomainError("missing field '" + std::string(name) + "' in " + std::string(what));
  }
  return *it;
}

std::int64_t integer(const json& v, const char* name) {
  if (!v.is_number_integer()) {
    throw DomainError("field '" + std::string(name) + "' must be an integer");
  }
  return v.get<std::int64_t>();
}

std::uint64_t nonnegative(const json& v, const char* name) {
  const std::int64_t x = integer(v, name);
  if (x < 0) throw DomainError("field '" + std::string(name) + "' must be nonnegative");
  return static_cast<std::uint64_t>(x);
}

Literal literal_from_json(const json& v) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() || !v[1].is_boolean()) {
    throw DomainError("clause literal must be [event, polarity]");
  }
  return Literal{static_cast<int>(v[0].get<std::int64_t>()), v[1].get<bool>()};
}

}  // namespace

Security security_from_json(const json& obj) {
  require_object(obj, "security");
  const json& type = field(obj, "type", "security");
  if (!type.is_string()) throw DomainError("security 'type' must be a string");
  const std::string t = type.get<std::string>();
  if (t == "clause2") {
    reject_unknown(obj, {"type", "lits", "qty"}, "clause2 security");
    const json& lits = field(obj, "lits", "clause2 security");
    if (!lits.is_array() || lits.size() != 2) throw DomainError("clause2 needs two literals");
    return Clause2{literal_from_json(lits[0]), literal_from_json(lits[1])};
  }
  if (t == "indicator") {
    reject_unknown(obj, {"type", "outcome", "qty"}, "indicator security");
    return Indicator{nonnegative(field(obj, "outcome", "indicator security"), "outcome")};
  }
  if (t == "interval") {
    reject_unknown(obj, {"type", "lo", "hi", "qty"}, "interval security");
    return Interval{nonnegative(field(obj, "lo", "interval security"), "lo"),
                    nonnegative(field(obj, "hi", "interval security"), "hi")};
  }
  throw DomainError("unknown security type '" + t + "'");
}

json security_to_json(const Security& security) {
  if (const auto* c = std::get_if<Clause2>(&security)) {
    return {{"type", "clause2"},
            {"lits", json::array({json::array({c->first.event, c->first.positive}),
                                  json::array({c->second.event, c->second.positive})})}};
  }
  if (const auto* s = std::get_if<Indicator>(&security)) {
    return {{"type", "indicator"}, {"outcome", s->outcome}};
  }
  const auto& iv = std::get<Interval>(security);
  return {{"type", "interval"}, {"lo", iv.lo}, {"hi", iv.hi}};
}

MarketState ledger_from_json(const json& doc) {
  require_object(doc, "ledger");
  reject_unknown(doc, {"C0", "n_events", "N", "securities"}, "ledger");
  const json& c0 = field(doc, "C0", "ledger");
  if (!c0.is_number()) throw DomainError("'C0' must be a number");
  const std::uint64_t n_outcomes = nonnegative(field(doc, "N", "ledger"), "N");

  auto events_it = doc.find("n_events");
  std::optional<MarketState> state;
  if (events_it != doc.end() && !events_it->is_null()) {
    const std::uint64_t n = nonnegative(*events_it, "n_events");
    if (n > 62) throw DomainError("'n_events' too large");
    state = MarketState::boolean(c0.get<double>(), static_cast<int>(n));
    if (state->outcome_count() != n_outcomes) {
      throw DomainError("'N' must equal 2^n_events for Boolean markets");
    }
  } else {
    state = MarketState::indexed(c0.get<double>(), n_outcomes);
  }

  const json& securities = field(doc, "securities", "ledger");
  if (!securities.is_array()) throw DomainError("'securities' must be an array");
  for (const json& entry : securities) {
    const Security s = security_from_json(entry);
    const json& qty = field(entry, "qty", "security");
    state->buy(s, static_cast<Quantity>(nonnegative(qty, "qty")));
  }
  return std::move(*state);
}

json ledger_to_json(const MarketState& state) {
  json securities = json::array();
  for (const LedgerEntry& e : state.ledger()) {
    json obj = security_to_json(e.security);
    obj["qty"] = e.quantity;
    securities.push_back(std::move(obj));
  }
  json doc;
  doc["C0"] = state.c0();
  doc["N"] = state.outcome_count();
  doc["n_events"] = state.n_events() ? json(*state.n_events()) : json(nullptr);
  doc["securities"] = std::move(securities);
  return doc;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw DomainError("invalid JSON in " + path.string() + ": " + e.what());
  }
}

void write_json_file(const json& doc, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DomainError("cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

MarketState load_ledger(const std::filesystem::path& path) {
  return ledger_from_json(read_json_file(path));
}

void save_ledger(const MarketState& state, const std::filesystem::path& path) {
  write_json_file(ledger_to_json(state), path);
}

IntervalMarket interval_market_from_json(const json& doc) {
  require_object(doc, "interval market");
  reject_unknown(doc, {"N", "C0", "purchases", "intervals"}, "interval market");
  const std::uint64_t n = nonnegative(field(doc, "N", "interval market"), "N");
  const json& c0 = field(doc, "C0", "interval market");
  if (!c0.is_number() || !(c0.get<double>() > 0.0)) throw DomainError("'C0' must be positive");
  std::uint64_t purchases = 0;
  if (auto it = doc.find("purchases"); it != doc.end()) purchases = nonnegative(*it, "purchases");
  const json& list = field(doc, "intervals", "interval market");
  if (!list.is_array()) throw DomainError("'intervals' must be an array");
  std::vector<ElementaryInterval> items;
  for (const json& pair : list) {
    if (!pair.is_array() || pair.size() != 2) {
      throw DomainError("each elementary interval must be [key, value]");
    }
    items.push_back({nonnegative(pair[0], "key"),
                     static_cast<Quantity>(nonnegative(pair[1], "value"))});
  }
  return IntervalMarket{c0.get<double>(), IntervalTree::from_elementary(n, items, purchases)};
}

json interval_market_to_json(const IntervalMarket& market) {
  json list = json::array();
  for (const ElementaryInterval& e : market.tree.elementary_intervals()) {
    list.push_back(json::array({e.key, e.value}));
  }
  json doc;
  doc["N"] = market.tree.universe();
  doc["C0"] = market.c0;
  doc["purchases"] = market.tree.purchase_count();
  doc["intervals"] = std::move(list);
  return doc;
}

IntervalTree interval_tree_from_ledger(const MarketState& state) {
  IntervalTree tree(state.outcome_count());
  for (const LedgerEntry& e : state.ledger()) {
    const auto* iv = std::get_if<Interval>(&e.security);
    if (!iv) throw DomainError("interval oracle needs a ledger of interval securities only");
    if (e.quantity > 0) tree.purchase(iv->lo, iv->hi, e.quantity);
  }
  return tree;
}

}  // namespace clum
