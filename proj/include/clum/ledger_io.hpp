#pragma once

// JSON documents:
//
//   ledger   { "C0": number, "n_events": int | null, "N": int,
//              "securities": [ {"type": "clause2", "lits": [[i, bool], [j, bool]], "qty": int}
//                            | {"type": "indicator", "outcome": int, "qty": int}
//                            | {"type": "interval", "lo": int, "hi": int, "qty": int} ] }
//
//   interval-market snapshot
//            { "N": int, "C0": number, "purchases": int,
//              "intervals": [[key, value], ...] }
//
// Unknown fields are rejected with DomainError.

#include <filesystem>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "clum/interval_tree.hpp"
#include "clum/market.hpp"

namespace clum {

MarketState ledger_from_json(const nlohmann::json& doc);
nlohmann::json ledger_to_json(const MarketState& state);

// A security object as in the ledger, with "qty" optional.
Security security_from_json(const nlohmann::json& obj);
nlohmann::json security_to_json(const Security& security);

MarketState load_ledger(const std::filesystem::path& path);
void save_ledger(const MarketState& state, const std::filesystem::path& path);

struct IntervalMarket {
  double c0 = 1.0;
  IntervalTree tree;
};

IntervalMarket interval_market_from_json(const nlohmann::json& doc);
nlohmann::json interval_market_to_json(const IntervalMarket& market);

// Builds the interval-tree oracle for a ledger holding only interval
// purchases. Throws DomainError otherwise.
IntervalTree interval_tree_from_ledger(const MarketState& state);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_json_file(const nlohmann::json& doc, const std::filesystem::path& path);

}  // namespace clum
