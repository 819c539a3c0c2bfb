#pragma once

// Hash-and-optimise price estimate for a clause security S. For each number
// of random parity constraints i = 0..n the k-th largest weight on each side
// of S (inside S, outside S) is taken over the constrained outcomes, T times;
// medians M_i, M'_i are aggregated as
//
//     N  = M_0  + sum_{i<n} M_{i+1}  2^i
//     N' = M'_0 + sum_{i<n} M'_{i+1} 2^i
//
// and the price estimate is N / (N + N'). With weights w(w) = 1 / (C - q_w)
// the exact price is sum_S w / sum_all w.

#include <cstdint>
#include <span>
#include <vector>

#include "clum/market.hpp"
#include "clum/rng.hpp"

namespace clum {

// Constraints A w = b (mod 2); row r of A is a bitmask over the n events.
struct ParityHash {
  int n = 0;
  std::vector<std::uint64_t> rows;
  std::vector<std::uint8_t> rhs;

  int constraints() const noexcept { return static_cast<int>(rows.size()); }
  bool satisfied_by(OutcomeIndex outcome) const noexcept;

  // i constraints with i.i.d. uniform bits.
  static ParityHash sample(int n, int constraints, Rng& rng);
};

enum class Side { kInside, kOutside };

inline constexpr double kAlphaStar = 0.000762;

struct WishConfig {
  double delta = 0.1;
  double alpha = kAlphaStar;
  int c = 2;
  std::size_t k = 12;

  void validate() const;
  // ceil(ln(n / delta) / alpha), at least 1.
  int rounds(int n) const;
};

// k-MAP oracle: the k-th largest weight among outcomes on `side` of S that
// satisfy the parity constraints, or 0 if fewer than k qualify.
class KMapOracle {
 public:
  virtual ~KMapOracle() = default;
  virtual int event_count() const = 0;
  virtual std::uint64_t side_size(Side side) const = 0;
  virtual double kth_largest(const ParityHash& hash, Side side, std::size_t k) const = 0;
};

inline constexpr int kMaxEnumerationEvents = 20;

// Exhaustive oracle for desk-scale n. Outcomes of each side are pre-sorted by
// weight, so a query scans until the k-th feasible outcome.
class EnumerationKMapOracle final : public KMapOracle {
 public:
  // weights.size() == 2^n; inside[j] says whether outcome j is in S.
  EnumerationKMapOracle(std::span<const double> weights, std::vector<bool> inside);
  EnumerationKMapOracle(std::span<const double> weights, const Clause2& security);

  int event_count() const override { return n_; }
  std::uint64_t side_size(Side side) const override;
  double kth_largest(const ParityHash& hash, Side side, std::size_t k) const override;

 private:
  int n_;
  std::vector<double> weights_;
  std::vector<OutcomeIndex> inside_sorted_;
  std::vector<OutcomeIndex> outside_sorted_;
};

// Direct k-MAP evaluation by enumeration (no precomputation).
double k_map_constrained(std::span<const double> weights, const ParityHash& hash,
                         const Clause2& security, Side side, std::size_t k);

struct WishResult {
  double price = 0.0;
  double inside_total = 0.0;   // N
  double outside_total = 0.0;  // N'
  std::vector<double> inside_medians;
  std::vector<double> outside_medians;
  int rounds = 0;  // T
  std::uint64_t hash_draws = 0;
  std::uint64_t kmap_calls = 0;
  bool degenerate = false;
};

// Lower median of the values.
double lower_median(std::vector<double> values);

// Medians aggregated as M_0 + sum_{i<n} M_{i+1} 2^i.
double aggregate_levels(std::span<const double> medians);

// Runs the estimator on any k-MAP oracle. Substream (i, t) of `seed`
// generates the hash of cell (i, t).
WishResult wish_estimate(const KMapOracle& oracle, const WishConfig& cfg, std::uint64_t seed);

// w(w) = 1 / (C - q_w) from the exact cost, rescaled so max w = 1.
std::vector<double> clum_weights(const MarketState& state);

WishResult wish_price(const MarketState& state, const Clause2& security,
                      const WishConfig& cfg, std::uint64_t seed);

// Verification helpers: b_i = weight of the 2^i-th heaviest outcome (1-based)
// of a side, zero-padded to 2^n entries, i = 0..n.
std::vector<double> level_weights(std::vector<double> side_weights, int n);

struct LevelBounds {
  double lower = 0.0;
  double upper = 0.0;
};

// L' = b_0 + sum b_{min(i+c+1,n)} 2^i,  U' = b_0 + sum b_{max(i,0)} 2^i.
LevelBounds outside_bounds(std::span<const double> levels, int c);
// L = b_0 + sum b_{min(i+2,n)} 2^i,     U = b_0 + sum b_{max(i-c,0)} 2^i.
LevelBounds inside_bounds(std::span<const double> levels, int c);

}  // namespace clum
