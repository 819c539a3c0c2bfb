#pragma once

// Interval-betting oracle: an AVL tree keyed by elementary-interval start
// points. Node `key` owns the outcomes [key, key + span), span being the gap
// to the successor key (or to N for the last key). Outcomes before the first
// key are implicitly zero. Subtree annotations:
//
//   max_val    largest share count in the subtree
//   max_count  number of atomic outcomes attaining max_val
//   lazy_add   increment still owed to every node of the subtree, the node
//              itself included (value and max_val are stale by lazy_add)
//
// Purchases split the tree at l and r + 1, tag the middle part with a lazy
// increment and join the three parts back. Split and join are the join-based
// AVL algorithms, so every public operation is O(log k) for k endpoints.

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "clum/approx_solver.hpp"
#include "clum/exact_solver.hpp"
#include "clum/market.hpp"

namespace clum {

struct IntervalNode {
  std::uint64_t key = 0;
  std::uint64_t span = 0;
  Quantity value = 0;
  Quantity max_val = 0;
  std::uint64_t max_count = 0;
  Quantity lazy_add = 0;
  int height = 1;
  std::unique_ptr<IntervalNode> left;
  std::unique_ptr<IntervalNode> right;
};

using NodePtr = std::unique_ptr<IntervalNode>;

namespace interval_detail {

// Node touches made by the supporting functions; used for complexity checks.
struct OpCounter {
  std::uint64_t push_downs = 0;
  std::uint64_t updates = 0;
  std::uint64_t total() const noexcept { return push_downs + updates; }
};

int height(const IntervalNode* node) noexcept;

void push_down(IntervalNode* node, OpCounter& ops);

// Recomputes max_val, max_count and height from the node and its children.
// The node's own lazy_add must already be zero.
void update_augmented_data(IntervalNode* node, OpCounter& ops);

// Joins l < pivot < r (all keys) into one balanced tree.
NodePtr join(NodePtr left, NodePtr pivot, NodePtr right, OpCounter& ops);

// (keys < key, keys >= key).
std::pair<NodePtr, NodePtr> split(NodePtr root, std::uint64_t key, OpCounter& ops);

// Detaches the maximum-key node: (rest, last).
std::pair<NodePtr, NodePtr> split_last(NodePtr root, OpCounter& ops);

// Concatenates two trees with every key of `left` below every key of `right`,
// using the maximum key of `left` as the join pivot.
NodePtr merge(NodePtr left, NodePtr right, OpCounter& ops);

}  // namespace interval_detail

struct ElementaryInterval {
  std::uint64_t key = 0;
  Quantity value = 0;
  friend bool operator==(const ElementaryInterval&, const ElementaryInterval&) = default;
};

class IntervalTree {
 public:
  explicit IntervalTree(std::uint64_t universe);

  // Rebuilds a tree from a snapshot: strictly increasing keys in [0, N).
  static IntervalTree from_elementary(std::uint64_t universe,
                                      const std::vector<ElementaryInterval>& intervals,
                                      std::uint64_t purchases = 0);

  IntervalTree(IntervalTree&&) noexcept = default;
  IntervalTree& operator=(IntervalTree&&) noexcept = default;
  IntervalTree(const IntervalTree& other);
  IntervalTree& operator=(const IntervalTree& other);

  // Adds `val` shares to every outcome in [lo, hi].
  void purchase(std::uint64_t lo, std::uint64_t hi, Quantity val);

  // O(1): (root.max_val, root.max_count) with the implicit zero prefix.
  MaxStats query_max() const noexcept;

  Quantity value_at(std::uint64_t index) const;

  // Inserts `key` as an elementary-interval start inheriting the value of its
  // predecessor. No-op if present or key == N. Returns whether it inserted.
  bool ensure_endpoint_exists(std::uint64_t key);

  // Pushes every pending lazy value down to the leaves.
  void flush_lazy();

  std::uint64_t universe() const noexcept { return universe_; }
  std::size_t endpoint_count() const noexcept { return size_; }
  std::uint64_t purchase_count() const noexcept { return purchases_; }
  int height() const noexcept { return interval_detail::height(root_.get()); }
  const IntervalNode* root() const noexcept { return root_.get(); }
  const interval_detail::OpCounter& op_counter() const noexcept { return ops_; }

  // Keyed snapshot with all lazy values applied (read-only traversal).
  std::vector<ElementaryInterval> elementary_intervals() const;

  // Payout multiset over all N outcomes.
  PayoutHistogram histogram() const;

  // Worst-case AVL height for k nodes: 1.4405 log2(k + 2) - 0.3277.
  static double height_bound(std::size_t k) noexcept;

  // Full structural audit; aborts through CLUM_CHECK on a violation.
  void check_invariants() const;

 private:
  std::uint64_t universe_;
  NodePtr root_;
  std::size_t size_ = 0;
  std::uint64_t purchases_ = 0;
  std::uint64_t first_key_ = 0;  // meaningful when size_ > 0
  interval_detail::OpCounter ops_;
};

// OutcomeOracle view of an interval tree; the tree must outlive it.
class IntervalOracle final : public OutcomeOracle {
 public:
  explicit IntervalOracle(const IntervalTree& tree) : tree_(&tree) {}

  std::uint64_t outcome_count() const override { return tree_->universe(); }
  MaxStats max_stats() const override { return tree_->query_max(); }
  Quantity payout(OutcomeIndex index) const override { return tree_->value_at(index); }

 private:
  const IntervalTree* tree_;
};

}  // namespace clum
