#include "clum/interval_tree.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "clum/errors.hpp"

namespace clum {

namespace interval_detail {

int height(const IntervalNode* node) noexcept { return node ? node->height : 0; }

void push_down(IntervalNode* node, OpCounter& ops) {
  if (node == nullptr || node->lazy_add == 0) return;
  ++ops.push_downs;
  node->value += node->lazy_add;
  node->max_val += node->lazy_add;
  if (node->left) node->left->lazy_add += node->lazy_add;
  if (node->right) node->right->lazy_add += node->lazy_add;
  node->lazy_add = 0;
}

void update_augmented_data(IntervalNode* node, OpCounter& ops) {
  CLUM_CHECK(node != nullptr && node->lazy_add == 0);
  ++ops.updates;
  IntervalNode* l = node->left.get();
  IntervalNode* r = node->right.get();
  push_down(l, ops);
  push_down(r, ops);
  Quantity mval = node->value;
  if (l) mval = std::max(mval, l->max_val);
  if (r) mval = std::max(mval, r->max_val);
  std::uint64_t mcount = 0;
  if (node->value == mval) mcount += node->span;
  if (l && l->max_val == mval) mcount += l->max_count;
  if (r && r->max_val == mval) mcount += r->max_count;
  node->max_val = mval;
  node->max_count = mcount;
  node->height = 1 + std::max(height(l), height(r));
}

namespace {

NodePtr rotate_left(NodePtr x, OpCounter& ops) {
  NodePtr y = std::move(x->right);
  push_down(y.get(), ops);
  x->right = std::move(y->left);
  update_augmented_data(x.get(), ops);
  y->left = std::move(x);
  update_augmented_data(y.get(), ops);
  return y;
}

NodePtr rotate_right(NodePtr x, OpCounter& ops) {
  NodePtr y = std::move(x->left);
  push_down(y.get(), ops);
  x->left = std::move(y->right);
  update_augmented_data(x.get(), ops);
  y->right = std::move(x);
  update_augmented_data(y.get(), ops);
  return y;
}

NodePtr attach(NodePtr left, NodePtr pivot, NodePtr right, OpCounter& ops) {
  pivot->left = std::move(left);
  pivot->right = std::move(right);
  update_augmented_data(pivot.get(), ops);
  return pivot;
}

// Precondition: height(left) > height(right) + 1.
NodePtr join_right(NodePtr left, NodePtr pivot, NodePtr right, OpCounter& ops) {
  push_down(left.get(), ops);
  NodePtr c = std::move(left->right);
  if (height(c.get()) <= height(right.get()) + 1) {
    NodePtr t = attach(std::move(c), std::move(pivot), std::move(right), ops);
    if (t->height <= height(left->left.get()) + 1) {
      left->right = std::move(t);
      update_augmented_data(left.get(), ops);
      return left;
    }
    left->right = rotate_right(std::move(t), ops);
    update_augmented_data(left.get(), ops);
    return rotate_left(std::move(left), ops);
  }
  NodePtr t = join_right(std::move(c), std::move(pivot), std::move(right), ops);
  const int th = t->height;
  left->right = std::move(t);
  update_augmented_data(left.get(), ops);
  if (th <= height(left->left.get()) + 1) return left;
  return rotate_left(std::move(left), ops);
}

// Precondition: height(right) > height(left) + 1.
NodePtr join_left(NodePtr left, NodePtr pivot, NodePtr right, OpCounter& ops) {
  push_down(right.get(), ops);
  NodePtr c = std::move(right->left);
  if (height(c.get()) <= height(left.get()) + 1) {
    NodePtr t = attach(std::move(left), std::move(pivot), std::move(c), ops);
    if (t->height <= height(right->right.get()) + 1) {
      right->left = std::move(t);
      update_augmented_data(right.get(), ops);
      return right;
    }
    right->left = rotate_left(std::move(t), ops);
    update_augmented_data(right.get(), ops);
    return rotate_right(std::move(right), ops);
  }
  NodePtr t = join_left(std::move(left), std::move(pivot), std::move(c), ops);
  const int th = t->height;
  right->left = std::move(t);
  update_augmented_data(right.get(), ops);
  if (th <= height(right->right.get()) + 1) return right;
  return rotate_right(std::move(right), ops);
}

}  // namespace

NodePtr join(NodePtr left, NodePtr pivot, NodePtr right, OpCounter& ops) {
  CLUM_CHECK(pivot && !pivot->left && !pivot->right && pivot->lazy_add == 0);
  const int hl = height(left.get());
  const int hr = height(right.get());
  if (hl > hr + 1) return join_right(std::move(left), std::move(pivot), std::move(right), ops);
  if (hr > hl + 1) return join_left(std::move(left), std::move(pivot), std::move(right), ops);
  return attach(std::move(left), std::move(pivot), std::move(right), ops);
}

std::pair<NodePtr, NodePtr> split(NodePtr root, std::uint64_t key, OpCounter& ops) {
  if (!root) return {nullptr, nullptr};
  push_down(root.get(), ops);
  NodePtr l = std::move(root->left);
  NodePtr r = std::move(root->right);
  if (key <= root->key) {
    auto [ll, lr] = split(std::move(l), key, ops);
    return {std::move(ll), join(std::move(lr), std::move(root), std::move(r), ops)};
  }
  auto [rl, rr] = split(std::move(r), key, ops);
  return {join(std::move(l), std::move(root), std::move(rl), ops), std::move(rr)};
}

std::pair<NodePtr, NodePtr> split_last(NodePtr root, OpCounter& ops) {
  CLUM_CHECK(root != nullptr);
  push_down(root.get(), ops);
  if (!root->right) {
    NodePtr rest = std::move(root->left);
    update_augmented_data(root.get(), ops);
    return {std::move(rest), std::move(root)};
  }
  auto [rest, last] = split_last(std::move(root->right), ops);
  NodePtr l = std::move(root->left);
  return {join(std::move(l), std::move(root), std::move(rest), ops), std::move(last)};
}

NodePtr merge(NodePtr left, NodePtr right, OpCounter& ops) {
  if (!left) return right;
  if (!right) return left;
  auto [rest, last] = split_last(std::move(left), ops);
  return join(std::move(rest), std::move(last), std::move(right), ops);
}

}  // namespace interval_detail

namespace {

using interval_detail::OpCounter;

NodePtr clone(const IntervalNode* node) {
  if (!node) return nullptr;
  auto copy = std::make_unique<IntervalNode>();
  copy->key = node->key;
  copy->span = node->span;
  copy->value = node->value;
  copy->max_val = node->max_val;
  copy->max_count = node->max_count;
  copy->lazy_add = node->lazy_add;
  copy->height = node->height;
  copy->left = clone(node->left.get());
  copy->right = clone(node->right.get());
  return copy;
}

NodePtr build_balanced(const std::vector<ElementaryInterval>& items, std::size_t lo,
                       std::size_t hi, std::uint64_t universe, OpCounter& ops) {
  if (lo >= hi) return nullptr;
  const std::size_t mid = lo + (hi - lo) / 2;
  auto node = std::make_unique<IntervalNode>();
  node->key = items[mid].key;
  node->value = items[mid].value;
  node->span = (mid + 1 < items.size() ? items[mid + 1].key : universe) - node->key;
  node->left = build_balanced(items, lo, mid, universe, ops);
  node->right = build_balanced(items, mid + 1, hi, universe, ops);
  interval_detail::update_augmented_data(node.get(), ops);
  return node;
}

void flush(IntervalNode* node, OpCounter& ops) {
  if (!node) return;
  interval_detail::push_down(node, ops);
  flush(node->left.get(), ops);
  flush(node->right.get(), ops);
  interval_detail::update_augmented_data(node, ops);
}

void collect(const IntervalNode* node, Quantity acc, std::vector<ElementaryInterval>& out,
             std::vector<std::uint64_t>* spans) {
  if (!node) return;
  acc += node->lazy_add;
  collect(node->left.get(), acc, out, spans);
  out.push_back({node->key, node->value + acc});
  if (spans) spans->push_back(node->span);
  collect(node->right.get(), acc, out, spans);
}

struct Audit {
  std::uint64_t min_key;
  std::uint64_t max_key;
  std::size_t count;
  Quantity true_max;
  std::uint64_t true_count;
};

Audit audit(const IntervalNode* node, Quantity acc) {
  acc += node->lazy_add;
  const IntervalNode* l = node->left.get();
  const IntervalNode* r = node->right.get();
  const int hl = interval_detail::height(l);
  const int hr = interval_detail::height(r);
  CLUM_CHECK(node->height == 1 + std::max(hl, hr));
  CLUM_CHECK(hl - hr <= 1 && hr - hl <= 1);
  CLUM_CHECK(node->span >= 1);

  const Quantity own = node->value + acc;
  Audit out{node->key, node->key, 1, own, node->span};
  auto absorb = [&](const Audit& child) {
    out.count += child.count;
    if (child.true_max > out.true_max) {
      out.true_max = child.true_max;
      out.true_count = child.true_count;
    } else if (child.true_max == out.true_max) {
      out.true_count += child.true_count;
    }
  };
  if (l) {
    const Audit a = audit(l, acc);
    CLUM_CHECK(a.max_key < node->key);
    out.min_key = a.min_key;
    absorb(a);
  }
  if (r) {
    const Audit a = audit(r, acc);
    CLUM_CHECK(a.min_key > node->key);
    out.max_key = a.max_key;
    absorb(a);
  }
  CLUM_CHECK(node->max_val + acc == out.true_max);
  CLUM_CHECK(node->max_count == out.true_count);
  return out;
}

}  // namespace

IntervalTree::IntervalTree(std::uint64_t universe) : universe_(universe) {
  if (universe == 0) throw DomainError("interval universe must be non-empty");
}

IntervalTree::IntervalTree(const IntervalTree& other)
    : universe_(other.universe_),
      root_(clone(other.root_.get())),
      size_(other.size_),
      purchases_(other.purchases_),
      first_key_(other.first_key_),
      ops_(other.ops_) {}

IntervalTree& IntervalTree::operator=(const IntervalTree& other) {
  if (this != &other) *this = IntervalTree(other);
  return *this;
}

IntervalTree IntervalTree::from_elementary(std::uint64_t universe,
                                           const std::vector<ElementaryInterval>& intervals,
                                           std::uint64_t purchases) {
  IntervalTree tree(universe);
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    if (intervals[i].key >= universe) throw DomainError("elementary key outside [0, N)");
    if (intervals[i].value < 0) throw DomainError("elementary values must be nonnegative");
    if (i > 0 && intervals[i].key <= intervals[i - 1].key) {
      throw DomainError("elementary keys must be strictly increasing");
    }
  }
  tree.root_ = build_balanced(intervals, 0, intervals.size(), universe, tree.ops_);
  tree.size_ = intervals.size();
  tree.purchases_ = purchases;
  if (!intervals.empty()) tree.first_key_ = intervals.front().key;
  tree.ops_ = {};
  return tree;
}

bool IntervalTree::ensure_endpoint_exists(std::uint64_t key) {
  if (key > universe_) throw DomainError("endpoint beyond the outcome universe");
  if (key == universe_) return false;
  for (const IntervalNode* n = root_.get(); n != nullptr;) {
    if (n->key == key) return false;
    n = key < n->key ? n->left.get() : n->right.get();
  }

  auto [left, right] = interval_detail::split(std::move(root_), key, ops_);
  auto fresh = std::make_unique<IntervalNode>();
  fresh->key = key;
  if (left) {
    auto [rest, pred] = interval_detail::split_last(std::move(left), ops_);
    fresh->value = pred->value;  // inherited_value
    fresh->span = pred->key + pred->span - key;
    pred->span = key - pred->key;
    interval_detail::update_augmented_data(pred.get(), ops_);
    left = interval_detail::join(std::move(rest), std::move(pred), nullptr, ops_);
  } else {
    std::uint64_t next = universe_;
    for (const IntervalNode* n = right.get(); n != nullptr; n = n->left.get()) next = n->key;
    fresh->value = 0;
    fresh->span = next - key;
    first_key_ = key;
  }
  interval_detail::update_augmented_data(fresh.get(), ops_);
  root_ = interval_detail::join(std::move(left), std::move(fresh), std::move(right), ops_);
  ++size_;
  return true;
}

void IntervalTree::purchase(std::uint64_t lo, std::uint64_t hi, Quantity val) {
  if (lo > hi || hi >= universe_) {
    throw DomainError("interval purchase needs 0 <= lo <= hi < N");
  }
  if (val < 1) throw DomainError("interval purchase quantity must be positive");
  ensure_endpoint_exists(lo);
  ensure_endpoint_exists(hi + 1);
  auto [left, mid_right] = interval_detail::split(std::move(root_), lo, ops_);
  auto [mid, right] = interval_detail::split(std::move(mid_right), hi + 1, ops_);
  CLUM_CHECK(mid != nullptr);
  mid->lazy_add += val;
  root_ = interval_detail::merge(
      interval_detail::merge(std::move(left), std::move(mid), ops_), std::move(right), ops_);
  ++purchases_;
  CLUM_CHECK(height() <= height_bound(size_));
}

MaxStats IntervalTree::query_max() const noexcept {
  if (!root_) return {0, universe_};
  MaxStats out{root_->max_val + root_->lazy_add, root_->max_count};
  if (first_key_ > 0 && out.q_max == 0) out.s_qmax += first_key_;
  return out;
}

Quantity IntervalTree::value_at(std::uint64_t index) const {
  if (index >= universe_) throw DomainError("outcome index out of range");
  Quantity acc = 0;
  Quantity result = 0;
  for (const IntervalNode* n = root_.get(); n != nullptr;) {
    acc += n->lazy_add;
    if (index >= n->key) {
      result = n->value + acc;
      if (index == n->key) break;
      n = n->right.get();
    } else {
      n = n->left.get();
    }
  }
  return result;
}

void IntervalTree::flush_lazy() { flush(root_.get(), ops_); }

std::vector<ElementaryInterval> IntervalTree::elementary_intervals() const {
  std::vector<ElementaryInterval> out;
  out.reserve(size_);
  collect(root_.get(), 0, out, nullptr);
  return out;
}

PayoutHistogram IntervalTree::histogram() const {
  std::vector<ElementaryInterval> items;
  std::vector<std::uint64_t> spans;
  items.reserve(size_);
  spans.reserve(size_);
  collect(root_.get(), 0, items, &spans);
  std::vector<PayoutHistogram::Bin> bins;
  bins.reserve(items.size() + 1);
  const std::uint64_t prefix = items.empty() ? universe_ : first_key_;
  if (prefix > 0) bins.push_back({0, prefix});
  for (std::size_t i = 0; i < items.size(); ++i) bins.push_back({items[i].value, spans[i]});
  return PayoutHistogram::from_bins(std::move(bins));
}

double IntervalTree::height_bound(std::size_t k) noexcept {
  return 1.4405 * std::log2(static_cast<double>(k) + 2.0) - 0.3277;
}

void IntervalTree::check_invariants() const {
  if (!root_) {
    CLUM_CHECK(size_ == 0);
    return;
  }
  const Audit a = audit(root_.get(), 0);
  CLUM_CHECK(a.count == size_);
  CLUM_CHECK(a.min_key == first_key_);
  CLUM_CHECK(a.max_key < universe_);
  CLUM_CHECK(static_cast<double>(height()) <= height_bound(size_));

  std::vector<ElementaryInterval> items;
  std::vector<std::uint64_t> spans;
  collect(root_.get(), 0, items, &spans);
  for (std::size_t i = 0; i < items.size(); ++i) {
    const std::uint64_t next = i + 1 < items.size() ? items[i + 1].key : universe_;
    CLUM_CHECK(spans[i] == next - items[i].key);
    CLUM_CHECK(items[i].value >= 0);
  }
}

}  // namespace clum
