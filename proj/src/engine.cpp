#include "stabsec/engine.hpp"

#include <algorithm>

#include "stabsec/arrival.hpp"

namespace stabsec {

const char* catastrophe_name(std::optional<Catastrophe> c) {
  if (!c) return "none";
  switch (*c) {
    case Catastrophe::TypeI: return "I";
    case Catastrophe::TypeII: return "II";
    case Catastrophe::TypeIII: return "III";
  }
  return "?";
}

GirlPool::GirlPool(int num_girls) : num_girls_(num_girls) {
  auto hint = free_.end();
  for (int g = 1; g <= num_girls; ++g) hint = free_.emplace_hint(hint, g);
}

bool GirlPool::is_free(int g) const {
  if (g < 1 || g > num_girls_) return false;
  return free_.count(g) != 0;
}

std::optional<int> GirlPool::first_free_at_or_after(int g) const {
  auto it = free_.lower_bound(g);
  if (it == free_.end()) return std::nullopt;
  return *it;
}

std::optional<int> GirlPool::last_free_at_or_before(int g) const {
  auto it = free_.upper_bound(g);
  if (it == free_.begin()) return std::nullopt;
  return *std::prev(it);
}

void GirlPool::take(int g) {
  auto it = free_.find(g);
  if (it == free_.end()) throw ProtocolViolation("girl not available");
  free_.erase(it);
}

SubsetView::SubsetView(const GirlView& base, const std::vector<int>& members)
    : base_(base), members_(members) {
  contiguous_ = true;
  for (std::size_t i = 1; i < members_.size(); ++i) {
    if (members_[i] != members_[i - 1] + 1) {
      contiguous_ = false;
      break;
    }
  }
}

int SubsetView::free_count() const {
  int c = 0;
  for (int real : members_) c += base_.is_free(real);
  return c;
}

std::optional<int> SubsetView::first_free_at_or_after(int g) const {
  const int k = count();
  if (g < 1) g = 1;
  if (g > k) return std::nullopt;
  if (contiguous_) {
    auto r = base_.first_free_at_or_after(members_[g - 1]);
    if (!r || *r > members_.back()) return std::nullopt;
    return *r - members_[0] + 1;
  }
  for (int i = g; i <= k; ++i)
    if (base_.is_free(members_[i - 1])) return i;
  return std::nullopt;
}

std::optional<int> SubsetView::last_free_at_or_before(int g) const {
  const int k = count();
  if (g > k) g = k;
  if (g < 1) return std::nullopt;
  if (contiguous_) {
    auto r = base_.last_free_at_or_before(members_[g - 1]);
    if (!r || *r < members_[0]) return std::nullopt;
    return *r - members_[0] + 1;
  }
  for (int i = g; i >= 1; --i)
    if (base_.is_free(members_[i - 1])) return i;
  return std::nullopt;
}

namespace {

// Fenwick tree over true ranks; prefix counts give relative ranks.
class Fenwick {
 public:
  explicit Fenwick(int n) : tree_(n + 1, 0) {}
  void add(int i) {
    for (; i < static_cast<int>(tree_.size()); i += i & -i) tree_[i] += 1;
  }
  int prefix(int i) const {
    int s = 0;
    for (; i > 0; i -= i & -i) s += tree_[i];
    return s;
  }

 private:
  std::vector<int> tree_;
};

}  // namespace

RunTrace run_online(const Instance& inst, const std::vector<int>& permutation,
                    OnlinePolicy& policy, std::uint64_t seed_for_record) {
  if (static_cast<int>(permutation.size()) != inst.num_boys())
    throw std::invalid_argument("run_online: permutation length != num_boys");
  if (!is_permutation(permutation))
    throw std::invalid_argument("run_online: not a permutation");

  RunTrace trace;
  trace.rng_seed = seed_for_record;
  trace.decisions.reserve(permutation.size());

  GirlPool pool(inst.num_girls());
  Fenwick arrived(inst.num_boys());

  for (int t = 1; t <= inst.num_boys(); ++t) {
    const int boy = permutation[t - 1];
    arrived.add(boy);
    ArrivalEvent ev;
    ev.time = t;
    ev.relative_rank = arrived.prefix(boy);  // 1 + better arrivals, self included
    if (inst.has_boy_weights()) ev.weight = inst.boy_weight(boy);

    Action action = policy.on_arrival(ev, pool);
    if (action) {
      if (*action < 1 || *action > inst.num_girls())
        throw ProtocolViolation("policy returned out-of-range girl");
      pool.take(*action);  // throws if not available
      trace.final_matching.add(boy, *action);
    }
    trace.decisions.push_back({t, ev.relative_rank, action});
  }
  trace.catastrophe = policy.catastrophe();
  return trace;
}

ConservativeCheck conservative_check(const RunTrace& trace, const Instance& inst) {
  ConservativeCheck out;
  int unmatched_girls = inst.num_girls();
  for (const Decision& d : trace.decisions) {
    if (d.action) {
      --unmatched_girls;
    } else {
      int pending = inst.num_boys() - d.time + 1;
      if (pending < unmatched_girls) out.per_skip_ok = false;
    }
  }
  out.maximum_matching = trace.final_matching.size() == inst.n();
  return out;
}

bool is_conservative(const RunTrace& trace, const Instance& inst) {
  return conservative_check(trace, inst).conservative();
}

// --- OrderTracker -----------------------------------------------------------

struct OrderTracker::Impl {
  struct Node {
    std::uint32_t pri;
    int size = 1;
    int flagged_sum = 0;
    bool flag = false;
    Node* left = nullptr;
    Node* right = nullptr;
  };

  std::vector<std::unique_ptr<Node>> arena;
  Node* root = nullptr;
  std::uint64_t rng_state = 0x853c49e6748fea9bULL;

  std::uint32_t next_pri() {
    rng_state ^= rng_state << 13;
    rng_state ^= rng_state >> 7;
    rng_state ^= rng_state << 17;
    return static_cast<std::uint32_t>(rng_state);
  }

  static int size(Node* n) { return n ? n->size : 0; }
  static int flagged(Node* n) { return n ? n->flagged_sum : 0; }
  static void pull(Node* n) {
    n->size = 1 + size(n->left) + size(n->right);
    n->flagged_sum = (n->flag ? 1 : 0) + flagged(n->left) + flagged(n->right);
  }

  // first `pos` elements into a, rest into b
  void split(Node* n, int pos, Node*& a, Node*& b) {
    if (!n) {
      a = b = nullptr;
      return;
    }
    if (size(n->left) >= pos) {
      split(n->left, pos, a, n->left);
      b = n;
    } else {
      split(n->right, pos - size(n->left) - 1, n->right, b);
      a = n;
    }
    pull(n);
  }

  Node* merge(Node* a, Node* b) {
    if (!a) return b;
    if (!b) return a;
    if (a->pri > b->pri) {
      a->right = merge(a->right, b);
      pull(a);
      return a;
    }
    b->left = merge(a, b->left);
    pull(b);
    return b;
  }
};

OrderTracker::OrderTracker() : impl_(std::make_unique<Impl>()) {}
OrderTracker::~OrderTracker() = default;
OrderTracker::OrderTracker(OrderTracker&&) noexcept = default;
OrderTracker& OrderTracker::operator=(OrderTracker&&) noexcept = default;

int OrderTracker::insert(int pos, bool flagged) {
  if (pos < 0 || pos > size()) throw std::out_of_range("OrderTracker::insert");
  auto node = std::make_unique<Impl::Node>();
  node->pri = impl_->next_pri();
  node->flag = flagged;
  node->flagged_sum = flagged ? 1 : 0;
  Impl::Node* raw = node.get();
  impl_->arena.push_back(std::move(node));

  Impl::Node *a, *b;
  impl_->split(impl_->root, pos, a, b);
  int before = Impl::flagged(a);
  impl_->root = impl_->merge(impl_->merge(a, raw), b);
  return before;
}

int OrderTracker::size() const { return Impl::size(impl_->root); }

}  // namespace stabsec
