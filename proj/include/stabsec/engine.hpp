#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "stabsec/core.hpp"

namespace stabsec {

// What a policy sees about an arrival: the time and the relative rank among
// the boys arrived so far (1 = best so far). Weighted-boy settings also
// reveal the arriving boy's weight; nothing else about identity leaks.
struct ArrivalEvent {
  int time = 0;
  int relative_rank = 0;
  std::optional<double> weight;
};

// match girl index, or nullopt to skip
using Action = std::optional<int>;

enum class Catastrophe { TypeI, TypeII, TypeIII };

const char* catastrophe_name(std::optional<Catastrophe> c);

// Read-only availability view, in the index space the policy operates in.
// Wrappers remap it (mirror, subset) before handing it to inner policies.
class GirlView {
 public:
  virtual ~GirlView() = default;
  virtual int count() const = 0;  // girls in this view's index space
  virtual bool is_free(int g) const = 0;
  virtual int free_count() const = 0;
  virtual std::optional<int> first_free_at_or_after(int g) const = 0;
  virtual std::optional<int> last_free_at_or_before(int g) const = 0;
  std::optional<int> first_free() const { return first_free_at_or_after(1); }
  std::optional<int> last_free() const { return last_free_at_or_before(count()); }
};

// Engine-owned master availability set.
class GirlPool : public GirlView {
 public:
  explicit GirlPool(int num_girls);
  int count() const override { return num_girls_; }
  bool is_free(int g) const override;
  int free_count() const override { return static_cast<int>(free_.size()); }
  std::optional<int> first_free_at_or_after(int g) const override;
  std::optional<int> last_free_at_or_before(int g) const override;
  void take(int g);  // engine only

 private:
  int num_girls_;
  std::set<int> free_;
};

// Index reversal g -> n+1-g over a base view.
class MirrorView : public GirlView {
 public:
  MirrorView(const GirlView& base, int n) : base_(base), n_(n) {}
  int count() const override { return n_; }
  bool is_free(int g) const override { return base_.is_free(n_ + 1 - g); }
  int free_count() const override { return base_.free_count(); }
  std::optional<int> first_free_at_or_after(int g) const override {
    auto r = base_.last_free_at_or_before(n_ + 1 - g);
    if (!r) return std::nullopt;
    return n_ + 1 - *r;
  }
  std::optional<int> last_free_at_or_before(int g) const override {
    auto r = base_.first_free_at_or_after(n_ + 1 - g);
    if (!r) return std::nullopt;
    return n_ + 1 - *r;
  }

 private:
  const GirlView& base_;
  int n_;
};

// View over a sorted subset of base indices, renumbered 1..k. Contiguous
// subsets delegate range queries to the base; general subsets scan.
class SubsetView : public GirlView {
 public:
  SubsetView(const GirlView& base, const std::vector<int>& members);
  int count() const override { return static_cast<int>(members_.size()); }
  bool is_free(int g) const override {
    return g >= 1 && g <= count() && base_.is_free(members_[g - 1]);
  }
  int free_count() const override;
  std::optional<int> first_free_at_or_after(int g) const override;
  std::optional<int> last_free_at_or_before(int g) const override;

 private:
  const GirlView& base_;
  const std::vector<int>& members_;  // ascending real indices
  bool contiguous_;
};

class OnlinePolicy {
 public:
  virtual ~OnlinePolicy() = default;
  // Decide for the arrival described by ev; girls lists what is still free.
  // Returning a non-free girl is a protocol violation and aborts the run.
  virtual Action on_arrival(const ArrivalEvent& ev, const GirlView& girls) = 0;
  virtual std::optional<Catastrophe> catastrophe() const { return std::nullopt; }
};

struct Decision {
  int time = 0;
  int relative_rank = 0;
  Action action;  // girl index or nullopt (skip)
};

struct RunTrace {
  std::vector<Decision> decisions;
  Matching final_matching;
  std::optional<Catastrophe> catastrophe;
  std::uint64_t rng_seed = 0;
};

struct ProtocolViolation : std::logic_error {
  using std::logic_error::logic_error;
};

// Drives one arrival sequence through a policy. The engine owns the
// availability set, derives the relative-rank stream from the permutation,
// and enforces irrevocability; the policy never sees true ranks.
RunTrace run_online(const Instance& inst, const std::vector<int>& permutation,
                    OnlinePolicy& policy, std::uint64_t seed_for_record = 0);

struct ConservativeCheck {
  bool per_skip_ok = true;      // every skip had pending boys >= unmatched girls
  bool maximum_matching = false;
  bool conservative() const { return per_skip_ok || maximum_matching; }
};

ConservativeCheck conservative_check(const RunTrace& trace, const Instance& inst);
bool is_conservative(const RunTrace& trace, const Instance& inst);

// Ordered-sequence tracker (implicit treap): insert an element at a given
// 0-based position, returning how many flagged elements precede it. Lets a
// policy rank a new arrival against a marked subset of earlier arrivals
// using only relative ranks.
class OrderTracker {
 public:
  OrderTracker();
  ~OrderTracker();
  OrderTracker(OrderTracker&&) noexcept;
  OrderTracker& operator=(OrderTracker&&) noexcept;
  int insert(int pos, bool flagged);  // returns flagged count in [0, pos)
  int size() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace stabsec
