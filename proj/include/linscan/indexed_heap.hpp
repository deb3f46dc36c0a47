#pragma once

#include <cassert>
#include <cstddef>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

namespace linscan {

/// Binary min-heap over the ids 0..capacity-1 with a position table, so
/// any queued id can have its key lowered in O(log n).
template <typename Key, typename Compare = std::less<Key>>
class IndexedMinHeap {
 public:
  explicit IndexedMinHeap(std::size_t capacity, Compare cmp = Compare())
      : keys_(capacity), pos_(capacity, kAbsent), cmp_(std::move(cmp)) {}

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  bool contains(std::size_t id) const { return pos_[id] != kAbsent; }
  const Key& key(std::size_t id) const { return keys_[id]; }

  void push(std::size_t id, Key key) {
    assert(!contains(id));
    keys_[id] = std::move(key);
    pos_[id] = heap_.size();
    heap_.push_back(id);
    sift_up(heap_.size() - 1);
  }

  // Requires the new key to be no greater than the current one.
  void decrease_key(std::size_t id, Key key) {
    assert(contains(id));
    keys_[id] = std::move(key);
    sift_up(pos_[id]);
  }

  std::size_t top() const { return heap_.front(); }

  std::size_t pop() {
    const std::size_t id = heap_.front();
    swap_slots(0, heap_.size() - 1);
    heap_.pop_back();
    pos_[id] = kAbsent;
    if (!heap_.empty()) sift_down(0);
    return id;
  }

 private:
  static constexpr std::size_t kAbsent = std::numeric_limits<std::size_t>::max();

  bool less(std::size_t i, std::size_t j) const { return cmp_(keys_[heap_[i]], keys_[heap_[j]]); }

  void swap_slots(std::size_t i, std::size_t j) {
    std::swap(heap_[i], heap_[j]);
    pos_[heap_[i]] = i;
    pos_[heap_[j]] = j;
  }

  void sift_up(std::size_t i) {
    while (i > 0) {
      const std::size_t parent = (i - 1) / 2;
      if (!less(i, parent)) break;
      swap_slots(i, parent);
      i = parent;
    }
  }

  void sift_down(std::size_t i) {
    const std::size_t n = heap_.size();
    for (;;) {
      const std::size_t l = 2 * i + 1;
      const std::size_t r = l + 1;
      std::size_t smallest = i;
      if (l < n && less(l, smallest)) smallest = l;
      if (r < n && less(r, smallest)) smallest = r;
      if (smallest == i) break;
      swap_slots(i, smallest);
      i = smallest;
    }
  }

  std::vector<Key> keys_;
  std::vector<std::size_t> pos_;
  std::vector<std::size_t> heap_;
  Compare cmp_;
};

}  // namespace linscan
