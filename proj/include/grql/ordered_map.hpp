#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

namespace grql {

/// Insertion-ordered associative container backed by a vector.
///
/// Records in this library are small (a handful of labels), so linear lookup
/// beats a tree and keeps iteration order equal to declaration order.
template <typename Key, typename Value>
class OrderedMap {
 public:
  using value_type = std::pair<Key, Value>;
  using container = std::vector<value_type>;
  using iterator = typename container::iterator;
  using const_iterator = typename container::const_iterator;

  OrderedMap() = default;
  OrderedMap(std::initializer_list<value_type> init) {
    for (const auto& kv : init) insert_or_assign(kv.first, kv.second);
  }

  iterator begin() { return items_.begin(); }
  iterator end() { return items_.end(); }
  const_iterator begin() const { return items_.begin(); }
  const_iterator end() const { return items_.end(); }

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }

  const_iterator find(const Key& key) const {
    return std::find_if(items_.begin(), items_.end(),
                        [&](const value_type& kv) { return kv.first == key; });
  }
  iterator find(const Key& key) {
    return std::find_if(items_.begin(), items_.end(),
                        [&](const value_type& kv) { return kv.first == key; });
  }

  bool contains(const Key& key) const { return find(key) != items_.end(); }

  const Value* get(const Key& key) const {
    auto it = find(key);
    return it == items_.end() ? nullptr : &it->second;
  }
  Value* get(const Key& key) {
    auto it = find(key);
    return it == items_.end() ? nullptr : &it->second;
  }

  /// Appends a new key; returns false (and leaves the map untouched) on a
  /// duplicate.
  bool insert(Key key, Value value) {
    if (contains(key)) return false;
    items_.emplace_back(std::move(key), std::move(value));
    return true;
  }

  void insert_or_assign(Key key, Value value) {
    if (auto* existing = get(key)) {
      *existing = std::move(value);
    } else {
      items_.emplace_back(std::move(key), std::move(value));
    }
  }

  bool erase(const Key& key) {
    auto it = find(key);
    if (it == items_.end()) return false;
    items_.erase(it);
    return true;
  }

  bool operator==(const OrderedMap&) const = default;

 private:
  container items_;
};

}  // namespace grql
