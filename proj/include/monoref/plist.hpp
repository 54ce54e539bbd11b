#pragma once

#include <cstddef>
#include <iterator>
#include <memory>
#include <utility>

#include "monoref/result.hpp"

namespace monoref {

/// Immutable singly-linked list with structural sharing. `cons` is O(1) and
/// never disturbs other holders of the tail. Environments, type environments
/// and the call stack are all built on this.
template <class T>
class PList {
 public:
  struct Node;

  PList() = default;
  PList(const PList&) = default;
  PList(PList&&) noexcept = default;
  PList& operator=(const PList&) = default;
  PList& operator=(PList&&) noexcept = default;

  // Unlinks uniquely-owned nodes iteratively so that very long lists
  // (deep call stacks) do not recurse in the destructor.
  ~PList() {
    while (node_ && node_.use_count() == 1) {
      std::shared_ptr<Node> next = std::move(node_->tail.node_);
      node_ = std::move(next);
    }
  }

  [[nodiscard]] static PList cons(T head, PList tail) {
    return PList(std::make_shared<Node>(Node{std::move(head), std::move(tail)}));
  }

  [[nodiscard]] bool empty() const { return node_ == nullptr; }
  [[nodiscard]] const T& head() const { return node_->head; }
  [[nodiscard]] const PList& tail() const { return node_->tail; }

  [[nodiscard]] std::size_t size() const {
    std::size_t n = 0;
    for (const Node* p = node_.get(); p != nullptr; p = p->tail.node_.get()) ++n;
    return n;
  }

  [[nodiscard]] bool same_node(const PList& other) const { return node_ == other.node_; }

  class const_iterator {
   public:
    using iterator_category = std::forward_iterator_tag;
    using value_type = T;
    using difference_type = std::ptrdiff_t;
    using pointer = const T*;
    using reference = const T&;

    const_iterator() = default;
    explicit const_iterator(const Node* n) : node_(n) {}
    reference operator*() const { return node_->head; }
    pointer operator->() const { return &node_->head; }
    const_iterator& operator++() {
      node_ = node_->tail.node_.get();
      return *this;
    }
    const_iterator operator++(int) {
      auto copy = *this;
      ++*this;
      return copy;
    }
    friend bool operator==(const const_iterator&, const const_iterator&) = default;

   private:
    const Node* node_ = nullptr;
  };

  [[nodiscard]] const_iterator begin() const { return const_iterator(node_.get()); }
  [[nodiscard]] const_iterator end() const { return const_iterator(); }

 private:
  explicit PList(std::shared_ptr<Node> n) : node_(std::move(n)) {}
  std::shared_ptr<Node> node_;
};

template <class T>
struct PList<T>::Node {
  T head;
  PList tail;
};

template <class T>
[[nodiscard]] bool operator==(const PList<T>& a, const PList<T>& b) {
  if (a.same_node(b)) return true;
  auto i = a.begin();
  auto j = b.begin();
  for (; i != a.end() && j != b.end(); ++i, ++j) {
    if (!(*i == *j)) return false;
  }
  return i == a.end() && j == b.end();
}

/// Association list, newest binding first.
template <class K, class V>
using AssocList = PList<std::pair<K, V>>;

template <class K, class V>
[[nodiscard]] AssocList<K, V> extend(K key, V value, AssocList<K, V> tail) {
  return AssocList<K, V>::cons({std::move(key), std::move(value)}, std::move(tail));
}

/// First match wins; an absent key is Stuck.
template <class K, class V>
[[nodiscard]] Result<V> lookup(const K& key, const AssocList<K, V>& list) {
  for (const auto& [k, v] : list) {
    if (k == key) return v;
  }
  return Failure::Stuck;
}

template <class K, class V>
[[nodiscard]] const V* find(const K& key, const AssocList<K, V>& list) {
  for (const auto& entry : list) {
    if (entry.first == key) return &entry.second;
  }
  return nullptr;
}

}  // namespace monoref
