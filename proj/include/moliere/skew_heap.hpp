#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace moliere {

// Meldable min-heap with the skew-heap merge rule: merge down the right
// spines, swapping children at every visited node. Nodes live in a pool so
// the merge loop stays iterative.
template <typename T, typename Less = std::less<T>>
class SkewHeap {
 public:
  bool empty() const { return root_ < 0; }
  std::size_t size() const { return size_; }

  void push(T value) {
    int node = static_cast<int>(pool_.size());
    pool_.push_back({std::move(value), -1, -1});
    root_ = meld(root_, node);
    ++size_;
  }

  const T& top() const { return pool_[root_].value; }

  T pop() {
    T out = std::move(pool_[root_].value);
    root_ = meld(pool_[root_].left, pool_[root_].right);
    --size_;
    if (size_ == 0) {
      pool_.clear();
      root_ = -1;
    }
    return out;
  }

  void merge(SkewHeap&& other) {
    int offset = static_cast<int>(pool_.size());
    for (auto& node : other.pool_) {
      if (node.left >= 0) node.left += offset;
      if (node.right >= 0) node.right += offset;
      pool_.push_back(std::move(node));
    }
    if (other.root_ >= 0) root_ = meld(root_, other.root_ + offset);
    size_ += other.size_;
    other.pool_.clear();
    other.root_ = -1;
    other.size_ = 0;
  }

 private:
  struct Node {
    T value;
    int left = -1, right = -1;
  };

  int meld(int a, int b) {
    if (a < 0) return b;
    if (b < 0) return a;
    int head = -1;
    int* attach = &head;
    while (a >= 0 && b >= 0) {
      if (less_(pool_[b].value, pool_[a].value)) std::swap(a, b);
      // a wins; its left subtree moves right before descending
      *attach = a;
      int next = pool_[a].right;
      pool_[a].right = pool_[a].left;
      attach = &pool_[a].left;
      a = next;
    }
    *attach = a >= 0 ? a : b;
    return head;
  }

  std::vector<Node> pool_;
  int root_ = -1;
  std::size_t size_ = 0;
  Less less_;
};

}  // namespace moliere
