#pragma once

#include "ncx/scalar.hpp"

#include <functional>
#include <queue>
#include <thread>
#include <vector>

namespace ncx {

template <class F>
using SparseVec = std::vector<std::pair<int, F>>;  // sorted by row

// Incremental semi-echelon over a field. Columns are processed in the given order;
// each pivot column is keyed by its least row and scaled to leading 1.
template <class F>
class Echelon {
 public:
  explicit Echelon(int nrows) : nrows_(nrows), pivot_(nrows, -1), acc_(nrows), mark_(nrows, 0) {}

  // returns true if the column is independent of the previous ones
  bool insert(const SparseVec<F>& col) {
    std::priority_queue<int, std::vector<int>, std::greater<int>> heap;
    for (auto& [r, v] : col) {
      if (is_zero(v)) continue;
      if (!mark_[r]) {
        mark_[r] = 1;
        acc_[r] = v;
        heap.push(r);
      } else {
        acc_[r] += v;
      }
    }
    while (!heap.empty()) {
      int r = heap.top();
      heap.pop();
      mark_[r] = 0;
      if (is_zero(acc_[r])) continue;
      int p = pivot_[r];
      if (p < 0) {
        // new pivot from r and everything left in the heap
        SparseVec<F> row;
        F s = F(1) / acc_[r];
        row.push_back({r, F(1)});
        acc_[r] = F(0);
        std::vector<int> rest;
        while (!heap.empty()) {
          int k = heap.top();
          heap.pop();
          mark_[k] = 0;
          if (!is_zero(acc_[k])) row.push_back({k, acc_[k] * s});
          acc_[k] = F(0);
        }
        pivot_[r] = (int)rows_.size();
        rows_.push_back(std::move(row));
        return true;
      }
      F c = acc_[r];
      acc_[r] = F(0);
      const auto& pr = rows_[p];
      for (size_t k = 1; k < pr.size(); ++k) {
        int rr = pr[k].first;
        if (!mark_[rr]) {
          mark_[rr] = 1;
          acc_[rr] = -(c * pr[k].second);
          heap.push(rr);
        } else {
          acc_[rr] -= c * pr[k].second;
        }
      }
    }
    return false;
  }

  int rank() const { return (int)rows_.size(); }
  int nrows() const { return nrows_; }

 private:
  int nrows_;
  std::vector<int> pivot_;
  std::vector<SparseVec<F>> rows_;
  std::vector<F> acc_;
  std::vector<char> mark_;
};

template <class F>
int sparse_rank(const std::vector<SparseVec<F>>& cols, int nrows) {
  Echelon<F> e(nrows);
  for (auto& c : cols) e.insert(c);
  return e.rank();
}

// Runs fn(i) for i in [0, n) on up to `threads` workers; each index is handled exactly once and
// results must be written to caller-owned slots, so output does not depend on scheduling.
inline void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  int w = std::min(threads, n);
  for (int t = 0; t < w; ++t)
    pool.emplace_back([&, t] {
      for (int i = t; i < n; i += w) fn(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace ncx
