#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "edgelim/error.hpp"

namespace edgelim {

/// Nonzero structure of an n_rows x n_cols matrix (0-based positions).
class SparsityPattern {
 public:
  using Position = std::pair<std::size_t, std::size_t>;

  SparsityPattern() = default;

  /// Duplicate positions are merged; out-of-range positions are rejected.
  SparsityPattern(std::size_t n_rows, std::size_t n_cols, std::vector<Position> nonzeros)
      : n_rows_(n_rows), n_cols_(n_cols), nonzeros_(std::move(nonzeros)) {
    for (const auto& [r, c] : nonzeros_) {
      if (r >= n_rows_ || c >= n_cols_)
        throw InvalidArgument("pattern position (" + std::to_string(r) + "," +
                              std::to_string(c) + ") outside " + std::to_string(n_rows_) +
                              "x" + std::to_string(n_cols_));
    }
    std::sort(nonzeros_.begin(), nonzeros_.end());
    nonzeros_.erase(std::unique(nonzeros_.begin(), nonzeros_.end()), nonzeros_.end());
  }

  [[nodiscard]] std::size_t n_rows() const noexcept { return n_rows_; }
  [[nodiscard]] std::size_t n_cols() const noexcept { return n_cols_; }
  [[nodiscard]] std::size_t nnz() const noexcept { return nonzeros_.size(); }
  [[nodiscard]] bool is_square() const noexcept { return n_rows_ == n_cols_; }

  /// Sorted row-major.
  [[nodiscard]] const std::vector<Position>& nonzeros() const noexcept { return nonzeros_; }

  [[nodiscard]] bool contains(std::size_t row, std::size_t col) const {
    return std::binary_search(nonzeros_.begin(), nonzeros_.end(), Position{row, col});
  }

  [[nodiscard]] SparsityPattern transpose() const {
    std::vector<Position> t;
    t.reserve(nonzeros_.size());
    for (const auto& [r, c] : nonzeros_) t.emplace_back(c, r);
    return {n_cols_, n_rows_, std::move(t)};
  }

  [[nodiscard]] bool is_symmetric() const { return is_square() && transpose() == *this; }

  /// Same pattern with every diagonal position present.
  [[nodiscard]] SparsityPattern with_full_diagonal() const {
    auto nz = nonzeros_;
    for (std::size_t i = 0; i < std::min(n_rows_, n_cols_); ++i) nz.emplace_back(i, i);
    return {n_rows_, n_cols_, std::move(nz)};
  }

  bool operator==(const SparsityPattern&) const = default;

 private:
  std::size_t n_rows_ = 0;
  std::size_t n_cols_ = 0;
  std::vector<Position> nonzeros_;
};

/// True if the undirected graph of a square pattern is connected
/// (equivalently: the symmetric pattern is irreducible).
inline bool is_connected(const SparsityPattern& p) {
  const std::size_t n = p.n_rows();
  if (n == 0) return true;
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& [r, c] : p.nonzeros()) {
    if (r == c) continue;
    adj[r].push_back(c);
    adj[c].push_back(r);
  }
  std::vector<char> seen(n, 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    for (auto w : adj[v]) {
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        stack.push_back(w);
      }
    }
  }
  return reached == n;
}

}  // namespace edgelim
