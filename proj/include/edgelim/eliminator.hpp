#pragma once

// Numeric successive edge elimination.
//
// A Hermitian matrix is written as D0 +/- sum_e r_e z_e z_e^H with one term
// per strictly-lower nonzero. Terms are then folded in one at a time: each
// step solves a diagonal-plus-rank-one problem on the support of the current
// z vector, applies the resulting block rotation to every pending z vector
// that touches the block, and accumulates it into Q.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <tuple>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "edgelim/error.hpp"
#include "edgelim/hypergraph.hpp"
#include "edgelim/ordering.hpp"
#include "edgelim/secular.hpp"
#include "edgelim/sparsity_pattern.hpp"

namespace edgelim {

struct LowerEntry {
  std::size_t row;  // row > col
  std::size_t col;
  Complex value;
};

/// Sparse Hermitian matrix held as its real diagonal plus strictly-lower
/// entries sorted by (col, row). Entry j of lower() is edge id j.
class HermitianInput {
 public:
  HermitianInput() = default;

  /// Duplicate positions are summed; exact zeros are dropped.
  HermitianInput(std::size_t n, std::vector<double> diagonal, std::vector<LowerEntry> lower)
      : n_(n), diagonal_(std::move(diagonal)) {
    if (diagonal_.size() != n_) throw InvalidArgument("diagonal length differs from n");
    for (const auto& e : lower) {
      if (e.row >= n_ || e.col >= n_) throw InvalidArgument("entry outside the matrix");
      if (e.row <= e.col) throw InvalidArgument("lower entries need row > col");
    }
    std::sort(lower.begin(), lower.end(), [](const LowerEntry& a, const LowerEntry& b) {
      return std::tie(a.col, a.row) < std::tie(b.col, b.row);
    });
    for (const auto& e : lower) {
      if (!lower_.empty() && lower_.back().row == e.row && lower_.back().col == e.col) {
        lower_.back().value += e.value;
      } else {
        lower_.push_back(e);
      }
    }
    std::erase_if(lower_, [](const LowerEntry& e) { return e.value == Complex(0); });
  }

  /// Rejects matrices whose entries violate a_ij = conj(a_ji) by more than
  /// tol * max|a|.
  static HermitianInput from_dense(const Eigen::MatrixXcd& a, double tol = 0) {
    if (a.rows() != a.cols()) throw InvalidArgument("matrix must be square");
    const double scale = a.cwiseAbs().maxCoeff();
    const auto n = static_cast<std::size_t>(a.rows());
    std::vector<double> diag(n);
    std::vector<LowerEntry> lower;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (std::abs(a(i, i).imag()) > tol * scale)
        throw InvalidArgument("diagonal entry " + std::to_string(i) + " is not real");
      diag[static_cast<std::size_t>(i)] = a(i, i).real();
      for (Eigen::Index j = 0; j < i; ++j) {
        if (std::abs(a(i, j) - std::conj(a(j, i))) > tol * scale)
          throw InvalidArgument("matrix is not Hermitian at (" + std::to_string(i) + "," +
                                std::to_string(j) + ")");
        if (a(i, j) != Complex(0))
          lower.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), a(i, j)});
      }
    }
    return {n, std::move(diag), std::move(lower)};
  }

  [[nodiscard]] std::size_t n() const noexcept { return n_; }
  [[nodiscard]] const std::vector<double>& diagonal() const noexcept { return diagonal_; }
  [[nodiscard]] const std::vector<LowerEntry>& lower() const noexcept { return lower_; }

  [[nodiscard]] Eigen::MatrixXcd dense() const {
    const auto N = static_cast<Eigen::Index>(n_);
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(N, N);
    for (std::size_t i = 0; i < n_; ++i)
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = diagonal_[i];
    for (const auto& e : lower_) {
      a(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) = e.value;
      a(static_cast<Eigen::Index>(e.col), static_cast<Eigen::Index>(e.row)) = std::conj(e.value);
    }
    return a;
  }

  /// Symmetric off-diagonal pattern plus nonzero diagonal positions.
  [[nodiscard]] SparsityPattern pattern() const {
    std::vector<SparsityPattern::Position> nz;
    for (std::size_t i = 0; i < n_; ++i)
      if (diagonal_[i] != 0) nz.emplace_back(i, i);
    for (const auto& e : lower_) {
      nz.emplace_back(e.row, e.col);
      nz.emplace_back(e.col, e.row);
    }
    return {n_, n_, std::move(nz)};
  }

  [[nodiscard]] double frobenius_norm() const {
    double s = 0;
    for (double d : diagonal_) s += d * d;
    for (const auto& e : lower_) s += 2 * std::norm(e.value);
    return std::sqrt(s);
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> diagonal_;
  std::vector<LowerEntry> lower_;
};

enum class GershgorinSide { Lower, Upper };

struct RankOneTerm {
  EdgeId edge = 0;
  double weight = 0;  // r_e > 0
  std::vector<std::pair<std::size_t, Complex>> z;  // sorted by index
};

/// A = diag(d0) + sign * sum_e weight_e z_e z_e^H.
struct Decomposition {
  std::size_t n = 0;
  std::vector<double> d0;
  double sign = 1;
  std::vector<RankOneTerm> terms;

  [[nodiscard]] Eigen::MatrixXcd reconstruct() const {
    const auto N = static_cast<Eigen::Index>(n);
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(N, N);
    for (std::size_t i = 0; i < n; ++i)
      a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d0[i];
    for (const auto& t : terms)
      for (const auto& [i, zi] : t.z)
        for (const auto& [j, zj] : t.z)
          a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +=
              sign * t.weight * zi * std::conj(zj);
    return a;
  }

  /// One hyperedge per term (its z support), with the term's edge id.
  [[nodiscard]] Hypergraph hypergraph() const {
    std::vector<HyperEdge> edges;
    edges.reserve(terms.size());
    for (const auto& t : terms) {
      HyperEdge e{t.edge, {}};
      for (const auto& [i, v] : t.z) e.vertices.push_back(static_cast<VertexId>(i));
      edges.push_back(std::move(e));
    }
    return {n, std::move(edges)};
  }
};

/// Lower side: z has 1 at l and e^{i theta} at k (a_kl = r e^{i theta}), d0
/// holds the lower Gershgorin endpoints a_ii - sum_j |a_ij|. Upper side: the
/// entry at k is -e^{i theta}, terms are subtracted and d0 holds a_ii + sum_j
/// |a_ij|.
inline Decomposition decompose(const HermitianInput& a, GershgorinSide side = GershgorinSide::Lower) {
  Decomposition out;
  out.n = a.n();
  out.sign = side == GershgorinSide::Lower ? 1.0 : -1.0;
  out.d0 = a.diagonal();
  out.terms.reserve(a.lower().size());
  for (std::size_t j = 0; j < a.lower().size(); ++j) {
    const auto& e = a.lower()[j];
    const double r = std::abs(e.value);
    const Complex phase = e.value / r;
    out.d0[e.row] -= out.sign * r;
    out.d0[e.col] -= out.sign * r;
    out.terms.push_back(
        {static_cast<EdgeId>(j), r, {{e.col, Complex(1)}, {e.row, out.sign * phase}}});
  }
  return out;
}

struct EliminationOptions {
  GershgorinSide gershgorin_side = GershgorinSide::Lower;
  /// z entries with |z_i| <= drop_tolerance * ||z|| are treated as zero.
  double drop_tolerance = 0;
  Heuristic ordering = Heuristic::mr();
  SecularOptions secular;
  /// Workers for the pending-vector updates; each vector is owned by one worker.
  std::size_t threads = 1;
};

struct EigResult {
  Eigen::MatrixXcd q;
  std::vector<double> lambda;  // ascending, column j of q
  double residual_eig = 0;     // ||A Q - Q Lambda||_F
  double residual_orth = 0;    // ||Q^H Q - I||_F
  Ordering ordering;
  std::vector<std::size_t> per_step_nnz;
  /// Sum of |lambda - d| over the block, eigenvalues paired in sorted order.
  std::vector<double> per_step_displacement;
  /// weight * ||z||^2 of the vector actually eliminated.
  std::vector<double> per_step_shift;
  std::size_t deflated = 0;
  double drop_tolerance = 0;
};

namespace detail {

// z vector awaiting elimination: sorted sparse storage that switches to a
// dense array once its support exceeds half the dimension.
class PendingVector {
 public:
  PendingVector(std::size_t n, const std::vector<std::pair<std::size_t, Complex>>& entries)
      : n_(n) {
    for (const auto& [i, v] : entries) {
      support_.push_back(i);
      values_.push_back(v);
    }
    maybe_densify();
  }

  [[nodiscard]] bool is_dense() const noexcept { return dense_; }
  [[nodiscard]] const std::vector<std::size_t>& support() const noexcept { return support_; }

  [[nodiscard]] Complex at(std::size_t i) const {
    if (dense_) return full_[i];
    const auto it = std::lower_bound(support_.begin(), support_.end(), i);
    if (it == support_.end() || *it != i) return {};
    return values_[static_cast<std::size_t>(it - support_.begin())];
  }

  /// True if the stored support meets the block (block_pos[i] >= 0 marks members).
  [[nodiscard]] bool touches(const std::vector<std::size_t>& block,
                             const std::vector<long>& block_pos) const {
    if (dense_) {
      for (auto i : block)
        if (present_[i]) return true;
      return false;
    }
    for (auto i : support_)
      if (block_pos[i] >= 0) return true;
    return false;
  }

  [[nodiscard]] Eigen::VectorXcd gather(const std::vector<std::size_t>& block) const {
    Eigen::VectorXcd x(static_cast<Eigen::Index>(block.size()));
    for (std::size_t b = 0; b < block.size(); ++b) x(static_cast<Eigen::Index>(b)) = at(block[b]);
    return x;
  }

  /// Overwrites the block entries; the support grows to include the block.
  void scatter(const std::vector<std::size_t>& block, const Eigen::VectorXcd& x) {
    if (dense_) {
      for (std::size_t b = 0; b < block.size(); ++b) {
        full_[block[b]] = x(static_cast<Eigen::Index>(b));
        if (!present_[block[b]]) {
          present_[block[b]] = 1;
          support_.insert(std::lower_bound(support_.begin(), support_.end(), block[b]), block[b]);
        }
      }
      return;
    }
    std::vector<std::size_t> s;
    std::vector<Complex> v;
    s.reserve(support_.size() + block.size());
    v.reserve(support_.size() + block.size());
    std::size_t a = 0;
    std::size_t b = 0;
    while (a < support_.size() || b < block.size()) {
      if (b == block.size() || (a < support_.size() && support_[a] < block[b])) {
        s.push_back(support_[a]);
        v.push_back(values_[a++]);
      } else {
        if (a < support_.size() && support_[a] == block[b]) ++a;
        s.push_back(block[b]);
        v.push_back(x(static_cast<Eigen::Index>(b++)));
      }
    }
    support_ = std::move(s);
    values_ = std::move(v);
    maybe_densify();
  }

 private:
  void maybe_densify() {
    if (dense_ || 2 * support_.size() <= n_) return;
    full_.assign(n_, Complex(0));
    present_.assign(n_, 0);
    for (std::size_t k = 0; k < support_.size(); ++k) {
      full_[support_[k]] = values_[k];
      present_[support_[k]] = 1;
    }
    values_.clear();
    values_.shrink_to_fit();
    dense_ = true;
  }

  std::size_t n_;
  bool dense_ = false;
  std::vector<std::size_t> support_;
  std::vector<Complex> values_;
  std::vector<Complex> full_;
  std::vector<char> present_;
};

}  // namespace detail

/// Observed support of the z vector about to be eliminated at `step`.
using SupportObserver =
    std::function<void(std::size_t step, EdgeId edge, const std::vector<std::size_t>& support)>;

/// Runs the elimination loop on a decomposition whose terms may have any
/// support size. `order` lists term edge ids. Residuals are measured against
/// the decomposition's reconstruction.
inline EigResult eliminate_decomposition(const Decomposition& dec, const Ordering& order,
                                         const EliminationOptions& opts = {},
                                         const SupportObserver& observer = {}) {
  if (opts.drop_tolerance < 0) throw InvalidArgument("drop tolerance must be >= 0");
  if (order.size() != dec.terms.size())
    throw InvalidArgument("ordering has " + std::to_string(order.size()) +
                          " entries but the decomposition has " +
                          std::to_string(dec.terms.size()) + " terms");
  std::unordered_map<EdgeId, std::size_t> term_of;
  for (std::size_t t = 0; t < dec.terms.size(); ++t) term_of[dec.terms[t].edge] = t;
  std::vector<std::size_t> sequence;
  std::vector<char> used(dec.terms.size(), 0);
  for (auto id : order) {
    const auto it = term_of.find(id);
    if (it == term_of.end() || used[it->second])
      throw InvalidArgument("ordering does not match the decomposition at edge " +
                            std::to_string(id));
    used[it->second] = 1;
    sequence.push_back(it->second);
  }

  const std::size_t n = dec.n;
  const auto N = static_cast<Eigen::Index>(n);
  EigResult res;
  res.ordering = order;
  res.drop_tolerance = opts.drop_tolerance;
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Identity(N, N);
  std::vector<double> diag = dec.d0;

  std::vector<detail::PendingVector> pending;
  pending.reserve(dec.terms.size());
  for (const auto& t : dec.terms) pending.emplace_back(n, t.z);

  std::vector<long> block_pos(n, -1);
  for (std::size_t step = 0; step < sequence.size(); ++step) {
    const auto& term = dec.terms[sequence[step]];
    const auto& vec = pending[sequence[step]];

    double nrm2 = 0;
    for (auto i : vec.support()) nrm2 += std::norm(vec.at(i));
    const double threshold = opts.drop_tolerance * std::sqrt(nrm2);
    std::vector<std::size_t> block;
    std::vector<Complex> zb;
    std::vector<double> db;
    for (auto i : vec.support()) {
      const Complex v = vec.at(i);
      if (std::abs(v) > threshold) {
        block.push_back(i);
        zb.push_back(v);
        db.push_back(diag[i]);
      }
    }
    if (observer) observer(step, term.edge, block);
    res.per_step_nnz.push_back(block.size());
    if (block.empty()) {
      res.per_step_displacement.push_back(0);
      res.per_step_shift.push_back(0);
      continue;
    }

    const auto eig = rank_one_eig(db, dec.sign * term.weight, zb, opts.secular);
    res.deflated += eig.deflated;

    double zz = 0;
    for (const auto& v : zb) zz += std::norm(v);
    res.per_step_shift.push_back(term.weight * zz);
    auto sorted_d = db;
    std::sort(sorted_d.begin(), sorted_d.end());
    double moved = 0;
    for (std::size_t b = 0; b < block.size(); ++b) {
      moved += std::abs(eig.lambda[b] - sorted_d[b]);
      diag[block[b]] = eig.lambda[b];
    }
    res.per_step_displacement.push_back(moved);

    for (std::size_t b = 0; b < block.size(); ++b) block_pos[block[b]] = static_cast<long>(b);

    const Eigen::MatrixXcd qh = eig.q.adjoint();
    std::vector<std::size_t> hit;
    for (std::size_t later = step + 1; later < sequence.size(); ++later)
      if (pending[sequence[later]].touches(block, block_pos)) hit.push_back(sequence[later]);
    const auto update = [&](std::size_t begin, std::size_t end) {
      for (std::size_t h = begin; h < end; ++h) {
        auto& w = pending[hit[h]];
        w.scatter(block, qh * w.gather(block));
      }
    };
    const std::size_t workers = std::min(opts.threads, hit.size() / 16);
    if (workers <= 1) {
      update(0, hit.size());
    } else {
      std::vector<std::jthread> pool;
      const std::size_t chunk = (hit.size() + workers - 1) / workers;
      for (std::size_t b = 0; b < hit.size(); b += chunk)
        pool.emplace_back(update, b, std::min(hit.size(), b + chunk));
    }

    Eigen::MatrixXcd qs(N, static_cast<Eigen::Index>(block.size()));
    for (std::size_t b = 0; b < block.size(); ++b)
      qs.col(static_cast<Eigen::Index>(b)) = q.col(static_cast<Eigen::Index>(block[b]));
    const Eigen::MatrixXcd updated = qs * eig.q;
    for (std::size_t b = 0; b < block.size(); ++b)
      q.col(static_cast<Eigen::Index>(block[b])) = updated.col(static_cast<Eigen::Index>(b));

    for (auto i : block) block_pos[i] = -1;
  }

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(),
                   [&](std::size_t a, std::size_t b) { return diag[a] < diag[b]; });
  res.q.resize(N, N);
  res.lambda.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    res.q.col(static_cast<Eigen::Index>(j)) = q.col(static_cast<Eigen::Index>(perm[j]));
    res.lambda[j] = diag[perm[j]];
  }

  const Eigen::MatrixXcd a = dec.reconstruct();
  Eigen::VectorXd lam(N);
  for (std::size_t j = 0; j < n; ++j) lam(static_cast<Eigen::Index>(j)) = res.lambda[j];
  res.residual_eig = (a * res.q - res.q * lam.asDiagonal()).norm();
  res.residual_orth = (res.q.adjoint() * res.q - Eigen::MatrixXcd::Identity(N, N)).norm();
  return res;
}

/// Ordering for a decomposition from a heuristic (Given orderings pass through).
inline Ordering choose_ordering(const Decomposition& dec, const Heuristic& h) {
  if (h.kind == HeuristicKind::Given) return h.order;
  return run_elimination(dec.hypergraph(), h).ordering;
}

/// Full eigendecomposition of a sparse Hermitian matrix by edge elimination.
inline EigResult eliminate_all(const HermitianInput& a, const EliminationOptions& opts = {}) {
  const auto dec = decompose(a, opts.gershgorin_side);
  return eliminate_decomposition(dec, choose_ordering(dec, opts.ordering), opts);
}

struct ConsistencyStep {
  std::size_t step = 0;
  EdgeId edge = 0;
  VertexSet predicted;
  VertexSet observed;
  bool violation = false;     // observed has a position outside predicted
  bool cancellation = false;  // predicted has a position the numeric vector lacks
};

struct ConsistencyReport {
  std::vector<ConsistencyStep> steps;
  std::size_t violations = 0;
  std::size_t cancellations = 0;
  EigResult numeric;

  [[nodiscard]] bool consistent() const noexcept { return violations == 0; }
  [[nodiscard]] std::size_t equal_steps() const noexcept {
    return steps.size() - static_cast<std::size_t>(std::count_if(
                              steps.begin(), steps.end(),
                              [](const ConsistencyStep& s) { return s.violation || s.cancellation; }));
  }
};

struct ConsistencyOptions {
  EliminationOptions elimination;
  /// Test hook: at this step the symbolic side drops the eliminated edge
  /// without merging it into its neighbors.
  std::optional<std::size_t> skip_symbolic_update_at;
};

/// Runs symbolic and numeric elimination side by side and compares, per
/// step, the predicted hyperedge with the observed support of the z vector.
inline ConsistencyReport predictive_consistency(const HermitianInput& a,
                                                const ConsistencyOptions& opts = {}) {
  const auto dec = decompose(a, opts.elimination.gershgorin_side);
  const auto order = choose_ordering(dec, opts.elimination.ordering);
  Hypergraph h = dec.hypergraph();

  ConsistencyReport report;
  const auto observer = [&](std::size_t step, EdgeId edge, const std::vector<std::size_t>& sup) {
    ConsistencyStep s{step, edge, h.edge(edge).vertices, {}, false, false};
    for (auto i : sup) s.observed.push_back(static_cast<VertexId>(i));
    s.violation = !sets::is_subset(s.observed, s.predicted);
    s.cancellation = !sets::is_subset(s.predicted, s.observed);
    report.violations += s.violation ? 1 : 0;
    report.cancellations += s.cancellation ? 1 : 0;
    report.steps.push_back(std::move(s));

    if (opts.skip_symbolic_update_at && *opts.skip_symbolic_update_at == step) {
      std::vector<HyperEdge> rest;
      for (const auto& e : h.edges())
        if (e.id != edge) rest.push_back(e);
      h = Hypergraph(h.n_vertices(), std::move(rest));
    } else {
      h = eliminate_edge(h, edge);
    }
  };
  report.numeric = eliminate_decomposition(dec, order, opts.elimination, observer);
  return report;
}

/// [[0, B^H], [B, 0]] for an m x n matrix B; rows 0..n-1 carry V, rows
/// n..n+m-1 carry U.
inline HermitianInput svd_embedding(const Eigen::MatrixXcd& b) {
  if (b.size() == 0 || b.cwiseAbs().maxCoeff() == 0) throw InvalidArgument("B must be nonzero");
  const auto m = static_cast<std::size_t>(b.rows());
  const auto n = static_cast<std::size_t>(b.cols());
  std::vector<LowerEntry> lower;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) != Complex(0))
        lower.push_back({n + i, j, b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))});
  return {m + n, std::vector<double>(m + n, 0.0), std::move(lower)};
}

struct SvdResult {
  Eigen::MatrixXcd u;           // m x r
  std::vector<double> sigma;    // descending, r = min(m, n)
  Eigen::MatrixXcd v;           // n x r
};

/// Reads (U, Sigma, V) off the eigenpairs of the embedding: the r largest
/// eigenvalues are the singular values and their eigenvectors are [v; u]/sqrt(2).
inline SvdResult extract_svd(std::size_t m, std::size_t n, const EigResult& eig) {
  if (eig.lambda.size() != m + n) throw InvalidArgument("eigenpairs do not match m + n");
  const std::size_t r = std::min(m, n);
  SvdResult out;
  out.u.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(r));
  out.v.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(r));
  for (std::size_t k = 0; k < r; ++k) {
    const auto col = static_cast<Eigen::Index>(m + n - 1 - k);
    out.sigma.push_back(std::max(eig.lambda[m + n - 1 - k], 0.0));
    Eigen::VectorXcd x = eig.q.col(col);
    Eigen::VectorXcd v = x.head(static_cast<Eigen::Index>(n));
    Eigen::VectorXcd u = x.tail(static_cast<Eigen::Index>(m));
    if (v.norm() > 0) v.normalize();
    if (u.norm() > 0) u.normalize();
    out.v.col(static_cast<Eigen::Index>(k)) = v;
    out.u.col(static_cast<Eigen::Index>(k)) = u;
  }
  return out;
}

}  // namespace edgelim
