#pragma once

// Eigendecomposition of a diagonal-plus-rank-one Hermitian matrix
// D + rho z z^H.
//
// Pipeline: normalize z, mirror negative rho, sort d, deflate (tiny z
// components and near-equal d), solve the secular equation on the kept
// system with a bracketed rational iteration, then rebuild eigenvectors from
// z magnitudes recomputed out of the computed roots (the Loewner formula),
// which keeps them orthogonal when roots cluster.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "edgelim/error.hpp"

namespace edgelim {

using Complex = std::complex<double>;

inline constexpr double kEps = std::numeric_limits<double>::epsilon();

struct SecularOptions {
  /// Relative deflation threshold.
  double deflation_tol = 64 * kEps;
  int max_iterations = 200;
};

/// Validated input of one secular solve: D sorted, rho > 0, ||z|| = 1.
class RankOneProblem {
 public:
  RankOneProblem(std::vector<double> d, double rho, std::vector<Complex> z)
      : d_(std::move(d)), rho_(rho), z_(std::move(z)) {
    if (d_.size() != z_.size()) throw InvalidArgument("d and z differ in length");
    if (!std::is_sorted(d_.begin(), d_.end())) throw InvalidArgument("d must be sorted");
    if (!(rho_ > 0)) throw InvalidArgument("rho must be positive");
    double nrm2 = 0;
    for (const auto& v : z_) nrm2 += std::norm(v);
    if (std::abs(std::sqrt(nrm2) - 1.0) > 1e3 * kEps * std::max<double>(1, d_.size()))
      throw InvalidArgument("z must have unit norm");
  }

  [[nodiscard]] const std::vector<double>& d() const noexcept { return d_; }
  [[nodiscard]] double rho() const noexcept { return rho_; }
  [[nodiscard]] const std::vector<Complex>& z() const noexcept { return z_; }
  [[nodiscard]] std::size_t size() const noexcept { return d_.size(); }

 private:
  std::vector<double> d_;
  double rho_;
  std::vector<Complex> z_;
};

/// Plane rotation mixing basis vectors `locked` and `kept` of the real
/// problem: b_locked' = c b_locked - s b_kept, b_kept' = s b_locked + c b_kept.
struct PlaneRotation {
  std::size_t locked;
  std::size_t kept;
  double c;
  double s;
};

struct DeflationResult {
  /// Indices (into the sorted problem) that enter the secular solve.
  std::vector<std::size_t> kept;
  /// |z| of the kept components after rotations, aligned with `kept`.
  std::vector<double> kept_weights;
  std::vector<PlaneRotation> rotations;
  /// z_j / |z_j| (1 where z_j = 0); multiplying row j by it makes z real.
  std::vector<Complex> phases;
  /// (index, eigenvalue) fixed without solving; eigenvalue equals d[index].
  std::vector<std::pair<std::size_t, double>> locked;
};

/// Locks components with |z_j| <= tol ||z||; among the rest, a component
/// whose d is within tol * scale of the next kept one is rotated into it and
/// locked. scale = max(max|d|, rho). Kept d values are then pairwise
/// separated and every kept weight is positive.
inline DeflationResult deflate(const RankOneProblem& p, double tol = 64 * kEps) {
  const std::size_t m = p.size();
  DeflationResult out;
  out.phases.assign(m, Complex(1, 0));
  std::vector<double> a(m);
  double znorm = 0;
  double dmax = 0;
  for (std::size_t j = 0; j < m; ++j) {
    a[j] = std::abs(p.z()[j]);
    if (a[j] > 0) out.phases[j] = p.z()[j] / a[j];
    znorm += a[j] * a[j];
    dmax = std::max(dmax, std::abs(p.d()[j]));
  }
  znorm = std::sqrt(znorm);
  const double gap_tol = tol * std::max(dmax, p.rho());

  std::vector<std::size_t> candidates;
  for (std::size_t j = 0; j < m; ++j) {
    if (a[j] <= tol * znorm) {
      out.locked.emplace_back(j, p.d()[j]);
    } else {
      candidates.push_back(j);
    }
  }

  // Chain near-equal neighbors: the earlier member is zeroed and locked.
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const std::size_t j = candidates[c];
    if (!out.kept.empty()) {
      const std::size_t i = out.kept.back();
      if (p.d()[j] - p.d()[i] <= gap_tol) {
        const double r = std::hypot(a[i], a[j]);
        const double cs = a[j] / r;
        const double sn = a[i] / r;
        out.rotations.push_back({i, j, cs, sn});
        a[j] = r;
        a[i] = 0;
        out.locked.emplace_back(i, p.d()[i]);
        out.kept.pop_back();
        out.kept_weights.pop_back();
      }
    }
    out.kept.push_back(j);
    out.kept_weights.push_back(a[j]);
  }
  std::sort(out.locked.begin(), out.locked.end());
  return out;
}

struct SecularRoots {
  std::vector<double> lambda;
  /// lambda_j = d_j + rho mu_j.
  std::vector<double> mu;
  /// Each root is stored as d[origin_j] + tau_j so that differences d_i -
  /// lambda_j can be formed without cancellation.
  std::vector<std::size_t> origin;
  std::vector<double> tau;
  std::vector<int> iterations;

  /// d_i - lambda_j, accurately.
  [[nodiscard]] double pole_distance(std::span<const double> d, std::size_t i,
                                     std::size_t j) const {
    return (d[i] - d[origin[j]]) - tau[j];
  }
};

namespace detail {

struct SecularEval {
  double f;
  double psi;   // pole terms at or left of the root's interval
  double dpsi;
  double phi;   // pole terms right of the interval
  double dphi;
};

inline SecularEval secular_eval(std::span<const double> d, double rho, std::span<const double> w,
                                std::size_t origin, double tau, std::size_t split) {
  SecularEval e{1, 0, 0, 0, 0};
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double delta = (d[i] - d[origin]) - tau;
    const double t = rho * w[i] / delta;
    if (i <= split) {
      e.psi += t;
      e.dpsi += t / delta;
    } else {
      e.phi += t;
      e.dphi += t / delta;
    }
  }
  e.f = 1 + e.psi + e.phi;
  return e;
}

}  // namespace detail

/// Roots of f(lambda) = 1 + rho sum_j w_j / (d_j - lambda), one per interval
/// (d_j, d_{j+1}) with d_{m+1} = +inf. Requires strictly increasing d, w > 0
/// summing to one, rho > 0.
inline SecularRoots solve_secular(std::span<const double> d, double rho,
                                  std::span<const double> w, const SecularOptions& opts = {}) {
  const std::size_t m = d.size();
  if (w.size() != m) throw InvalidArgument("d and weights differ in length");
  if (!(rho > 0)) throw InvalidArgument("rho must be positive");
  for (std::size_t j = 0; j < m; ++j) {
    if (!(w[j] > 0)) throw InvalidArgument("weight " + std::to_string(j) + " is not positive");
    if (j > 0 && !(d[j] > d[j - 1]))
      throw InvalidArgument("d is not strictly increasing at " + std::to_string(j) +
                            "; deflate first");
  }
  const double wsum = std::accumulate(w.begin(), w.end(), 0.0);

  SecularRoots out;
  out.lambda.resize(m);
  out.mu.resize(m);
  out.origin.resize(m);
  out.tau.resize(m);
  out.iterations.resize(m);

  for (std::size_t j = 0; j < m; ++j) {
    const bool last = j + 1 == m;
    std::size_t origin = j;
    double lo = 0;
    double hi = 0;
    double tau = 0;
    if (!last) {
      const double gap = d[j + 1] - d[j];
      const double mid = gap / 2;
      const auto at_mid = detail::secular_eval(d, rho, w, j, mid, j);
      if (at_mid.f >= 0) {
        origin = j;
        lo = 0;
        hi = mid;
        tau = gap * w[j] / (w[j] + w[j + 1]);  // where the two nearest poles cancel
      } else {
        origin = j + 1;
        lo = (d[j] - d[j + 1]) + mid;
        hi = 0;
        tau = (d[j] - d[j + 1]) + gap * w[j] / (w[j] + w[j + 1]);
      }
    } else {
      origin = j;
      lo = 0;
      hi = rho * wsum;
      while (detail::secular_eval(d, rho, w, j, hi, j).f < 0) hi *= 2;
      tau = rho * w[j];
    }
    if (!(tau > lo && tau < hi)) tau = lo + (hi - lo) / 2;

    int it = 0;
    for (; it < opts.max_iterations; ++it) {
      const auto e = detail::secular_eval(d, rho, w, origin, tau, j);
      const double bound = kEps * (4.0 * static_cast<double>(m) * (1 + std::abs(e.psi) + e.phi) +
                                   std::abs(tau) * (e.dpsi + e.dphi));
      if (std::abs(e.f) <= bound) break;
      if (e.f < 0) {
        lo = tau;
      } else {
        hi = tau;
      }
      if (hi - lo <= 2 * kEps * std::max(std::abs(lo), std::abs(hi))) break;

      double next = std::numeric_limits<double>::quiet_NaN();
      const double dj = (d[j] - d[origin]) - tau;
      if (!last) {
        // Two-pole model c + s/(dj - eta) + S/(dj1 - eta) matching f and f'.
        const double dj1 = (d[j + 1] - d[origin]) - tau;
        const double s = dj * dj * e.dpsi;
        const double S = dj1 * dj1 * e.dphi;
        const double c = e.f - dj * e.dpsi - dj1 * e.dphi;
        const double a = c * (dj + dj1) + s + S;
        const double b = dj * dj1 * e.f;
        double eta = std::numeric_limits<double>::quiet_NaN();
        if (c == 0) {
          eta = b / a;
        } else {
          const double disc = a * a - 4 * b * c;
          if (disc >= 0) {
            const double q = 0.5 * (a + std::copysign(std::sqrt(disc), a));
            const double r1 = q / c;
            const double r2 = q != 0 ? b / q : r1;
            eta = (r1 > dj && r1 < dj1) ? r1 : r2;
          }
        }
        next = tau + eta;
      } else {
        // One-pole model c + s/(dj - eta) matching f and f'.
        const double s = dj * dj * (e.dpsi + e.dphi);
        const double c = e.f - dj * (e.dpsi + e.dphi);
        if (c > 0) next = tau + dj + s / c;
      }
      if (!(next > lo && next < hi)) next = lo + (hi - lo) / 2;
      if (next == tau) break;
      tau = next;
    }

    out.origin[j] = origin;
    out.tau[j] = tau;
    out.iterations[j] = it;
    out.lambda[j] = d[origin] + tau;
    out.mu[j] = (origin == j ? tau : (d[origin] - d[j]) + tau) / rho;
  }
  return out;
}

/// Eigenvectors of diag(d) + rho z z^H for the roots of the kept problem.
/// Magnitudes of z are recomputed from the roots; phases come from `z`.
inline Eigen::MatrixXcd eigenvectors(std::span<const double> d, double rho,
                                     std::span<const Complex> z, const SecularRoots& roots) {
  const std::size_t m = d.size();
  std::vector<double> zhat(m);
  for (std::size_t i = 0; i < m; ++i) {
    // |z_i|^2 = (lambda_m - d_i)/rho * prod_{j<i} (lambda_j - d_i)/(d_j - d_i)
    //                                * prod_{i<=j<m-1} (lambda_j - d_i)/(d_{j+1} - d_i)
    double t = -roots.pole_distance(d, i, m - 1) / rho;
    for (std::size_t j = 0; j < i; ++j) t *= -roots.pole_distance(d, i, j) / (d[j] - d[i]);
    for (std::size_t j = i; j + 1 < m; ++j)
      t *= -roots.pole_distance(d, i, j) / (d[j + 1] - d[i]);
    zhat[i] = std::sqrt(std::max(t, 0.0));
  }

  Eigen::MatrixXcd q(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
  for (std::size_t j = 0; j < m; ++j) {
    double nrm2 = 0;
    std::vector<double> col(m);
    for (std::size_t i = 0; i < m; ++i) {
      col[i] = zhat[i] / roots.pole_distance(d, i, j);
      nrm2 += col[i] * col[i];
    }
    const double inv = 1 / std::sqrt(nrm2);
    for (std::size_t i = 0; i < m; ++i) {
      const Complex phase = z[i] == Complex(0) ? Complex(1) : z[i] / std::abs(z[i]);
      q(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = phase * (col[i] * inv);
    }
  }
  return q;
}

struct RankOneEig {
  /// Columns are eigenvectors, rows follow the caller's index order.
  Eigen::MatrixXcd q;
  /// Ascending; column j of q belongs to lambda[j].
  std::vector<double> lambda;
  /// z was zero: q is a permutation and lambda the sorted d.
  bool trivial = false;
  std::size_t deflated = 0;
};

/// Full eigendecomposition of diag(d) + rho z z^H for any d order, nonzero
/// rho and nonzero z of any norm.
inline RankOneEig rank_one_eig(std::span<const double> d_in, double rho,
                               std::span<const Complex> z_in, const SecularOptions& opts = {}) {
  const std::size_t m = d_in.size();
  if (z_in.size() != m) throw InvalidArgument("d and z differ in length");
  const auto M = static_cast<Eigen::Index>(m);

  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  double znorm2 = 0;
  for (const auto& v : z_in) znorm2 += std::norm(v);
  const double scaled_rho = rho * znorm2;
  const double sign = scaled_rho < 0 ? -1.0 : 1.0;

  RankOneEig out;
  if (znorm2 == 0 || scaled_rho == 0) {
    std::stable_sort(perm.begin(), perm.end(),
                     [&](std::size_t a, std::size_t b) { return d_in[a] < d_in[b]; });
    out.q = Eigen::MatrixXcd::Zero(M, M);
    for (std::size_t j = 0; j < m; ++j) {
      out.q(static_cast<Eigen::Index>(perm[j]), static_cast<Eigen::Index>(j)) = 1;
      out.lambda.push_back(d_in[perm[j]]);
    }
    out.trivial = true;
    return out;
  }

  // Mirrored, sorted, normalized problem: sign*D + |rho'| zhat zhat^H.
  std::stable_sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    return sign * d_in[a] < sign * d_in[b];
  });
  const double znorm = std::sqrt(znorm2);
  std::vector<double> d(m);
  std::vector<Complex> z(m);
  for (std::size_t i = 0; i < m; ++i) {
    d[i] = sign * d_in[perm[i]];
    z[i] = z_in[perm[i]] / znorm;
  }
  const RankOneProblem problem(d, std::abs(scaled_rho), z);
  const auto defl = deflate(problem, opts.deflation_tol);
  out.deflated = m - defl.kept.size();

  // Real orthogonal basis after rotations; columns follow the sorted index.
  Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(M, M);
  for (const auto& r : defl.rotations) {
    const Eigen::VectorXd bl = basis.col(static_cast<Eigen::Index>(r.locked));
    const Eigen::VectorXd bk = basis.col(static_cast<Eigen::Index>(r.kept));
    basis.col(static_cast<Eigen::Index>(r.locked)) = r.c * bl - r.s * bk;
    basis.col(static_cast<Eigen::Index>(r.kept)) = r.s * bl + r.c * bk;
  }

  Eigen::MatrixXd vectors(M, M);  // real eigenvectors in sorted coordinates
  std::vector<double> values(m);
  std::size_t col = 0;
  for (const auto& [idx, value] : defl.locked) {
    vectors.col(static_cast<Eigen::Index>(col)) = basis.col(static_cast<Eigen::Index>(idx));
    values[col++] = value;
  }

  const std::size_t k = defl.kept.size();
  if (k > 0) {
    double wsum = 0;
    for (double a : defl.kept_weights) wsum += a * a;
    std::vector<double> dk(k);
    std::vector<double> wk(k);
    std::vector<Complex> zk(k);
    for (std::size_t i = 0; i < k; ++i) {
      dk[i] = d[defl.kept[i]];
      wk[i] = defl.kept_weights[i] * defl.kept_weights[i] / wsum;
      zk[i] = defl.kept_weights[i] / std::sqrt(wsum);
    }
    const double rho_k = problem.rho() * wsum;
    const auto roots = solve_secular(dk, rho_k, wk, opts);
    const Eigen::MatrixXcd uk = eigenvectors(dk, rho_k, zk, roots);
    Eigen::MatrixXd kept_basis(M, static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i)
      kept_basis.col(static_cast<Eigen::Index>(i)) =
          basis.col(static_cast<Eigen::Index>(defl.kept[i]));
    vectors.rightCols(static_cast<Eigen::Index>(k)) = kept_basis * uk.real();
    for (std::size_t i = 0; i < k; ++i) values[col + i] = roots.lambda[i];
  }

  // Undo mirror, sort ascending, reattach phases and the caller's row order.
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return sign * values[a] < sign * values[b];
  });
  out.q.resize(M, M);
  out.lambda.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    const auto src = static_cast<Eigen::Index>(order[j]);
    out.lambda[j] = sign * values[order[j]];
    for (std::size_t i = 0; i < m; ++i)
      out.q(static_cast<Eigen::Index>(perm[i]), static_cast<Eigen::Index>(j)) =
          defl.phases[i] * vectors(static_cast<Eigen::Index>(i), src);
  }
  return out;
}

}  // namespace edgelim
