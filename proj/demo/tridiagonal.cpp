// Eigendecomposition of a small complex tridiagonal matrix.
#include <cstdio>

#include "edgelim/eliminator.hpp"

int main() {
  using namespace edgelim;
  const std::size_t n = 8;
  std::vector<double> diag(n);
  std::vector<LowerEntry> lower;
  for (std::size_t i = 0; i < n; ++i) diag[i] = 2.0 + 0.5 * static_cast<double>(i);
  for (std::size_t i = 0; i + 1 < n; ++i) lower.push_back({i + 1, i, Complex(-1.0, 0.25 * static_cast<double>(i))});

  const HermitianInput a(n, diag, lower);
  const auto r = eliminate_all(a, {.ordering = Heuristic::mr()});

  std::printf("ordering:");
  for (auto e : r.ordering) std::printf(" %lld", static_cast<long long>(e));
  std::printf("\neigenvalues:\n");
  for (double l : r.lambda) std::printf("  % .15f\n", l);
  std::printf("residual_eig=%.3e residual_orth=%.3e\n", r.residual_eig, r.residual_orth);
}
