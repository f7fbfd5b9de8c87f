#pragma once

// Matrix Market I/O, inline graph specs and the experiment graph generators.

#include <array>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "edgelim/eliminator.hpp"
#include "edgelim/error.hpp"
#include "edgelim/random.hpp"
#include "edgelim/sparsity_pattern.hpp"

namespace edgelim {

namespace detail {

inline std::string lower_case(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

template <class T>
bool parse_number(const std::string& s, T& out) {
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace detail

struct MatrixMarketFile {
  std::string field;     // real | complex | integer | pattern
  std::string symmetry;  // symmetric | hermitian
  std::size_t n = 0;
  /// Symmetric pattern of the off-diagonal entries plus stored diagonal positions.
  SparsityPattern pattern;
  /// Present unless field is pattern.
  std::optional<HermitianInput> matrix;
};

/// Coordinate Matrix Market with symmetric or hermitian symmetry. Entries
/// above the diagonal are folded into the lower triangle; duplicates are summed.
inline MatrixMarketFile read_matrix_market(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError(1, "empty input");
  ++lineno;
  std::istringstream hs(line);
  std::string banner, object, format, field, symmetry;
  hs >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket") throw ParseError(lineno, "missing %%MatrixMarket banner");
  object = detail::lower_case(object);
  format = detail::lower_case(format);
  field = detail::lower_case(field);
  symmetry = detail::lower_case(symmetry);
  if (object != "matrix") throw ParseError(lineno, "object must be 'matrix', got '" + object + "'");
  if (format != "coordinate")
    throw ParseError(lineno, "only coordinate format is supported, got '" + format + "'");
  if (field != "real" && field != "complex" && field != "integer" && field != "pattern")
    throw ParseError(lineno, "unknown field '" + field + "'");
  if (field == "complex" && symmetry != "hermitian")
    throw ParseError(lineno, "complex matrices must be declared hermitian, got '" + symmetry + "'");
  if (field != "complex" && symmetry != "symmetric" && symmetry != "hermitian")
    throw ParseError(lineno, "expected symmetric or hermitian matrix, got '" + symmetry + "'");

  auto next_data_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '%') continue;
      return true;
    }
    return false;
  };

  if (!next_data_line()) throw ParseError(lineno, "missing size line");
  std::size_t rows = 0, cols = 0, nnz = 0;
  {
    std::istringstream ss(line);
    std::string extra;
    if (!(ss >> rows >> cols >> nnz) || (ss >> extra))
      throw ParseError(lineno, "size line must be 'rows cols entries'");
  }
  if (rows != cols) throw ParseError(lineno, "symmetric matrix must be square");

  const bool has_values = field != "pattern";
  const bool is_complex = field == "complex";
  std::vector<double> diag(rows, 0.0);
  std::map<std::pair<std::size_t, std::size_t>, Complex> lower;
  std::vector<SparsityPattern::Position> positions;
  for (std::size_t k = 0; k < nnz; ++k) {
    if (!next_data_line())
      throw ParseError(lineno, "expected " + std::to_string(nnz) + " entries, found " +
                                   std::to_string(k));
    std::istringstream ss(line);
    long long i = 0, j = 0;
    double re = 0, im = 0;
    if (!(ss >> i >> j)) throw ParseError(lineno, "malformed entry");
    if (has_values && !(ss >> re)) throw ParseError(lineno, "missing value");
    if (is_complex && !(ss >> im)) throw ParseError(lineno, "missing imaginary part");
    std::string extra;
    if (ss >> extra) throw ParseError(lineno, "trailing data '" + extra + "'");
    if (i < 1 || j < 1 || static_cast<std::size_t>(i) > rows || static_cast<std::size_t>(j) > cols)
      throw ParseError(lineno, "index (" + std::to_string(i) + "," + std::to_string(j) +
                                   ") outside " + std::to_string(rows) + "x" + std::to_string(cols));
    auto r = static_cast<std::size_t>(i - 1);
    auto c = static_cast<std::size_t>(j - 1);
    Complex v(re, im);
    if (r == c) {
      if (im != 0) throw ParseError(lineno, "hermitian diagonal entry has nonzero imaginary part");
      diag[r] += re;
      positions.emplace_back(r, r);
      continue;
    }
    if (r < c) {
      std::swap(r, c);
      v = std::conj(v);
    }
    lower[{r, c}] += v;
    positions.emplace_back(r, c);
    positions.emplace_back(c, r);
  }
  if (next_data_line()) throw ParseError(lineno, "more entries than declared");

  MatrixMarketFile out;
  out.field = field;
  out.symmetry = symmetry;
  out.n = rows;
  out.pattern = SparsityPattern(rows, rows, std::move(positions));
  if (has_values) {
    std::vector<LowerEntry> entries;
    for (const auto& [pos, v] : lower) entries.push_back({pos.first, pos.second, v});
    out.matrix = HermitianInput(rows, std::move(diag), std::move(entries));
  }
  return out;
}

/// Lower triangle of a symmetric pattern (general storage otherwise).
inline void write_pattern_mm(std::ostream& os, const SparsityPattern& p) {
  const bool sym = p.is_symmetric();
  std::vector<SparsityPattern::Position> out;
  for (const auto& [r, c] : p.nonzeros())
    if (!sym || r >= c) out.emplace_back(r, c);
  os << "%%MatrixMarket matrix coordinate pattern " << (sym ? "symmetric" : "general") << "\n";
  os << p.n_rows() << " " << p.n_cols() << " " << out.size() << "\n";
  for (const auto& [r, c] : out) os << r + 1 << " " << c + 1 << "\n";
}

/// Real symmetric when every entry is real, complex hermitian otherwise.
inline void write_hermitian_mm(std::ostream& os, const HermitianInput& a) {
  const bool real = std::all_of(a.lower().begin(), a.lower().end(),
                                [](const LowerEntry& e) { return e.value.imag() == 0; });
  std::size_t count = a.lower().size();
  for (double d : a.diagonal()) count += d != 0 ? 1 : 0;
  os << "%%MatrixMarket matrix coordinate " << (real ? "real symmetric" : "complex hermitian")
     << "\n";
  os << a.n() << " " << a.n() << " " << count << "\n";
  os << std::setprecision(17);
  auto put = [&](std::size_t r, std::size_t c, Complex v) {
    os << r + 1 << " " << c + 1 << " " << v.real();
    if (!real) os << " " << v.imag();
    os << "\n";
  };
  for (std::size_t i = 0; i < a.n(); ++i)
    if (a.diagonal()[i] != 0) put(i, i, a.diagonal()[i]);
  for (const auto& e : a.lower()) put(e.row, e.col, e.value);
}

/// Dense complex matrix in array (column-major) format.
inline void write_dense_mm(std::ostream& os, const Eigen::MatrixXcd& m) {
  os << "%%MatrixMarket matrix array complex general\n";
  os << m.rows() << " " << m.cols() << "\n";
  os << std::setprecision(17);
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      os << m(i, j).real() << " " << m(i, j).imag() << "\n";
}

// Graph specs -----------------------------------------------------------------

enum class GraphKind { Chain, Lattice, DiscTriangulation, RandomSym };

/// Parsed `--spec` value:
///   chain:N
///   lattice:RxC
///   disc:P[:seedS]
///   randsym:N:DENSITY[:seedS]   (DENSITY a decimal or a fraction like 8/128)
struct GraphSpec {
  GraphKind kind = GraphKind::Chain;
  std::size_t n = 0;  // nodes (chain, randsym) or points (disc)
  std::size_t rows = 0;
  std::size_t cols = 0;
  double density = 0;
  std::uint64_t seed = 0;

  static GraphSpec chain(std::size_t n) {
    GraphSpec s;
    s.kind = GraphKind::Chain;
    s.n = n;
    s.validate();
    return s;
  }
  static GraphSpec lattice(std::size_t rows, std::size_t cols) {
    GraphSpec s;
    s.kind = GraphKind::Lattice;
    s.rows = rows;
    s.cols = cols;
    s.validate();
    return s;
  }
  static GraphSpec disc(std::size_t points, std::uint64_t seed) {
    GraphSpec s;
    s.kind = GraphKind::DiscTriangulation;
    s.n = points;
    s.seed = seed;
    s.validate();
    return s;
  }
  static GraphSpec random_sym(std::size_t n, double density, std::uint64_t seed) {
    GraphSpec s;
    s.kind = GraphKind::RandomSym;
    s.n = n;
    s.density = density;
    s.seed = seed;
    s.validate();
    return s;
  }

  void validate() const {
    switch (kind) {
      case GraphKind::Chain:
      case GraphKind::RandomSym:
        if (n < 2) throw InvalidArgument("graph needs at least 2 nodes");
        if (kind == GraphKind::RandomSym && !(density > 0 && density <= 1))
          throw InvalidArgument("density must lie in (0, 1]");
        break;
      case GraphKind::Lattice:
        if (rows < 2 || cols < 2) throw InvalidArgument("lattice dimensions must be >= 2");
        break;
      case GraphKind::DiscTriangulation:
        if (n < 3) throw InvalidArgument("disc triangulation needs at least 3 points");
        break;
    }
  }

  static GraphSpec parse(const std::string& text) {
    const auto parts = detail::split(text, ':');
    const auto bad = [&](const std::string& why) {
      return InvalidArgument("bad graph spec '" + text + "': " + why);
    };
    auto count = [&](const std::string& s) {
      std::size_t v = 0;
      if (!detail::parse_number(s, v)) throw bad("'" + s + "' is not a count");
      return v;
    };
    auto seed_of = [&](std::size_t idx) -> std::uint64_t {
      if (parts.size() <= idx) return 0;
      std::string s = parts[idx];
      if (s.rfind("seed", 0) == 0) s = s.substr(4);
      std::uint64_t v = 0;
      if (!detail::parse_number(s, v)) throw bad("'" + parts[idx] + "' is not a seed");
      return v;
    };
    const auto kind = detail::lower_case(parts[0]);
    try {
      if (kind == "chain" && parts.size() == 2) return chain(count(parts[1]));
      if (kind == "lattice" && parts.size() == 2) {
        const auto dims = detail::split(detail::lower_case(parts[1]), 'x');
        if (dims.size() != 2) throw bad("lattice needs RxC");
        return lattice(count(dims[0]), count(dims[1]));
      }
      if (kind == "disc" && (parts.size() == 2 || parts.size() == 3))
        return disc(count(parts[1]), seed_of(2));
      if (kind == "randsym" && (parts.size() == 3 || parts.size() == 4)) {
        double density = 0;
        const auto frac = detail::split(parts[2], '/');
        if (frac.size() == 2) {
          double num = 0, den = 0;
          if (!detail::parse_number(frac[0], num) || !detail::parse_number(frac[1], den) || den == 0)
            throw bad("bad density fraction");
          density = num / den;
        } else if (!detail::parse_number(parts[2], density)) {
          throw bad("'" + parts[2] + "' is not a density");
        }
        return random_sym(count(parts[1]), density, seed_of(3));
      }
    } catch (const InvalidArgument& e) {
      if (std::string(e.what()).rfind("bad graph spec", 0) == 0) throw;
      throw bad(e.what());
    }
    throw bad("expected chain:N, lattice:RxC, disc:P[:seedS] or randsym:N:DENSITY[:seedS]");
  }

  [[nodiscard]] std::string to_string() const {
    std::ostringstream os;
    switch (kind) {
      case GraphKind::Chain: os << "chain:" << n; break;
      case GraphKind::Lattice: os << "lattice:" << rows << "x" << cols; break;
      case GraphKind::DiscTriangulation: os << "disc:" << n << ":seed" << seed; break;
      case GraphKind::RandomSym:
        os << "randsym:" << n << ":" << std::setprecision(17) << density << ":seed" << seed;
        break;
    }
    return os.str();
  }

  [[nodiscard]] std::size_t node_count() const {
    return kind == GraphKind::Lattice ? rows * cols : n;
  }
};

namespace detail {

inline SparsityPattern symmetric_pattern(std::size_t n,
                                         const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  std::vector<SparsityPattern::Position> nz;
  nz.reserve(2 * pairs.size());
  for (const auto& [a, b] : pairs) {
    nz.emplace_back(a, b);
    nz.emplace_back(b, a);
  }
  return {n, n, std::move(nz)};
}

struct Point {
  double x;
  double y;
};

// Points strictly inside the unit disc, area-uniform.
inline std::vector<Point> disc_points(std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Point> pts;
  pts.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double r = std::sqrt(rng.uniform());
    const double t = 2 * std::numbers::pi * rng.uniform();
    pts.push_back({r * std::cos(t), r * std::sin(t)});
  }
  return pts;
}

// Bowyer-Watson. Returns triangles as index triples into pts.
inline std::vector<std::array<std::size_t, 3>> delaunay(const std::vector<Point>& input) {
  auto pts = input;
  const std::size_t n = pts.size();
  const double big = 1e3;
  pts.push_back({-big, -big});
  pts.push_back({big, -big});
  pts.push_back({0, big});

  struct Tri {
    std::array<std::size_t, 3> v;
    double cx, cy, r2;
  };
  auto make = [&](std::size_t a, std::size_t b, std::size_t c) {
    const auto& A = pts[a];
    const auto& B = pts[b];
    const auto& C = pts[c];
    const double d = 2 * (A.x * (B.y - C.y) + B.x * (C.y - A.y) + C.x * (A.y - B.y));
    const double a2 = A.x * A.x + A.y * A.y;
    const double b2 = B.x * B.x + B.y * B.y;
    const double c2 = C.x * C.x + C.y * C.y;
    const double ux = (a2 * (B.y - C.y) + b2 * (C.y - A.y) + c2 * (A.y - B.y)) / d;
    const double uy = (a2 * (C.x - B.x) + b2 * (A.x - C.x) + c2 * (B.x - A.x)) / d;
    return Tri{{a, b, c}, ux, uy, (A.x - ux) * (A.x - ux) + (A.y - uy) * (A.y - uy)};
  };

  std::vector<Tri> tris{make(n, n + 1, n + 2)};
  for (std::size_t p = 0; p < n; ++p) {
    const auto& P = pts[p];
    std::vector<std::pair<std::size_t, std::size_t>> boundary;
    std::vector<Tri> keep;
    keep.reserve(tris.size() + 2);
    std::map<std::pair<std::size_t, std::size_t>, int> edge_count;
    std::vector<Tri> bad;
    for (const auto& t : tris) {
      const double dx = P.x - t.cx;
      const double dy = P.y - t.cy;
      if (dx * dx + dy * dy < t.r2)
        bad.push_back(t);
      else
        keep.push_back(t);
    }
    for (const auto& t : bad)
      for (int e = 0; e < 3; ++e) {
        auto a = t.v[static_cast<std::size_t>(e)];
        auto b = t.v[static_cast<std::size_t>((e + 1) % 3)];
        if (a > b) std::swap(a, b);
        ++edge_count[{a, b}];
      }
    for (const auto& [e, c] : edge_count)
      if (c == 1) keep.push_back(make(e.first, e.second, p));
    tris = std::move(keep);
  }

  std::vector<std::array<std::size_t, 3>> out;
  for (const auto& t : tris)
    if (t.v[0] < n && t.v[1] < n && t.v[2] < n) out.push_back(t.v);
  return out;
}

}  // namespace detail

/// Off-diagonal symmetric pattern of the described graph; no diagonal positions.
inline SparsityPattern generate_pattern(const GraphSpec& spec) {
  spec.validate();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  switch (spec.kind) {
    case GraphKind::Chain:
      for (std::size_t i = 0; i + 1 < spec.n; ++i) pairs.emplace_back(i + 1, i);
      return detail::symmetric_pattern(spec.n, pairs);
    case GraphKind::Lattice: {
      const auto id = [&](std::size_t r, std::size_t c) { return r * spec.cols + c; };
      for (std::size_t r = 0; r < spec.rows; ++r)
        for (std::size_t c = 0; c < spec.cols; ++c) {
          if (c + 1 < spec.cols) pairs.emplace_back(id(r, c + 1), id(r, c));
          if (r + 1 < spec.rows) pairs.emplace_back(id(r + 1, c), id(r, c));
        }
      return detail::symmetric_pattern(spec.rows * spec.cols, pairs);
    }
    case GraphKind::DiscTriangulation: {
      for (const auto& t : detail::delaunay(detail::disc_points(spec.n, spec.seed))) {
        pairs.emplace_back(t[0], t[1]);
        pairs.emplace_back(t[1], t[2]);
        pairs.emplace_back(t[2], t[0]);
      }
      return detail::symmetric_pattern(spec.n, pairs);
    }
    case GraphKind::RandomSym: {
      Rng rng(spec.seed);
      for (std::size_t i = 1; i < spec.n; ++i)
        for (std::size_t j = 0; j < i; ++j)
          if (rng.uniform() < spec.density) pairs.emplace_back(i, j);
      return detail::symmetric_pattern(spec.n, pairs);
    }
  }
  return {};
}

/// Seeded random Hermitian values on the off-diagonal positions of p, with a
/// real diagonal that dominates its row.
inline HermitianInput random_hermitian_values(const SparsityPattern& p, std::uint64_t seed,
                                              bool complex_values = true) {
  if (!p.is_symmetric()) throw InvalidArgument("pattern must be square and symmetric");
  Rng rng(seed);
  std::vector<LowerEntry> lower;
  std::vector<double> row_sum(p.n_rows(), 0.0);
  for (const auto& [r, c] : p.nonzeros()) {
    if (r <= c) continue;
    const Complex v = complex_values ? Complex(rng.normal(), rng.normal()) : Complex(rng.normal(), 0);
    lower.push_back({r, c, v});
    row_sum[r] += std::abs(v);
    row_sum[c] += std::abs(v);
  }
  std::vector<double> diag(p.n_rows());
  for (std::size_t i = 0; i < diag.size(); ++i) {
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    diag[i] = sign * (row_sum[i] + rng.uniform(0.5, 1.5));
  }
  return {p.n_rows(), std::move(diag), std::move(lower)};
}

}  // namespace edgelim
