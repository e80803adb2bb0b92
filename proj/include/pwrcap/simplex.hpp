#pragma once

// Dense tableau simplex for  max c.x  s.t.  A x <= b, x >= 0, b >= 0.
// The origin is always feasible, so a single phase suffices. Entering columns
// follow the most negative reduced cost; the lexicographic ratio test keeps
// the heavily degenerate time-sharing programs from cycling.

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace pwrcap::lp {

struct Problem {
  std::size_t vars = 0;
  std::vector<std::vector<double>> a;  // one row per constraint, `vars` wide
  std::vector<double> b;
  std::vector<double> c;
};

struct Solution {
  double objective = 0.0;
  std::vector<double> x;
  std::size_t pivots = 0;
};

struct Unbounded : std::runtime_error {
  Unbounded() : std::runtime_error("linear program is unbounded") {}
};

inline Solution maximize(const Problem& p, double eps = 1e-9) {
  const std::size_t m = p.a.size();
  const std::size_t n = p.vars;
  if (p.b.size() != m || p.c.size() != n) throw std::invalid_argument("lp: dimension mismatch");
  for (double bi : p.b)
    if (bi < 0.0) throw std::invalid_argument("lp: negative right-hand side");

  // Columns: n structural, m slack, then rhs.
  const std::size_t width = n + m + 1;
  std::vector<double> t((m + 1) * width, 0.0);
  auto at = [&](std::size_t r, std::size_t col) -> double& { return t[r * width + col]; };
  for (std::size_t i = 0; i < m; ++i) {
    if (p.a[i].size() != n) throw std::invalid_argument("lp: ragged constraint row");
    for (std::size_t j = 0; j < n; ++j) at(i, j) = p.a[i][j];
    at(i, n + i) = 1.0;
    at(i, width - 1) = p.b[i];
  }
  for (std::size_t j = 0; j < n; ++j) at(m, j) = -p.c[j];

  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

  // Row i beats row k when (rhs, B^-1 row) / pivot coefficient is
  // lexicographically smaller; B^-1 sits in the slack columns.
  auto lex_less = [&](std::size_t i, std::size_t k, std::size_t enter) {
    const double ci = at(i, enter), ck = at(k, enter);
    const double ri = at(i, width - 1) / ci, rk = at(k, width - 1) / ck;
    if (std::abs(ri - rk) > eps) return ri < rk;
    for (std::size_t col = n; col < n + m; ++col) {
      const double a = at(i, col) / ci, b = at(k, col) / ck;
      if (std::abs(a - b) > eps) return a < b;
    }
    return basis[i] < basis[k];
  };

  Solution sol;
  const std::size_t max_pivots = 1000 * (m + n + 1);
  for (;;) {
    std::size_t enter = width;
    double most = -eps;
    for (std::size_t j = 0; j + 1 < width; ++j)
      if (at(m, j) < most) {
        enter = j;
        most = at(m, j);
      }
    if (enter == width) break;
    if (sol.pivots >= max_pivots) throw std::runtime_error("lp: pivot limit reached");

    std::size_t leave = m;
    for (std::size_t i = 0; i < m; ++i) {
      if (at(i, enter) <= eps) continue;
      if (leave == m || lex_less(i, leave, enter)) leave = i;
    }
    if (leave == m) throw Unbounded();

    const double piv = at(leave, enter);
    for (std::size_t j = 0; j < width; ++j) at(leave, j) /= piv;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const double f = at(i, enter);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < width; ++j) at(i, j) -= f * at(leave, j);
    }
    basis[leave] = enter;
    ++sol.pivots;
  }

  sol.x.assign(n, 0.0);
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) sol.x[basis[i]] = at(i, width - 1);
  sol.objective = at(m, width - 1);
  return sol;
}

}  // namespace pwrcap::lp
