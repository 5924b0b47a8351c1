#include <enlab/exact_lp.hpp>

namespace enlab {

std::optional<std::vector<Rational>> feasible_point(const Matrix& A, const std::vector<Rational>& b) {
  const std::size_t m = A.size();
  const std::size_t n = m == 0 ? 0 : A[0].size();
  if (m == 0) return std::vector<Rational>(n, 0);

  // tableau [A | I | b] with artificials as the starting basis
  const std::size_t cols = n + m;
  std::vector<std::vector<Rational>> tab(m, std::vector<Rational>(cols + 1));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    const bool flip = b[i] < 0;
    for (std::size_t j = 0; j < n; ++j) tab[i][j] = flip ? Rational(-A[i][j]) : A[i][j];
    tab[i][n + i] = 1;
    tab[i][cols] = flip ? Rational(-b[i]) : b[i];
    basis[i] = n + i;
  }
  // reduced costs of min sum(artificials)
  std::vector<Rational> cost(cols + 1);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) cost[j] -= tab[i][j];
    cost[cols] -= tab[i][cols];
  }

  Rational ratio, best;
  for (;;) {
    std::size_t enter = cols;
    for (std::size_t j = 0; j < cols; ++j)
      if (sgn(cost[j]) < 0) {
        enter = j;
        break;
      }
    if (enter == cols) break;
    std::size_t leave = m;
    for (std::size_t i = 0; i < m; ++i) {
      if (sgn(tab[i][enter]) <= 0) continue;
      ratio = tab[i][cols] / tab[i][enter];
      if (leave == m || ratio < best || (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) break;  // unbounded direction; cannot happen in Phase I

    const Rational piv = tab[leave][enter];
    for (auto& v : tab[leave]) v /= piv;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == leave || sgn(tab[i][enter]) == 0) continue;
      const Rational factor = tab[i][enter];
      for (std::size_t j = 0; j <= cols; ++j)
        if (sgn(tab[leave][j]) != 0) tab[i][j] -= factor * tab[leave][j];
    }
    if (sgn(cost[enter]) != 0) {
      const Rational factor = cost[enter];
      for (std::size_t j = 0; j <= cols; ++j)
        if (sgn(tab[leave][j]) != 0) cost[j] -= factor * tab[leave][j];
    }
    basis[leave] = enter;
  }

  if (sgn(cost[cols]) != 0) return std::nullopt;
  std::vector<Rational> x(n, 0);
  for (std::size_t i = 0; i < m; ++i)
    if (basis[i] < n) x[basis[i]] = tab[i][cols];
  return x;
}

}  // namespace enlab
