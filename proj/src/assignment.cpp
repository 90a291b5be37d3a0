#include "abtrack/assignment.hpp"

#include <algorithm>
#include <cmath>

namespace abtrack {

CostMatrix::CostMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    std::size_t n = 0;
    for (double v : r) {
      data_.push_back(v);
      ++n;
    }
    data_.resize(data_.size() + (cols_ - std::min(cols_, n)), kForbidden);
  }
}

double matching_cost(const CostMatrix& cost, const Matching& m) {
  double total = 0.0;
  for (const auto& [r, c] : m) total += cost(r, c);
  return total;
}

namespace {

// Rectangular Hungarian method with potentials, rows <= cols. a is 1-based
// (a[i][j], i in 1..n, j in 1..m). Returns the column of each row.
std::vector<std::size_t> hungarian(const std::vector<std::vector<double>>& a, std::size_t n, std::size_t m) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0), minv(m + 1);
  std::vector<std::size_t> p(m + 1, 0), way(m + 1, 0);
  std::vector<char> used(m + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = a[i0][j] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> col_of(n + 1, 0);
  for (std::size_t j = 1; j <= m; ++j) {
    if (p[j] != 0) col_of[p[j]] = j;
  }
  return col_of;
}

struct Solution {
  std::size_t cardinality = 0;
  double cost = 0.0;
  Matching pairs;
};

// Max-cardinality, then min-cost matching restricted to the given rows/cols.
Solution solve_restricted(const CostMatrix& cost, double gate, const std::vector<std::size_t>& rows,
                          const std::vector<std::size_t>& cols) {
  Solution sol;
  if (rows.empty() || cols.empty()) return sol;
  const auto allowed = [&](std::size_t r, std::size_t c) {
    const double x = cost(r, c);
    return std::isfinite(x) && x <= gate;
  };
  double magnitude = 0.0;
  for (std::size_t r : rows) {
    for (std::size_t c : cols) {
      if (allowed(r, c)) magnitude += std::abs(cost(r, c));
    }
  }
  // Every admissible pair earns -big, so cardinality dominates cost.
  const double big = 2.0 * magnitude + 1.0;

  const bool transpose = rows.size() > cols.size();
  const auto& left = transpose ? cols : rows;
  const auto& right = transpose ? rows : cols;
  const std::size_t n = left.size();
  const std::size_t m = right.size() + n;  // one private dummy column per left vertex
  std::vector<std::vector<double>> a(n + 1, std::vector<double>(m + 1, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < right.size(); ++j) {
      const std::size_t r = transpose ? right[j] : left[i];
      const std::size_t c = transpose ? left[i] : right[j];
      a[i + 1][j + 1] = allowed(r, c) ? cost(r, c) - big : 0.0;
    }
  }
  const auto col_of = hungarian(a, n, m);
  for (std::size_t i = 1; i <= n; ++i) {
    const std::size_t j = col_of[i];
    if (j == 0 || j > right.size()) continue;
    const std::size_t r = transpose ? right[j - 1] : left[i - 1];
    const std::size_t c = transpose ? left[i - 1] : right[j - 1];
    if (!allowed(r, c)) continue;
    sol.pairs.emplace_back(r, c);
    sol.cost += cost(r, c);
    ++sol.cardinality;
  }
  return sol;
}

bool same_value(const Solution& a, std::size_t card, double cost) {
  return a.cardinality == card &&
         std::abs(a.cost - cost) <= 1e-9 * std::max(1.0, std::abs(cost));
}

}  // namespace

Matching min_cost_assignment(const CostMatrix& cost, double gate) {
  Matching result;
  if (cost.rows() == 0 || cost.cols() == 0) return result;

  std::vector<std::size_t> rows(cost.rows()), cols(cost.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
  for (std::size_t j = 0; j < cols.size(); ++j) cols[j] = j;
  const Solution best = solve_restricted(cost, gate, rows, cols);
  if (best.cardinality == 0) return result;

  // Fix rows in order to their smallest column that keeps the optimum.
  std::size_t fixed_card = 0;
  double fixed_cost = 0.0;
  std::vector<std::size_t> free_rows(rows.begin() + 1, rows.end());
  std::vector<std::size_t> free_cols = cols;
  for (std::size_t r = 0; r < cost.rows(); ++r) {
    bool matched = false;
    for (std::size_t ci = 0; ci < free_cols.size() && !matched; ++ci) {
      const std::size_t c = free_cols[ci];
      const double x = cost(r, c);
      if (!std::isfinite(x) || x > gate) continue;
      std::vector<std::size_t> rest_cols = free_cols;
      rest_cols.erase(rest_cols.begin() + static_cast<std::ptrdiff_t>(ci));
      const Solution rest = solve_restricted(cost, gate, free_rows, rest_cols);
      if (same_value(best, fixed_card + 1 + rest.cardinality, fixed_cost + x + rest.cost)) {
        result.emplace_back(r, c);
        fixed_card += 1;
        fixed_cost += x;
        free_cols = std::move(rest_cols);
        matched = true;
      }
    }
    if (!free_rows.empty()) free_rows.erase(free_rows.begin());
  }
  return result;
}

}  // namespace abtrack
