#pragma once

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace abtrack {

/// Dense row-major cost matrix. Entries may be +infinity to forbid a pairing.
class CostMatrix {
public:
  CostMatrix() = default;
  CostMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  CostMatrix(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double* row(std::size_t r) { return data_.data() + r * cols_; }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

inline constexpr double kForbidden = std::numeric_limits<double>::infinity();

using Matching = std::vector<std::pair<std::size_t, std::size_t>>;

/// Gated min-cost bipartite matching. Admissible pairs have a finite cost
/// <= gate. Among admissible matchings the result has maximum cardinality,
/// then minimum total cost, then the lexicographically smallest sequence of
/// (row, col) pairs. Pairs are returned sorted by row.
Matching min_cost_assignment(const CostMatrix& cost, double gate);

double matching_cost(const CostMatrix& cost, const Matching& m);

}  // namespace abtrack
