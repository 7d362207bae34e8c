#pragma once

#include <optional>

#include "vacone/rational.hpp"

namespace vacone {

/// Reduced row echelon form over the rationals. `pivots` lists the pivot
/// column of each nonzero row, in order.
struct Rref {
  Mat rows;
  std::vector<std::size_t> pivots;
};

Rref rref(Mat m, std::size_t cols);
std::size_t rank(const Mat& m, std::size_t cols);

/// Basis of {x | m x = 0}, one vector per free column.
Mat null_space(const Mat& m, std::size_t cols);

/// Canonical basis of span(vectors): the nonzero rows of the RREF.
Mat span_basis(const Mat& vectors, std::size_t dim);

/// Some solution of m x = rhs, or nullopt when the system is inconsistent.
std::optional<Vec> solve(const Mat& m, const Vec& rhs, std::size_t cols);

/// Solves the square system in floating point with partial pivoting; returns
/// nullopt when a pivot falls below `singular_tol` relative to the row scale.
std::optional<DVec> solve_dense(std::vector<DVec> a, DVec b, double singular_tol = 1e-13);

}  // namespace vacone
