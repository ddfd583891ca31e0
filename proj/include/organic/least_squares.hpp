#pragma once

#include <string>
#include <vector>

#include "organic/types.hpp"

namespace organic {

/// A labelled dense design matrix.
struct DesignMatrix {
  Matrix entries;                         // n x q
  std::vector<std::string> column_labels; // q, unique

  Index rows() const { return entries.rows(); }
  Index cols() const { return entries.cols(); }
};

struct LeastSquaresFit {
  Vector coefficients;
  double residual_sd = 0.0;
  bool rank_ok = true;
  Index rank = 0;
};

/// Ordinary least squares via singular value decomposition. Singular values
/// below 1e-10 times the largest are treated as zero; when that drops the
/// effective rank below the column count, rank_ok is false and the returned
/// coefficients are the minimum-norm solution.
///
/// residual_sd = sqrt(RSS / (rows - cols)), or 0 when rows == cols.
///
/// Throws DimensionMismatch if y.size() != rows, DegenerateDesign if
/// rows < cols.
LeastSquaresFit least_squares(const DesignMatrix& x, const Vector& y);

}  // namespace organic
