#include "organic/least_squares.hpp"

#include <Eigen/SVD>

#include "organic/errors.hpp"

namespace organic {

LeastSquaresFit least_squares(const DesignMatrix& x, const Vector& y) {
  const Index rows = x.rows();
  const Index cols = x.cols();
  if (cols < 1) throw DegenerateDesign("design matrix has no columns");
  if (y.size() != rows) {
    throw DimensionMismatch("response length " + std::to_string(y.size()) +
                            " does not match design rows " + std::to_string(rows));
  }
  if (rows < cols) {
    throw DegenerateDesign("design has " + std::to_string(rows) + " rows for " +
                           std::to_string(cols) + " columns");
  }

  Eigen::BDCSVD<Matrix> svd(x.entries, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(1e-10);

  LeastSquaresFit fit;
  fit.rank = svd.rank();
  fit.rank_ok = fit.rank == cols;
  fit.coefficients = svd.solve(y);  // minimum-norm when rank-deficient

  const Vector residuals = y - x.entries * fit.coefficients;
  const double rss = residuals.squaredNorm();
  const Index df = rows - cols;
  fit.residual_sd = df > 0 ? std::sqrt(rss / static_cast<double>(df)) : 0.0;
  return fit;
}

}  // namespace organic
