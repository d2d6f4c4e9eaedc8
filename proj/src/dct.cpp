#include "radsub/dct.hpp"

#include <cmath>
#include <stdexcept>

#include "radsub/frame.hpp"

namespace radsub {
namespace {

Eigen::MatrixXd dct_matrix(int n) {
  Eigen::MatrixXd d(n, n);
  const double s0 = std::sqrt(1.0 / n);
  const double sk = std::sqrt(2.0 / n);
  for (int k = 0; k < n; ++k) {
    const double scale = (k == 0) ? s0 : sk;
    for (int i = 0; i < n; ++i)
      d(k, i) = scale * std::cos(M_PI * (2.0 * i + 1.0) * k / (2.0 * n));
  }
  return d;
}

}  // namespace

SparsityBasis::SparsityBasis(int block_rows, int block_cols)
    : rows_(block_rows), cols_(block_cols) {
  if (block_rows < 1 || block_cols < 1)
    throw std::invalid_argument("basis: block shape must be positive");
  d_rows_ = dct_matrix(block_rows);
  d_cols_ = dct_matrix(block_cols);
}

Eigen::MatrixXd SparsityBasis::forward(const Eigen::MatrixXd& block) const {
  if (block.rows() != rows_ || block.cols() != cols_)
    throw std::invalid_argument("dct2: block shape does not match basis");
  return d_rows_ * block * d_cols_.transpose();
}

Eigen::MatrixXd SparsityBasis::inverse(const Eigen::MatrixXd& coeffs) const {
  if (coeffs.rows() != rows_ || coeffs.cols() != cols_)
    throw std::invalid_argument("idct2: coefficient shape does not match basis");
  return d_rows_.transpose() * coeffs * d_cols_;
}

Eigen::VectorXd SparsityBasis::forward_vec(const Eigen::VectorXd& v) const {
  return vectorize_row_major(forward(devectorize_row_major(v, rows_, cols_)));
}

Eigen::VectorXd SparsityBasis::inverse_vec(const Eigen::VectorXd& v) const {
  return vectorize_row_major(inverse(devectorize_row_major(v, rows_, cols_)));
}

Eigen::MatrixXd dct2(const Eigen::MatrixXd& block) {
  return SparsityBasis(static_cast<int>(block.rows()), static_cast<int>(block.cols()))
      .forward(block);
}

Eigen::MatrixXd idct2(const Eigen::MatrixXd& coeffs) {
  return SparsityBasis(static_cast<int>(coeffs.rows()), static_cast<int>(coeffs.cols()))
      .inverse(coeffs);
}

}  // namespace radsub
