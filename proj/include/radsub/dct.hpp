#pragma once

#include <Eigen/Core>

namespace radsub {

// Orthonormal 2-D type-II DCT pair for one block shape. forward/inverse are
// exact transposes of each other, so the transform preserves the L2 norm and
// inverse(forward(B)) == B up to roundoff.
class SparsityBasis {
 public:
  SparsityBasis(int block_rows, int block_cols);

  Eigen::MatrixXd forward(const Eigen::MatrixXd& block) const;   // dct2
  Eigen::MatrixXd inverse(const Eigen::MatrixXd& coeffs) const;  // idct2

  // Row-major vectorized forms used by the reconstruction solver.
  Eigen::VectorXd forward_vec(const Eigen::VectorXd& v) const;
  Eigen::VectorXd inverse_vec(const Eigen::VectorXd& v) const;

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int size() const { return rows_ * cols_; }

 private:
  int rows_;
  int cols_;
  Eigen::MatrixXd d_rows_;  // rows_ x rows_ orthonormal DCT matrix
  Eigen::MatrixXd d_cols_;  // cols_ x cols_
};

Eigen::MatrixXd dct2(const Eigen::MatrixXd& block);
Eigen::MatrixXd idct2(const Eigen::MatrixXd& coeffs);

}  // namespace radsub
