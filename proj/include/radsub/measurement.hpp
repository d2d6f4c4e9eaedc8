#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cstdint>
#include <vector>

#include "radsub/frame.hpp"

namespace radsub {

enum class MatrixKind { Gaussian, Bpbd, Bpd };

struct MatrixDescriptor {
  MatrixKind kind = MatrixKind::Bpd;
  int m = 0;
  int n = 0;
  std::uint64_t seed = 0;

  bool operator==(const MatrixDescriptor&) const = default;
};

// Compression operator phi (m x n) over a vectorized block.
//   Gaussian: dense i.i.d. N(0, 1/m) entries.
//   BPBD: m equal bands of n/m consecutive ones on the diagonal, columns then
//         permuted; every column carries exactly one 1. Requires m | n.
//   BPD: one 1 per row in distinct columns (a row-subsampled permutation), so
//        measurement is pure sample selection.
class MeasurementMatrix {
 public:
  static MeasurementMatrix build(MatrixKind kind, int m, int n, std::uint64_t seed);
  static MeasurementMatrix build(const MatrixDescriptor& desc) {
    return build(desc.kind, desc.m, desc.n, desc.seed);
  }

  const MatrixDescriptor& descriptor() const { return desc_; }
  int m() const { return desc_.m; }
  int n() const { return desc_.n; }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;            // phi x
  Eigen::VectorXd apply_transpose(const Eigen::VectorXd& y) const;  // phi^T y
  Eigen::VectorXd gram_solve(const Eigen::VectorXd& r) const;       // (phi phi^T)^-1 r

  double entry(int row, int col) const;
  // BPD only: column selected by each row.
  const std::vector<int>& selected_columns() const { return sel_; }

 private:
  MatrixDescriptor desc_;
  std::vector<int> sel_;       // BPD
  std::vector<int> perm_;      // BPBD: band position of each column
  Eigen::MatrixXd dense_;      // Gaussian
  Eigen::LLT<Eigen::MatrixXd> gram_llt_;  // Gaussian
};

struct MeasurementSet {
  Eigen::VectorXd y;
  BlockIndex block;
  int frame_index = 0;
  MatrixDescriptor matrix;
};

// Number of measurements for a block of n samples at the given rate:
// round(rate * n), at least 1 for positive rates, at most n. For BPBD the
// count is lowered to the largest divisor of n so the band structure stays
// exact.
int measurement_count(double rate, int n, MatrixKind kind);

// y = phi * vec(block), row-major vectorization. For BPD this copies samples
// without arithmetic; for BPBD it sums disjoint sample subsets.
MeasurementSet compress_block(const Eigen::MatrixXd& block, const MeasurementMatrix& matrix,
                              BlockIndex idx = {}, int frame_index = 0);

}  // namespace radsub
