#include "radsub/measurement.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "radsub/rng.hpp"

namespace radsub {

MeasurementMatrix MeasurementMatrix::build(MatrixKind kind, int m, int n, std::uint64_t seed) {
  if (m < 1 || n < 1 || m > n)
    throw std::invalid_argument("measurement matrix: need 1 <= m <= n, got m=" +
                                std::to_string(m) + " n=" + std::to_string(n));
  MeasurementMatrix mat;
  mat.desc_ = MatrixDescriptor{kind, m, n, seed};
  Rng rng(mix_seed({seed, static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(n)}));
  switch (kind) {
    case MatrixKind::Bpd:
      mat.sel_ = rng.sample_without_replacement(n, m);
      break;
    case MatrixKind::Bpbd: {
      if (n % m != 0)
        throw std::invalid_argument("measurement matrix: BPBD requires m | n, got m=" +
                                    std::to_string(m) + " n=" + std::to_string(n));
      mat.perm_ = rng.permutation(n);
      break;
    }
    case MatrixKind::Gaussian: {
      const double sigma = 1.0 / std::sqrt(static_cast<double>(m));
      mat.dense_.resize(m, n);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) mat.dense_(i, j) = sigma * rng.normal();
      mat.gram_llt_.compute(mat.dense_ * mat.dense_.transpose());
      if (mat.gram_llt_.info() != Eigen::Success)
        throw std::runtime_error("measurement matrix: Gaussian row Gram not positive definite");
      break;
    }
  }
  return mat;
}

Eigen::VectorXd MeasurementMatrix::apply(const Eigen::VectorXd& x) const {
  if (x.size() != desc_.n) throw std::invalid_argument("measurement apply: dimension mismatch");
  switch (desc_.kind) {
    case MatrixKind::Bpd: {
      Eigen::VectorXd y(desc_.m);
      for (int i = 0; i < desc_.m; ++i) y[i] = x[sel_[i]];
      return y;
    }
    case MatrixKind::Bpbd: {
      Eigen::VectorXd y = Eigen::VectorXd::Zero(desc_.m);
      const int band = desc_.n / desc_.m;
      for (int j = 0; j < desc_.n; ++j) y[perm_[j] / band] += x[j];
      return y;
    }
    case MatrixKind::Gaussian:
      return dense_ * x;
  }
  return {};
}

Eigen::VectorXd MeasurementMatrix::apply_transpose(const Eigen::VectorXd& y) const {
  if (y.size() != desc_.m)
    throw std::invalid_argument("measurement apply_transpose: dimension mismatch");
  switch (desc_.kind) {
    case MatrixKind::Bpd: {
      Eigen::VectorXd x = Eigen::VectorXd::Zero(desc_.n);
      for (int i = 0; i < desc_.m; ++i) x[sel_[i]] = y[i];
      return x;
    }
    case MatrixKind::Bpbd: {
      Eigen::VectorXd x(desc_.n);
      const int band = desc_.n / desc_.m;
      for (int j = 0; j < desc_.n; ++j) x[j] = y[perm_[j] / band];
      return x;
    }
    case MatrixKind::Gaussian:
      return dense_.transpose() * y;
  }
  return {};
}

Eigen::VectorXd MeasurementMatrix::gram_solve(const Eigen::VectorXd& r) const {
  switch (desc_.kind) {
    case MatrixKind::Bpd:
      return r;  // phi phi^T = I
    case MatrixKind::Bpbd:
      return r / (static_cast<double>(desc_.n) / desc_.m);  // phi phi^T = (n/m) I
    case MatrixKind::Gaussian:
      return gram_llt_.solve(r);
  }
  return {};
}

double MeasurementMatrix::entry(int row, int col) const {
  switch (desc_.kind) {
    case MatrixKind::Bpd:
      return sel_[row] == col ? 1.0 : 0.0;
    case MatrixKind::Bpbd:
      return perm_[col] / (desc_.n / desc_.m) == row ? 1.0 : 0.0;
    case MatrixKind::Gaussian:
      return dense_(row, col);
  }
  return 0.0;
}

int measurement_count(double rate, int n, MatrixKind kind) {
  if (rate <= 0.0) return 0;
  long m = std::lround(rate * n);
  if (m < 1) m = 1;
  if (m > n) m = n;
  if (kind == MatrixKind::Bpbd) {
    while (m > 1 && n % m != 0) --m;
  }
  return static_cast<int>(m);
}

MeasurementSet compress_block(const Eigen::MatrixXd& block, const MeasurementMatrix& matrix,
                              BlockIndex idx, int frame_index) {
  const Eigen::VectorXd v = vectorize_row_major(block);
  if (v.size() != matrix.n())
    throw std::invalid_argument("compress_block: block size " + std::to_string(v.size()) +
                                " does not match matrix n=" + std::to_string(matrix.n()));
  return MeasurementSet{matrix.apply(v), idx, frame_index, matrix.descriptor()};
}

}  // namespace radsub
