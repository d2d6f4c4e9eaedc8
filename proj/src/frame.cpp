#include "radsub/frame.hpp"

#include <cmath>
#include <stdexcept>

namespace radsub {

RadarFrame make_frame(Eigen::MatrixXf data, double azimuth_res, double range_res,
                      float peak_value, int frame_index) {
  if (data.rows() < 1 || data.cols() < 1)
    throw std::invalid_argument("frame: empty data matrix");
  if (azimuth_res <= 0.0 || range_res <= 0.0)
    throw std::invalid_argument("frame: resolutions must be positive");
  if (!(peak_value > 0.0f))
    throw std::invalid_argument("frame: peak_value must be positive");
  const double fov = data.rows() * azimuth_res;
  if (std::abs(fov - 360.0) > 1e-6 * 360.0)
    throw std::invalid_argument("frame: rows * azimuth_res must equal 360 degrees, got " +
                                std::to_string(fov));
  for (Eigen::Index j = 0; j < data.cols(); ++j) {
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
      const float v = data(i, j);
      if (!std::isfinite(v) || v < 0.0f || v > peak_value)
        throw std::invalid_argument("frame: entry (" + std::to_string(i) + "," +
                                    std::to_string(j) + ") outside [0, peak_value]");
    }
  }
  return RadarFrame{std::move(data), azimuth_res, range_res, peak_value, frame_index};
}

BlockGrid make_grid(int frame_rows, int frame_cols, int block_rows, int block_cols) {
  if (block_rows < 1 || block_cols < 1)
    throw std::invalid_argument("grid: block shape must be positive");
  if (frame_rows % block_rows != 0)
    throw std::invalid_argument("grid: block_rows " + std::to_string(block_rows) +
                                " does not divide frame rows " + std::to_string(frame_rows) +
                                " (azimuth axis)");
  if (frame_cols % block_cols != 0)
    throw std::invalid_argument("grid: block_cols " + std::to_string(block_cols) +
                                " does not divide frame cols " + std::to_string(frame_cols) +
                                " (range axis)");
  return BlockGrid{block_rows, block_cols, frame_rows / block_rows, frame_cols / block_cols};
}

BlockGrid partition(const RadarFrame& frame, int block_rows, int block_cols) {
  return make_grid(frame.rows(), frame.cols(), block_rows, block_cols);
}

Eigen::MatrixXd extract_block(const Eigen::MatrixXf& data, const BlockGrid& grid, BlockIndex idx) {
  return data.block(idx.az * grid.block_rows, idx.rng * grid.block_cols, grid.block_rows,
                    grid.block_cols)
      .cast<double>();
}

void place_block(Eigen::MatrixXf& data, const BlockGrid& grid, BlockIndex idx,
                 const Eigen::MatrixXd& block) {
  data.block(idx.az * grid.block_rows, idx.rng * grid.block_cols, grid.block_rows,
             grid.block_cols) = block.cast<float>();
}

Eigen::VectorXd vectorize_row_major(const Eigen::MatrixXd& block) {
  Eigen::VectorXd v(block.size());
  Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      v.data(), block.rows(), block.cols()) = block;
  return v;
}

Eigen::MatrixXd devectorize_row_major(const Eigen::VectorXd& v, int rows, int cols) {
  if (v.size() != static_cast<Eigen::Index>(rows) * cols)
    throw std::invalid_argument("devectorize: size mismatch");
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      v.data(), rows, cols);
}

}  // namespace radsub
