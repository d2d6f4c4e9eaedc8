#pragma once

#include <Eigen/Core>
#include <compare>
#include <string>

namespace radsub {

// Polar range-azimuth intensity frame. Rows index azimuth bins covering the
// full 360 degree field of view, columns index range bins.
struct RadarFrame {
  Eigen::MatrixXf data;       // rows = azimuth bins, cols = range bins
  double azimuth_res = 0.0;   // degrees per azimuth bin; rows * azimuth_res == 360
  double range_res = 0.0;     // meters per range bin
  float peak_value = 0.0f;    // maximum representable intensity
  int frame_index = 0;

  int rows() const { return static_cast<int>(data.rows()); }
  int cols() const { return static_cast<int>(data.cols()); }
  double max_range_m() const { return cols() * range_res; }
};

// Validating constructor: checks the full-FoV invariant and that every entry
// is finite and within [0, peak_value].
RadarFrame make_frame(Eigen::MatrixXf data, double azimuth_res, double range_res,
                      float peak_value, int frame_index);

// Frame metadata without the payload; used when reassembling a frame from
// per-block reconstructions.
struct FrameMeta {
  int rows = 0;
  int cols = 0;
  double azimuth_res = 0.0;
  double range_res = 0.0;
  float peak_value = 0.0f;
  int frame_index = 0;

  static FrameMeta of(const RadarFrame& f) {
    return {f.rows(), f.cols(), f.azimuth_res, f.range_res, f.peak_value, f.frame_index};
  }
};

// Uniform partition of a frame into equal-sized blocks. Construction fails if
// the block shape does not divide the frame shape.
struct BlockGrid {
  int block_rows = 0;       // azimuth bins per block
  int block_cols = 0;       // range bins per block
  int n_az_blocks = 0;
  int n_range_blocks = 0;

  int total_blocks() const { return n_az_blocks * n_range_blocks; }
  int block_samples() const { return block_rows * block_cols; }
  int frame_rows() const { return n_az_blocks * block_rows; }
  int frame_cols() const { return n_range_blocks * block_cols; }
};

struct BlockIndex {
  int az = 0;
  int rng = 0;
  auto operator<=>(const BlockIndex&) const = default;
};

BlockGrid make_grid(int frame_rows, int frame_cols, int block_rows, int block_cols);
BlockGrid partition(const RadarFrame& frame, int block_rows, int block_cols);

// Block payload access. Blocks are handled in double precision; vectorization
// is row-major: v[i * block_cols + j] = block(i, j).
Eigen::MatrixXd extract_block(const Eigen::MatrixXf& data, const BlockGrid& grid, BlockIndex idx);
void place_block(Eigen::MatrixXf& data, const BlockGrid& grid, BlockIndex idx,
                 const Eigen::MatrixXd& block);
Eigen::VectorXd vectorize_row_major(const Eigen::MatrixXd& block);
Eigen::MatrixXd devectorize_row_major(const Eigen::VectorXd& v, int rows, int cols);

// Square bird's-eye intensity image with the vehicle at the center pixel
// ((side-1)/2, (side-1)/2); for even sides that is half a pixel up-left of
// the geometric center.
struct CartesianImage {
  Eigen::MatrixXf pixels;
  double meters_per_pixel = 0.0;

  int side() const { return static_cast<int>(pixels.rows()); }
  double center() const { return (side() - 1) / 2.0; }
};

}  // namespace radsub
