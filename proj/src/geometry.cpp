#include "radsub/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace radsub {

void validate(const CameraCalibration& cal) {
  if (!(cal.theta_min_deg < cal.theta_max_deg))
    throw std::invalid_argument("calibration: theta_min must be < theta_max");
  if (!(cal.x_min < cal.x_max))
    throw std::invalid_argument("calibration: x_min must be < x_max");
}

double wrap_azimuth_deg(double deg) {
  double a = std::fmod(deg, 360.0);
  if (a < 0.0) a += 360.0;
  if (a >= 360.0) a = 0.0;
  return a;
}

AzimuthMapping image_bbox_to_azimuth(const BBox& bbox, const CameraCalibration& cal,
                                     int n_az_blocks) {
  validate(cal);
  if (n_az_blocks < 1) throw std::invalid_argument("image_bbox_to_azimuth: empty grid");
  const double cx = bbox.cx();
  if (cx < cal.x_min || cx > cal.x_max)
    throw std::invalid_argument("image_bbox_to_azimuth: bbox center x=" + std::to_string(cx) +
                                " outside [" + std::to_string(cal.x_min) + ", " +
                                std::to_string(cal.x_max) + "]");
  const double frac = (cx - cal.x_min) / (cal.x_max - cal.x_min);
  const double azimuth = cal.theta_min_deg + frac * (cal.theta_max_deg - cal.theta_min_deg);
  const double per_block = 360.0 / n_az_blocks;
  int block = static_cast<int>(std::floor(wrap_azimuth_deg(azimuth) / per_block));
  if (block >= n_az_blocks) block = n_az_blocks - 1;
  return AzimuthMapping{azimuth, block};
}

BlockIndex cartesian_point_to_polar_block(double px, double py, double center_px,
                                          double meters_per_pixel, const BlockGrid& grid,
                                          double range_res_m) {
  const double east = px - center_px;
  const double north = center_px - py;
  if (east == 0.0 && north == 0.0) return BlockIndex{0, 0};
  const double bearing = wrap_azimuth_deg(std::atan2(east, north) * 180.0 / M_PI);
  const double range_m = std::hypot(east, north) * meters_per_pixel;
  const double per_az_block = 360.0 / grid.n_az_blocks;
  const double per_range_block = grid.block_cols * range_res_m;
  int az = static_cast<int>(std::floor(bearing / per_az_block));
  if (az >= grid.n_az_blocks) az = grid.n_az_blocks - 1;
  int rng = static_cast<int>(std::floor(range_m / per_range_block));
  if (rng >= grid.n_range_blocks) rng = grid.n_range_blocks - 1;
  return BlockIndex{az, rng};
}

BlockIndex cartesian_bbox_to_polar_block(const BBox& bbox, const CartesianImage& img,
                                         const BlockGrid& grid, double range_res_m) {
  return cartesian_point_to_polar_block(bbox.cx(), bbox.cy(), img.center(), img.meters_per_pixel,
                                        grid, range_res_m);
}

std::set<BlockIndex> mark_important_blocks(const std::vector<BlockIndex>& centers,
                                           const BlockGrid& grid, bool include_shadow) {
  std::set<BlockIndex> out;
  const int n_az = grid.n_az_blocks;
  for (const BlockIndex& c : centers) {
    if (c.az < 0 || c.az >= n_az || c.rng < 0 || c.rng >= grid.n_range_blocks)
      throw std::invalid_argument("mark_important_blocks: center (" + std::to_string(c.az) + "," +
                                  std::to_string(c.rng) + ") outside grid");
    out.insert(c);
    if (include_shadow && c.rng + 1 < grid.n_range_blocks) out.insert({c.az, c.rng + 1});
    if (c.rng - 1 >= 0) {
      for (int da = -1; da <= 1; ++da) {
        const int az = ((c.az + da) % n_az + n_az) % n_az;
        out.insert({az, c.rng - 1});
      }
    }
  }
  return out;
}

CartesianImage polar_to_cartesian(const RadarFrame& frame, int side_px, double meters_per_pixel,
                                  Exec exec) {
  if (side_px < 3) throw std::invalid_argument("polar_to_cartesian: side_px must be >= 3");
  if (meters_per_pixel <= 0.0)
    throw std::invalid_argument("polar_to_cartesian: meters_per_pixel must be positive");
  CartesianImage img;
  img.meters_per_pixel = meters_per_pixel;
  img.pixels.setZero(side_px, side_px);
  const double c = (side_px - 1) / 2.0;
  const double max_range = frame.max_range_m();
  const int rows = frame.rows();
  const int cols = frame.cols();

  auto fill_row = [&](int py) {
    for (int px = 0; px < side_px; ++px) {
      const double east = px - c;
      const double north = c - py;
      const double range_m = std::hypot(east, north) * meters_per_pixel;
      if (range_m >= max_range) continue;
      double bearing = 0.0;
      if (east != 0.0 || north != 0.0)
        bearing = wrap_azimuth_deg(std::atan2(east, north) * 180.0 / M_PI);
      int a = static_cast<int>(std::floor(bearing / frame.azimuth_res));
      if (a >= rows) a = rows - 1;
      int r = static_cast<int>(std::floor(range_m / frame.range_res));
      if (r >= cols) r = cols - 1;
      img.pixels(py, px) = frame.data(a, r);
    }
  };

  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (int py = 0; py < side_px; ++py) fill_row(py);
  } else {
    for (int py = 0; py < side_px; ++py) fill_row(py);
  }
  return img;
}

}  // namespace radsub
