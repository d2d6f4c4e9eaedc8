#pragma once

#include <set>
#include <vector>

#include "radsub/frame.hpp"
#include "radsub/types.hpp"

namespace radsub {

// Camera field of view in the bird's-eye frame. theta is measured in degrees
// relative to the vehicle heading; x_min/x_max bound pixel columns of the
// camera image.
struct CameraCalibration {
  double theta_min_deg = 0.0;
  double theta_max_deg = 0.0;
  double x_min = 0.0;
  double x_max = 0.0;
};

void validate(const CameraCalibration& cal);

// Azimuth convention used throughout: origin at the vehicle heading ("north"
// in Cartesian renderings), increasing clockwise, in [0, 360).
double wrap_azimuth_deg(double deg);

struct AzimuthMapping {
  double azimuth_deg = 0.0;  // signed, relative to vehicle heading
  int az_block = 0;          // ordinal after wrapping into [0, 360)
};

// Affine interpolation of an image bbox center into an azimuth angle plus the
// containing azimuth block. Throws if the bbox center falls outside the
// calibrated pixel extent.
AzimuthMapping image_bbox_to_azimuth(const BBox& bbox, const CameraCalibration& cal,
                                     int n_az_blocks);

// Maps a bbox in a Cartesian rendering to the polar block containing its
// center. A center coincident with the vehicle maps to block (0, 0) by
// convention. range_res_m is meters per range bin.
BlockIndex cartesian_bbox_to_polar_block(const BBox& bbox, const CartesianImage& img,
                                         const BlockGrid& grid, double range_res_m);
BlockIndex cartesian_point_to_polar_block(double px, double py, double center_px,
                                          double meters_per_pixel, const BlockGrid& grid,
                                          double range_res_m);

// Inverted-T stencil around each center block (a, r): the stem {(a, r),
// (a, r+1)} extends away from the vehicle to cover the occlusion shadow, the
// bar {(a-1, r-1), (a, r-1), (a+1, r-1)} widens toward the vehicle where
// blocks cover less Cartesian area. Azimuth wraps; range is clipped.
// include_shadow=false drops the (a, r+1) stem block (ablation switch).
std::set<BlockIndex> mark_important_blocks(const std::vector<BlockIndex>& centers,
                                           const BlockGrid& grid, bool include_shadow = true);

// Nearest-neighbor polar-to-Cartesian resampling; pixels beyond the maximum
// range are zero.
CartesianImage polar_to_cartesian(const RadarFrame& frame, int side_px, double meters_per_pixel,
                                  Exec exec = Exec::Parallel);

}  // namespace radsub
