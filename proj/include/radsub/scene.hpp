#pragma once

#include <climits>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "radsub/detection.hpp"
#include "radsub/frame.hpp"
#include "radsub/geometry.hpp"

namespace radsub {

// Point target rendered as a Gaussian intensity blob over exponential
// clutter. Position and velocity are Cartesian meters relative to the
// vehicle, x east and y north ("north" = azimuth 0).
struct SceneTarget {
  double x0_m = 0.0;
  double y0_m = 0.0;
  double vx_m = 0.0;  // meters per frame
  double vy_m = 0.0;
  double reflectivity = 200.0;
  double extent_m = 1.5;  // Gaussian sigma
  std::string cls = "car";
  int appear_frame = 1;
  int disappear_frame = INT_MAX;
};

struct SceneConfig {
  int n_frames = 1;
  int rows = 400;
  int cols = 576;
  double range_res = 0.175;  // meters per range bin
  float peak_value = 255.0f;
  double clutter_mean = 1.0;  // exponential clutter scale
  std::uint64_t seed = 1;
  std::vector<SceneTarget> targets;
  int cartesian_side = 0;         // 0 -> 2*cols + 1
  double meters_per_pixel = 0.0;  // 0 -> range_res

  double azimuth_res() const { return 360.0 / rows; }
  int effective_side() const { return cartesian_side > 0 ? cartesian_side : 2 * cols + 1; }
  double effective_mpp() const { return meters_per_pixel > 0.0 ? meters_per_pixel : range_res; }
};

void validate(const SceneConfig& cfg);

struct Scene {
  std::vector<RadarFrame> frames;  // frame_index = 1..n
  std::map<int, std::vector<BBox>> ground_truth;  // Cartesian rendering frame
  // Synthetic camera detections, emitted only when a calibration is given;
  // coordinates in the camera image frame, classes from the targets.
  std::map<int, std::vector<Detection>> image_detections;
};

// Deterministic per seed: per-frame clutter streams derive from
// (seed, frame_index) and target motion is exact.
Scene gen_scene(const SceneConfig& cfg,
                const std::optional<CameraCalibration>& camera = std::nullopt);

}  // namespace radsub
