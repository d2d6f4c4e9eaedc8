#pragma once

#include <Eigen/Core>
#include <utility>
#include <vector>

#include "radsub/types.hpp"

namespace radsub {

struct TrackerConfig {
  int min_age = 3;  // matches required before Kalman predictions replace detections
  int max_age = 5;  // unmatched frames before a track is dropped
  double process_noise_pos = 1e-2;
  double process_noise_vel = 1e-1;
  double process_noise_size = 1e-4;
  double measurement_noise = 1.0;
  double initial_velocity_var = 100.0;
  bool optimal_assignment = false;  // Hungarian matching instead of greedy
};

void validate(const TrackerConfig& config);

// Constant-velocity Kalman state (cx, cy, w, h, vx, vy) in Cartesian pixels
// and pixels/frame; box extent is carried but not propagated.
struct Track {
  int id = 0;
  Eigen::Matrix<double, 6, 1> state;
  Eigen::Matrix<double, 6, 6> covariance;
  int age = 0;                // matched updates since initialization
  int time_since_update = 0;  // frames since the last matched detection

  BBox bbox() const {
    return BBox{state[0] - 0.5 * state[2], state[1] - 0.5 * state[3], state[2], state[3]};
  }
};

Track make_track(int id, const BBox& detection, const TrackerConfig& config);

// Advances the track one frame and returns the predicted box.
BBox kalman_predict(Track& track, const TrackerConfig& config);

// Standard measurement update on (cx, cy, w, h); bumps age, clears
// time_since_update. Rejects non-positive detection extents.
void kalman_update(Track& track, const BBox& detection, const TrackerConfig& config);

struct Association {
  std::vector<std::pair<int, int>> matches;  // (prediction index, detection index)
  std::vector<int> unmatched_predictions;
  std::vector<int> unmatched_detections;
};

// Greedy matching by descending IOU; a pair matches iff IOU > 0 and each side
// is used at most once. Equal IOUs break toward the lower prediction index,
// then the lower detection index.
Association associate(const std::vector<BBox>& predictions, const std::vector<BBox>& detections);

// Hungarian matching maximizing the summed IOU over pairs with IOU > 0.
Association associate_optimal(const std::vector<BBox>& predictions,
                              const std::vector<BBox>& detections);

// Detect-and-predict tracker. step() consumes the detections computed on the
// previous frame's reconstruction and returns the planning boxes for the
// current frame: the Kalman prediction once a track's age exceeds min_age,
// the detection otherwise. When the previous frame was an anchor the filters
// are reinitialized from the detections, which are returned as-is.
class Tracker {
 public:
  explicit Tracker(TrackerConfig config = {});

  std::vector<BBox> step(const std::vector<BBox>& detections, bool post_anchor);

  const std::vector<Track>& tracks() const { return tracks_; }
  const TrackerConfig& config() const { return config_; }
  void reset();

 private:
  TrackerConfig config_;
  std::vector<Track> tracks_;  // ascending id order
  int next_id_ = 0;
};

}  // namespace radsub
