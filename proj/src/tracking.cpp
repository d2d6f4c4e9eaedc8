#include "radsub/tracking.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <limits>
#include <stdexcept>
#include <tuple>

#include "radsub/evaluation.hpp"

namespace radsub {
namespace {

using Mat6 = Eigen::Matrix<double, 6, 6>;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat46 = Eigen::Matrix<double, 4, 6>;
using Vec4 = Eigen::Matrix<double, 4, 1>;

Mat6 transition() {
  Mat6 f = Mat6::Identity();
  f(0, 4) = 1.0;
  f(1, 5) = 1.0;
  return f;
}

Mat6 process_noise(const TrackerConfig& c) {
  Vec6 q;
  q << c.process_noise_pos, c.process_noise_pos, c.process_noise_size, c.process_noise_size,
      c.process_noise_vel, c.process_noise_vel;
  return q.asDiagonal();
}

Mat46 observation() {
  Mat46 h = Mat46::Zero();
  h(0, 0) = h(1, 1) = h(2, 2) = h(3, 3) = 1.0;
  return h;
}

}  // namespace

void validate(const TrackerConfig& config) {
  if (config.min_age < 1) throw std::invalid_argument("tracker: min_age must be >= 1");
  if (config.max_age < 1) throw std::invalid_argument("tracker: max_age must be >= 1");
  if (config.measurement_noise <= 0.0)
    throw std::invalid_argument("tracker: measurement_noise must be positive");
}

Track make_track(int id, const BBox& detection, const TrackerConfig& config) {
  if (detection.w <= 0.0 || detection.h <= 0.0)
    throw std::invalid_argument("tracker: detection extent must be positive");
  Track t;
  t.id = id;
  t.state << detection.cx(), detection.cy(), detection.w, detection.h, 0.0, 0.0;
  Vec6 p;
  p << config.measurement_noise, config.measurement_noise, config.measurement_noise,
      config.measurement_noise, config.initial_velocity_var, config.initial_velocity_var;
  t.covariance = p.asDiagonal();
  return t;
}

BBox kalman_predict(Track& track, const TrackerConfig& config) {
  const Mat6 f = transition();
  track.state = f * track.state;
  track.covariance = f * track.covariance * f.transpose() + process_noise(config);
  return track.bbox();
}

void kalman_update(Track& track, const BBox& detection, const TrackerConfig& config) {
  if (detection.w <= 0.0 || detection.h <= 0.0)
    throw std::invalid_argument("tracker: detection extent must be positive");
  const Mat46 h = observation();
  const Eigen::Matrix4d r = Eigen::Matrix4d::Identity() * config.measurement_noise;
  Vec4 z;
  z << detection.cx(), detection.cy(), detection.w, detection.h;

  const Vec4 innovation = z - h * track.state;
  const Eigen::Matrix4d s = h * track.covariance * h.transpose() + r;
  const Eigen::Matrix<double, 6, 4> gain = track.covariance * h.transpose() * s.inverse();
  track.state += gain * innovation;
  // Joseph form keeps the covariance symmetric positive-definite.
  const Mat6 ikh = Mat6::Identity() - gain * h;
  track.covariance = ikh * track.covariance * ikh.transpose() + gain * r * gain.transpose();
  track.covariance = 0.5 * (track.covariance + track.covariance.transpose()).eval();

  track.age += 1;
  track.time_since_update = 0;
}

Association associate(const std::vector<BBox>& predictions, const std::vector<BBox>& detections) {
  std::vector<std::tuple<double, int, int>> pairs;
  for (int i = 0; i < static_cast<int>(predictions.size()); ++i)
    for (int j = 0; j < static_cast<int>(detections.size()); ++j) {
      const double overlap = iou(predictions[i], detections[j]);
      if (overlap > 0.0) pairs.emplace_back(overlap, i, j);
    }
  std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) {
    if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
    if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) < std::get<1>(b);
    return std::get<2>(a) < std::get<2>(b);
  });

  Association out;
  std::vector<char> pred_used(predictions.size(), 0), det_used(detections.size(), 0);
  for (const auto& [overlap, i, j] : pairs) {
    (void)overlap;
    if (pred_used[i] || det_used[j]) continue;
    pred_used[i] = det_used[j] = 1;
    out.matches.emplace_back(i, j);
  }
  for (int i = 0; i < static_cast<int>(predictions.size()); ++i)
    if (!pred_used[i]) out.unmatched_predictions.push_back(i);
  for (int j = 0; j < static_cast<int>(detections.size()); ++j)
    if (!det_used[j]) out.unmatched_detections.push_back(j);
  return out;
}

namespace {

// Potential-based Hungarian algorithm; returns the column assigned to each
// row of an n x m cost matrix with n <= m, minimizing the total cost.
std::vector<int> hungarian_min_cost(const Eigen::MatrixXd& cost) {
  const int n = static_cast<int>(cost.rows());
  const int m = static_cast<int>(cost.cols());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = 0;
      double delta = inf;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= m; ++j)
    if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
  return row_to_col;
}

}  // namespace

Association associate_optimal(const std::vector<BBox>& predictions,
                              const std::vector<BBox>& detections) {
  const int n = static_cast<int>(predictions.size());
  const int m = static_cast<int>(detections.size());
  Association out;
  if (n == 0 || m == 0) {
    for (int i = 0; i < n; ++i) out.unmatched_predictions.push_back(i);
    for (int j = 0; j < m; ++j) out.unmatched_detections.push_back(j);
    return out;
  }

  // Maximize summed IOU: cost = -IOU, zero for non-overlapping pairs, with
  // the matrix transposed when predictions outnumber detections.
  const bool transposed = n > m;
  const int rows = transposed ? m : n;
  const int cols = transposed ? n : m;
  Eigen::MatrixXd cost(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      const double overlap =
          transposed ? iou(predictions[j], detections[i]) : iou(predictions[i], detections[j]);
      cost(i, j) = overlap > 0.0 ? -overlap : 0.0;
    }

  std::vector<char> pred_used(n, 0), det_used(m, 0);
  const auto row_to_col = hungarian_min_cost(cost);
  for (int i = 0; i < rows; ++i) {
    const int j = row_to_col[i];
    if (j < 0) continue;
    const int pi = transposed ? j : i;
    const int dj = transposed ? i : j;
    if (iou(predictions[pi], detections[dj]) > 0.0) {
      out.matches.emplace_back(pi, dj);
      pred_used[pi] = det_used[dj] = 1;
    }
  }
  std::sort(out.matches.begin(), out.matches.end());
  for (int i = 0; i < n; ++i)
    if (!pred_used[i]) out.unmatched_predictions.push_back(i);
  for (int j = 0; j < m; ++j)
    if (!det_used[j]) out.unmatched_detections.push_back(j);
  return out;
}

Tracker::Tracker(TrackerConfig config) : config_(config) { validate(config_); }

void Tracker::reset() {
  tracks_.clear();
  next_id_ = 0;
}

std::vector<BBox> Tracker::step(const std::vector<BBox>& detections, bool post_anchor) {
  if (post_anchor) {
    tracks_.clear();
    for (const BBox& d : detections) tracks_.push_back(make_track(next_id_++, d, config_));
    return detections;
  }

  std::vector<BBox> predictions(tracks_.size());
  for (std::size_t i = 0; i < tracks_.size(); ++i)
    predictions[i] = kalman_predict(tracks_[i], config_);

  const Association assoc = config_.optimal_assignment
                                ? associate_optimal(predictions, detections)
                                : associate(predictions, detections);

  std::vector<int> matched_track_of(detections.size(), -1);
  for (const auto& [i, j] : assoc.matches) matched_track_of[j] = i;

  std::vector<BBox> final_boxes;
  final_boxes.reserve(detections.size());
  for (int j = 0; j < static_cast<int>(detections.size()); ++j) {
    const int i = matched_track_of[j];
    if (i >= 0) {
      kalman_update(tracks_[i], detections[j], config_);
      final_boxes.push_back(tracks_[i].age > config_.min_age ? predictions[i] : detections[j]);
    } else {
      tracks_.push_back(make_track(next_id_++, detections[j], config_));
      final_boxes.push_back(detections[j]);
    }
  }

  for (int i : assoc.unmatched_predictions) tracks_[i].time_since_update += 1;
  std::erase_if(tracks_, [&](const Track& t) { return t.time_since_update > config_.max_age; });
  return final_boxes;
}

}  // namespace radsub
