#include "radsub/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace radsub {
namespace {

struct FlatDetection {
  double score;
  int frame;
  int index;
  const BBox* box;
};

std::vector<FlatDetection> sort_by_score(const std::map<int, std::vector<Detection>>& detections) {
  std::vector<FlatDetection> flat;
  for (const auto& [frame, dets] : detections)
    for (int i = 0; i < static_cast<int>(dets.size()); ++i)
      flat.push_back({dets[i].score, frame, i, &dets[i].bbox});
  std::sort(flat.begin(), flat.end(), [](const FlatDetection& a, const FlatDetection& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.frame != b.frame) return a.frame < b.frame;
    return a.index < b.index;
  });
  return flat;
}

// TP flags for the sorted detections under greedy best-IOU matching.
std::vector<char> match_detections(const std::vector<FlatDetection>& sorted,
                                   const std::map<int, std::vector<BBox>>& ground_truth,
                                   double threshold) {
  std::map<int, std::vector<char>> gt_used;
  for (const auto& [frame, boxes] : ground_truth) gt_used[frame].assign(boxes.size(), 0);

  std::vector<char> tp(sorted.size(), 0);
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    const auto it = ground_truth.find(sorted[k].frame);
    if (it == ground_truth.end()) continue;
    auto& used = gt_used[sorted[k].frame];
    int best = -1;
    double best_iou = 0.0;
    for (int g = 0; g < static_cast<int>(it->second.size()); ++g) {
      if (used[g]) continue;
      const double overlap = iou(*sorted[k].box, it->second[g]);
      if (overlap > best_iou) {
        best_iou = overlap;
        best = g;
      }
    }
    if (best >= 0 && best_iou >= threshold - 1e-12) {
      used[best] = 1;
      tp[k] = 1;
    }
  }
  return tp;
}

double interpolated_ap(const std::vector<char>& tp, long n_gt) {
  std::vector<double> precision(tp.size()), recall(tp.size());
  long cum_tp = 0;
  for (std::size_t k = 0; k < tp.size(); ++k) {
    cum_tp += tp[k];
    precision[k] = static_cast<double>(cum_tp) / static_cast<double>(k + 1);
    recall[k] = static_cast<double>(cum_tp) / static_cast<double>(n_gt);
  }
  // Precision envelope from the right, then 101-point interpolation.
  for (int k = static_cast<int>(tp.size()) - 2; k >= 0; --k)
    precision[k] = std::max(precision[k], precision[k + 1]);
  double sum = 0.0;
  for (int r = 0; r <= 100; ++r) {
    const double target = r / 100.0;
    const auto it = std::lower_bound(recall.begin(), recall.end(), target - 1e-12);
    if (it != recall.end()) sum += precision[static_cast<std::size_t>(it - recall.begin())];
  }
  return sum / 101.0;
}

}  // namespace

double iou(const BBox& a, const BBox& b) {
  const double ix = std::max(a.x, b.x);
  const double iy = std::max(a.y, b.y);
  const double ix2 = std::min(a.x + a.w, b.x + b.w);
  const double iy2 = std::min(a.y + a.h, b.y + b.h);
  const double inter = std::max(0.0, ix2 - ix) * std::max(0.0, iy2 - iy);
  const double uni = a.w * a.h + b.w * b.h - inter;
  if (uni <= 0.0) return 0.0;
  return inter / uni;
}

double psnr(const RadarFrame& a, const RadarFrame& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("psnr: frame shapes differ");
  if (a.peak_value != b.peak_value)
    throw std::invalid_argument("psnr: frames have different peak values");
  double mse = 0.0;
  for (Eigen::Index j = 0; j < a.data.cols(); ++j)
    for (Eigen::Index i = 0; i < a.data.rows(); ++i) {
      const double d = static_cast<double>(a.data(i, j)) - b.data(i, j);
      mse += d * d;
    }
  mse /= static_cast<double>(a.data.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(static_cast<double>(a.peak_value) * a.peak_value / mse);
}

ApResult average_precision(const std::map<int, std::vector<Detection>>& detections,
                           const std::map<int, std::vector<BBox>>& ground_truth,
                           const std::vector<double>& thresholds) {
  if (thresholds.empty()) throw std::invalid_argument("average_precision: no thresholds");
  long n_gt = 0;
  for (const auto& [frame, boxes] : ground_truth) n_gt += static_cast<long>(boxes.size());
  const auto sorted = sort_by_score(detections);

  if (n_gt == 0) {
    if (sorted.empty()) return ApResult{0.0, 0.0, false};
    return ApResult{0.0, 0.0, true};
  }

  double sum = 0.0;
  double ap50 = 0.0;
  for (double threshold : thresholds) {
    const double ap = interpolated_ap(match_detections(sorted, ground_truth, threshold), n_gt);
    sum += ap;
    if (std::abs(threshold - 0.5) < 1e-9) ap50 = ap;
  }
  return ApResult{sum / static_cast<double>(thresholds.size()), ap50, true};
}

std::vector<std::pair<double, double>> precision_recall_curve(
    const std::map<int, std::vector<Detection>>& detections,
    const std::map<int, std::vector<BBox>>& ground_truth, double iou_threshold) {
  long n_gt = 0;
  for (const auto& [frame, boxes] : ground_truth) n_gt += static_cast<long>(boxes.size());
  const auto sorted = sort_by_score(detections);
  std::vector<std::pair<double, double>> curve;
  if (n_gt == 0 || sorted.empty()) return curve;
  const auto tp = match_detections(sorted, ground_truth, iou_threshold);
  long cum_tp = 0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    cum_tp += tp[k];
    curve.emplace_back(static_cast<double>(cum_tp) / static_cast<double>(n_gt),
                       static_cast<double>(cum_tp) / static_cast<double>(k + 1));
  }
  return curve;
}

}  // namespace radsub
