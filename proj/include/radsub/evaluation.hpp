#pragma once

#include <map>
#include <vector>

#include "radsub/detection.hpp"
#include "radsub/frame.hpp"
#include "radsub/types.hpp"

namespace radsub {

// Intersection over union of two boxes; 0 for disjoint or degenerate input.
double iou(const BBox& a, const BBox& b);

// 10 log10(peak^2 / MSE) in dB; +infinity for identical frames. Frames must
// share shape and peak_value.
double psnr(const RadarFrame& a, const RadarFrame& b);

inline std::vector<double> default_ap_thresholds() {
  return {0.50, 0.55, 0.60, 0.65, 0.70, 0.75, 0.80, 0.85, 0.90, 0.95};
}

struct ApResult {
  double ap = 0.0;    // mean over the IOU thresholds
  double ap50 = 0.0;  // at IOU 0.5
  bool defined = true;  // false when both detections and ground truth are empty
};

// Single-class average precision: detections are pooled across frames sorted
// by descending score, greedily matched per frame to the highest-IOU unmatched
// ground-truth box at each threshold, and the precision-recall curve is
// integrated with 101-point interpolation.
ApResult average_precision(const std::map<int, std::vector<Detection>>& detections,
                           const std::map<int, std::vector<BBox>>& ground_truth,
                           const std::vector<double>& thresholds = default_ap_thresholds());

// Points of the precision-recall curve at IOU 0.5, for plotting.
std::vector<std::pair<double, double>> precision_recall_curve(
    const std::map<int, std::vector<Detection>>& detections,
    const std::map<int, std::vector<BBox>>& ground_truth, double iou_threshold = 0.5);

}  // namespace radsub
