#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "radsub/frame.hpp"
#include "radsub/types.hpp"

namespace radsub {

struct Detection {
  BBox bbox;
  double score = 1.0;
  std::string cls = "vehicle";
};

struct SyntheticDetectorParams {
  double mad_multiplier = 8.0;  // threshold = median + k * MAD
  int min_area = 4;             // connected-component pixel count
};

// Thresholds the image at median + k*MAD and returns the bounding boxes of
// 8-connected components with area >= min_area, in row-major discovery order.
// Scores are component energies normalized across the kept components.
std::vector<Detection> synthetic_detect(const CartesianImage& image,
                                        const SyntheticDetectorParams& params = {});

// Uniform detector abstraction: either detections exported from an external
// network keyed by frame index, or the built-in synthetic detector. File-backed
// providers ignore the image argument; a missing frame yields an empty list
// with a warning on stderr.
class DetectionProvider {
 public:
  static DetectionProvider file_backed(const std::filesystem::path& jsonl_path);
  static DetectionProvider synthetic(SyntheticDetectorParams params = {});

  std::vector<Detection> detect(int frame_index, const CartesianImage& image) const;

  bool is_file_backed() const { return file_backed_; }

 private:
  DetectionProvider() = default;
  bool file_backed_ = false;
  std::map<int, std::vector<Detection>> by_frame_;
  SyntheticDetectorParams params_;
};

}  // namespace radsub
