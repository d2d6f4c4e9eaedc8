#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "radsub/detection.hpp"
#include "radsub/frame.hpp"
#include "radsub/measurement.hpp"
#include "radsub/pipeline.hpp"
#include "radsub/scene.hpp"

namespace radsub {

enum class FrameFormat { Png16, RawF32 };

// Frame files are a 16-bit grayscale PNG (rows = azimuth; intensity scaled by
// peak_value/65535) or a raw little-endian row-major float32 matrix, plus a
// JSON sidecar named <stem>.json carrying rows/cols, resolutions, peak_value
// and frame_index.
std::filesystem::path frame_file_name(int frame_index, FrameFormat format);
void write_frame(const std::filesystem::path& dir, const RadarFrame& frame, FrameFormat format);
RadarFrame read_frame(const std::filesystem::path& frame_path);
std::vector<RadarFrame> read_frame_dir(const std::filesystem::path& dir);

// One 16-bit PNG holding 0/65535 per cell; used for CFAR masks.
void write_mask_png(const std::filesystem::path& path,
                    const Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>& mask);

// Detection records, one JSON object per line:
//   {"frame": int, "bbox": [x, y, w, h], "score": float, "class": "vehicle"}
// Ground truth uses the same schema without the score.
void write_detections_jsonl(const std::filesystem::path& path,
                            const std::map<int, std::vector<Detection>>& detections,
                            bool with_score = true);
std::map<int, std::vector<Detection>> read_detections_jsonl(const std::filesystem::path& path);
std::map<int, std::vector<BBox>> read_gt_jsonl(const std::filesystem::path& path);

// Measurement-set records, concatenated; all integers little-endian:
//   offset  size  field
//   0       4     magic "RSM1"
//   4       1     matrix kind (0 gaussian, 1 bpbd, 2 bpd)
//   5       3     zero padding
//   8       4     m (uint32)
//   12      4     n (uint32)
//   16      8     seed (uint64)
//   24      4     frame_index (uint32)
//   28      2     block azimuth ordinal (uint16)
//   30      2     block range ordinal (uint16)
//   32      4*m   measurements (float32)
void write_measurement_sets(const std::filesystem::path& path,
                            const std::vector<MeasurementSet>& sets);
std::vector<MeasurementSet> read_measurement_sets(const std::filesystem::path& path);

void write_budget_csv(const std::filesystem::path& path, const std::vector<FrameResult>& results);
void write_plan_json(const std::filesystem::path& path, const SamplingPlan& plan, int frame_index);

std::string to_json(const PipelineConfig& cfg);
PipelineConfig pipeline_config_from_json(const std::string& text);
std::string to_json(const SceneConfig& cfg);
SceneConfig scene_config_from_json(const std::string& text);
CameraCalibration calibration_from_json_file(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

// Precision/recall polyline as a standalone SVG.
void write_pr_svg(const std::filesystem::path& path,
                  const std::vector<std::pair<double, double>>& curve);

}  // namespace radsub
