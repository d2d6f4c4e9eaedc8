#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "radsub/allocator.hpp"
#include "radsub/basis_pursuit.hpp"
#include "radsub/cfar.hpp"
#include "radsub/detection.hpp"
#include "radsub/geometry.hpp"
#include "radsub/sensing.hpp"
#include "radsub/tracking.hpp"

namespace radsub {

enum class Mode { CompRpd, CompRadImg, Rd, StandardCs, CfarBaseline };
enum class AnchorKind { Cs, Quantize3Bit };

inline BasisPursuitOptions pipeline_solver_defaults() {
  BasisPursuitOptions opts;
  opts.max_iterations = 400;
  opts.abs_tolerance = 1e-7;
  opts.rel_tolerance = 1e-5;
  return opts;
}

struct PipelineConfig {
  Mode mode = Mode::CompRpd;
  double target_rate = 0.2;
  int anchor_period = 20;
  double anchor_rate = 0.4;
  AnchorKind anchor_kind = AnchorKind::Cs;
  int quantize_bits = 3;
  MatrixKind matrix_kind = MatrixKind::Bpd;
  std::uint64_t base_seed = 1;
  int block_rows = 20;
  int block_cols = 48;
  int sample_bits = 8;  // raw ADC bits per sample, for bit-budget accounting

  // LP #2 boxes: x1 in [target_rate, x1_upper], x2 in [x2_lower, target_rate].
  double x1_upper = 0.55;
  double x2_lower = 0.07;
  bool occlusion_shadow = true;

  // LP #1 (CompRADIMG): near/far split in range blocks (0 -> n_range/2) and
  // budget fraction (0 -> target_rate).
  int r1_blocks = 0;
  double lp1_budget_fraction = 0.0;
  Lp1Bounds lp1_bounds;

  // Detector rendering; zeros take frame-derived defaults.
  int cartesian_side = 0;
  double meters_per_pixel = 0.0;

  TrackerConfig tracker;
  CfarParams cfar;
  std::optional<CameraCalibration> calibration;  // CompRADIMG only
  BasisPursuitOptions solver = pipeline_solver_defaults();
  Exec exec = Exec::Parallel;
};

void validate(const PipelineConfig& cfg);

struct FrameResult {
  RadarFrame reconstruction;
  SamplingPlan plan;
  long measurements = 0;
  double budget_samples = 0.0;  // CS sample allowance for this frame
  double bits = 0.0;            // acquisition cost in bits
  double bits_per_sample = 0.0;
  bool is_anchor = false;
  bool lp_infeasible = false;            // fell back to the uniform plan
  std::vector<Detection> detections;     // on this reconstruction
  std::vector<BBox> final_bb;            // planning boxes used for this frame
};

// Frame 1 is always an anchor; thereafter every anchor_period-th frame.
bool anchor_schedule(int frame_index, int period);

// Detect-and-predict loop: detections from the previous frame's
// reconstruction (passed through the Kalman tracker unless cfg.mode == Rd)
// drive the inverted-T important set and LP #2. Anchors are acquired
// uniformly at anchor_rate, or by direct quantization when
// anchor_kind == Quantize3Bit.
std::vector<FrameResult> run_comprpd(const std::vector<RadarFrame>& frames,
                                     const DetectionProvider& detector,
                                     const PipelineConfig& cfg);

// Camera detections categorize azimuth blocks (pedestrian/bicycle, car,
// other); CFAR on the previous reconstruction promotes near-range blocks.
// LP #1 allocates over (category x near/far). radar_detector, when given,
// only fills FrameResult::detections for evaluation.
std::vector<FrameResult> run_compradimg(const std::vector<RadarFrame>& frames,
                                        const DetectionProvider& image_detections,
                                        const PipelineConfig& cfg,
                                        const DetectionProvider* radar_detector = nullptr);

// Uniform target_rate everywhere, no priors, no anchors.
std::vector<FrameResult> run_standard_cs(const std::vector<RadarFrame>& frames,
                                         const PipelineConfig& cfg,
                                         const DetectionProvider* detector = nullptr);

// CFAR on the previous reconstruction supplies the important set for LP #2.
std::vector<FrameResult> run_cfar_baseline(const std::vector<RadarFrame>& frames,
                                           const PipelineConfig& cfg,
                                           const DetectionProvider* detector = nullptr);

std::string to_string(Mode mode);
std::string to_string(AnchorKind kind);
std::string to_string(MatrixKind kind);
Mode mode_from_string(const std::string& s);
AnchorKind anchor_kind_from_string(const std::string& s);
MatrixKind matrix_kind_from_string(const std::string& s);

}  // namespace radsub
