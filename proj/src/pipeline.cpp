#include "radsub/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace radsub {
namespace {

struct Context {
  BlockGrid grid;
  int cart_side;
  double mpp;
  long frame_samples;
};

Context make_context(const std::vector<RadarFrame>& frames, const PipelineConfig& cfg) {
  if (frames.empty()) throw std::invalid_argument("pipeline: no frames");
  for (std::size_t i = 1; i < frames.size(); ++i)
    if (frames[i].rows() != frames[0].rows() || frames[i].cols() != frames[0].cols())
      throw std::invalid_argument("pipeline: frame shapes differ within the stream");
  Context ctx;
  ctx.grid = partition(frames[0], cfg.block_rows, cfg.block_cols);
  ctx.cart_side = cfg.cartesian_side > 0 ? cfg.cartesian_side : 2 * frames[0].cols() + 1;
  ctx.mpp = cfg.meters_per_pixel > 0.0 ? cfg.meters_per_pixel : frames[0].range_res;
  ctx.frame_samples = static_cast<long>(frames[0].rows()) * frames[0].cols();
  return ctx;
}

// CS acquisition of one frame under the plan; fills measurement/bit accounting.
void acquire(const RadarFrame& frame, const Context& ctx, const PipelineConfig& cfg,
             const SamplingPlan& plan, double budget_rate, FrameResult& out) {
  const auto sets =
      compress_frame(frame, ctx.grid, plan, cfg.matrix_kind, cfg.base_seed, cfg.exec);
  out.measurements = total_measurements(sets);
  out.reconstruction =
      reconstruct_frame(sets, ctx.grid, FrameMeta::of(frame), cfg.solver, cfg.exec);
  out.plan = plan;
  out.budget_samples = budget_rate * static_cast<double>(ctx.frame_samples);
  out.bits = static_cast<double>(cfg.sample_bits) * static_cast<double>(out.measurements);
  out.bits_per_sample = out.bits / static_cast<double>(ctx.frame_samples);
}

// Anchor acquisition: uniform CS at anchor_rate, or direct quantization.
FrameResult acquire_anchor(const RadarFrame& frame, const Context& ctx,
                           const PipelineConfig& cfg) {
  FrameResult fr;
  fr.is_anchor = true;
  if (cfg.anchor_kind == AnchorKind::Quantize3Bit) {
    fr.reconstruction = quantize_frame(frame, cfg.quantize_bits);
    fr.plan = uniform_plan(ctx.grid, 0.0, "{\"anchor\":\"quantize\",\"bits\":" +
                                              std::to_string(cfg.quantize_bits) + "}");
    fr.measurements = 0;
    fr.budget_samples = 0.0;
    fr.bits = static_cast<double>(cfg.quantize_bits) * static_cast<double>(ctx.frame_samples);
    fr.bits_per_sample = static_cast<double>(cfg.quantize_bits);
  } else {
    acquire(frame, ctx, cfg, uniform_plan(ctx.grid, cfg.anchor_rate, "{\"anchor\":\"cs\"}"),
            cfg.anchor_rate, fr);
  }
  return fr;
}

SamplingPlan important_set_plan(const std::set<BlockIndex>& important, const Context& ctx,
                                const PipelineConfig& cfg, bool* infeasible) {
  Lp2Inputs lp;
  lp.important_blocks = static_cast<int>(important.size());
  lp.other_blocks = ctx.grid.total_blocks() - lp.important_blocks;
  lp.block_cols = ctx.grid.block_cols;
  lp.block_rows = ctx.grid.block_rows;
  lp.sample_budget = cfg.target_rate * static_cast<double>(ctx.frame_samples);
  lp.x1_lower = cfg.target_rate;
  lp.x1_upper = cfg.x1_upper;
  lp.x2_lower = cfg.x2_lower;
  lp.x2_upper = cfg.target_rate;
  try {
    return plan_from_solution(ctx.grid, important, solve_lp2(lp));
  } catch (const LpInfeasibleError& e) {
    std::fprintf(stderr, "warning: LP2 infeasible (%s); using the uniform fallback plan\n",
                 e.constraint.c_str());
    *infeasible = true;
    return uniform_plan(ctx.grid, cfg.target_rate, "{\"lp\":\"lp2\",\"fallback\":\"uniform\"}");
  }
}

void attach_detections(FrameResult& fr, int frame_index, const Context& ctx,
                       const PipelineConfig& cfg, const DetectionProvider* detector) {
  if (!detector) return;
  const CartesianImage cart =
      polar_to_cartesian(fr.reconstruction, ctx.cart_side, ctx.mpp, cfg.exec);
  fr.detections = detector->detect(frame_index, cart);
}

std::vector<BlockIndex> final_bb_centers(const std::vector<BBox>& boxes, const Context& ctx,
                                         double range_res) {
  std::vector<BlockIndex> centers;
  centers.reserve(boxes.size());
  const double center_px = (ctx.cart_side - 1) / 2.0;
  for (const BBox& b : boxes)
    centers.push_back(cartesian_point_to_polar_block(b.cx(), b.cy(), center_px, ctx.mpp, ctx.grid,
                                                     range_res));
  return centers;
}

}  // namespace

void validate(const PipelineConfig& cfg) {
  if (!(cfg.target_rate > 0.0 && cfg.target_rate <= 1.0))
    throw std::invalid_argument("pipeline: target_rate must be in (0, 1]");
  // Standard acquisition has no anchors; all other modes boost them.
  if (cfg.mode != Mode::StandardCs &&
      !(cfg.anchor_rate >= cfg.target_rate && cfg.anchor_rate <= 1.0))
    throw std::invalid_argument("pipeline: need target_rate <= anchor_rate <= 1");
  if (cfg.anchor_period < 1) throw std::invalid_argument("pipeline: anchor_period must be >= 1");
  if (cfg.sample_bits < 1 || cfg.sample_bits > 32)
    throw std::invalid_argument("pipeline: sample_bits must be in [1, 32]");
  if (cfg.quantize_bits < 1 || cfg.quantize_bits > 16)
    throw std::invalid_argument("pipeline: quantize_bits must be in [1, 16]");
  validate(cfg.tracker);
  validate(cfg.cfar);
  if (cfg.calibration) validate(*cfg.calibration);
}

bool anchor_schedule(int frame_index, int period) {
  if (frame_index < 1) throw std::invalid_argument("anchor_schedule: frame indices start at 1");
  if (period < 1) throw std::invalid_argument("anchor_schedule: period must be >= 1");
  return (frame_index - 1) % period == 0;
}

std::vector<FrameResult> run_comprpd(const std::vector<RadarFrame>& frames,
                                     const DetectionProvider& detector,
                                     const PipelineConfig& cfg) {
  validate(cfg);
  if (cfg.mode != Mode::CompRpd && cfg.mode != Mode::Rd)
    throw std::invalid_argument("run_comprpd: mode must be comprpd or rd");
  const Context ctx = make_context(frames, cfg);
  const bool use_kalman = cfg.mode == Mode::CompRpd;
  Tracker tracker(cfg.tracker);

  std::vector<FrameResult> results;
  results.reserve(frames.size());
  for (int t = 1; t <= static_cast<int>(frames.size()); ++t) {
    const RadarFrame& frame = frames[t - 1];
    FrameResult fr;
    if (anchor_schedule(t, cfg.anchor_period)) {
      fr = acquire_anchor(frame, ctx, cfg);
    } else {
      const FrameResult& prev = results.back();
      std::vector<BBox> det_boxes;
      det_boxes.reserve(prev.detections.size());
      for (const Detection& d : prev.detections) det_boxes.push_back(d.bbox);

      fr.final_bb = use_kalman ? tracker.step(det_boxes, prev.is_anchor) : det_boxes;
      const auto important = mark_important_blocks(
          final_bb_centers(fr.final_bb, ctx, frame.range_res), ctx.grid, cfg.occlusion_shadow);
      const SamplingPlan plan = important_set_plan(important, ctx, cfg, &fr.lp_infeasible);
      acquire(frame, ctx, cfg, plan, cfg.target_rate, fr);
    }
    attach_detections(fr, t, ctx, cfg, &detector);
    results.push_back(std::move(fr));
  }
  return results;
}

std::vector<FrameResult> run_standard_cs(const std::vector<RadarFrame>& frames,
                                         const PipelineConfig& cfg,
                                         const DetectionProvider* detector) {
  validate(cfg);
  const Context ctx = make_context(frames, cfg);
  std::vector<FrameResult> results;
  results.reserve(frames.size());
  for (int t = 1; t <= static_cast<int>(frames.size()); ++t) {
    FrameResult fr;
    acquire(frames[t - 1], ctx, cfg,
            uniform_plan(ctx.grid, cfg.target_rate, "{\"mode\":\"standard-cs\"}"),
            cfg.target_rate, fr);
    attach_detections(fr, t, ctx, cfg, detector);
    results.push_back(std::move(fr));
  }
  return results;
}

std::vector<FrameResult> run_cfar_baseline(const std::vector<RadarFrame>& frames,
                                           const PipelineConfig& cfg,
                                           const DetectionProvider* detector) {
  validate(cfg);
  const Context ctx = make_context(frames, cfg);
  std::vector<FrameResult> results;
  results.reserve(frames.size());
  for (int t = 1; t <= static_cast<int>(frames.size()); ++t) {
    const RadarFrame& frame = frames[t - 1];
    FrameResult fr;
    if (anchor_schedule(t, cfg.anchor_period)) {
      fr = acquire_anchor(frame, ctx, cfg);
    } else {
      const auto flagged =
          cfar_important_blocks(results.back().reconstruction, ctx.grid, cfg.cfar, cfg.exec);
      const SamplingPlan plan = important_set_plan(flagged, ctx, cfg, &fr.lp_infeasible);
      acquire(frame, ctx, cfg, plan, cfg.target_rate, fr);
    }
    attach_detections(fr, t, ctx, cfg, detector);
    results.push_back(std::move(fr));
  }
  return results;
}

std::vector<FrameResult> run_compradimg(const std::vector<RadarFrame>& frames,
                                        const DetectionProvider& image_detections,
                                        const PipelineConfig& cfg,
                                        const DetectionProvider* radar_detector) {
  validate(cfg);
  if (!cfg.calibration)
    throw std::invalid_argument("run_compradimg: camera calibration required");
  const Context ctx = make_context(frames, cfg);
  const CameraCalibration& cal = *cfg.calibration;
  const int r1 = cfg.r1_blocks > 0 ? cfg.r1_blocks : ctx.grid.n_range_blocks / 2;
  if (r1 < 0 || r1 > ctx.grid.n_range_blocks)
    throw std::invalid_argument("run_compradimg: r1_blocks outside the range axis");
  const double budget_fraction =
      cfg.lp1_budget_fraction > 0.0 ? cfg.lp1_budget_fraction : cfg.target_rate;
  const CartesianImage no_image;  // file-backed providers do not inspect it

  std::vector<FrameResult> results;
  results.reserve(frames.size());
  for (int t = 1; t <= static_cast<int>(frames.size()); ++t) {
    const RadarFrame& frame = frames[t - 1];
    FrameResult fr;
    if (anchor_schedule(t, cfg.anchor_period)) {
      fr = acquire_anchor(frame, ctx, cfg);
    } else {
      // Azimuth categories from the previous frame's camera detections.
      Lp1Categories cats;
      cats.r1 = r1;
      for (const Detection& d : image_detections.detect(t - 1, no_image)) {
        AzimuthMapping mapping;
        try {
          mapping = image_bbox_to_azimuth(d.bbox, cal, ctx.grid.n_az_blocks);
        } catch (const std::invalid_argument&) {
          std::fprintf(stderr, "warning: frame %d: camera detection outside the image extent\n",
                       t - 1);
          continue;
        }
        if (d.cls == "pedestrian" || d.cls == "bicycle" || d.cls == "bike")
          cats.a1_azimuths.insert(mapping.az_block);
        else
          cats.a2_azimuths.insert(mapping.az_block);
      }
      for (int az : cats.a1_azimuths) cats.a2_azimuths.erase(az);

      // CFAR promotions from the previous reconstruction; far-range flags and
      // blocks already in the top category are ignored.
      int promoted_a2 = 0, promoted_a3 = 0;
      for (const BlockIndex& b :
           cfar_important_blocks(results.back().reconstruction, ctx.grid, cfg.cfar, cfg.exec)) {
        if (b.rng >= r1 || cats.a1_azimuths.count(b.az)) continue;
        cats.promoted.insert(b);
        if (cats.a2_azimuths.count(b.az))
          ++promoted_a2;
        else
          ++promoted_a3;
      }

      Lp1Inputs lp;
      lp.a1 = static_cast<int>(cats.a1_azimuths.size());
      lp.a2 = static_cast<int>(cats.a2_azimuths.size());
      lp.a3 = ctx.grid.n_az_blocks - lp.a1 - lp.a2;
      lp.r1 = r1;
      lp.r2 = ctx.grid.n_range_blocks - r1;
      lp.b1 = promoted_a2 + promoted_a3;
      lp.b2 = -promoted_a2;
      lp.b3 = -promoted_a3;
      lp.total_blocks = ctx.grid.total_blocks();
      lp.budget_fraction = budget_fraction;
      lp.bounds = cfg.lp1_bounds;

      SamplingPlan plan;
      try {
        plan = plan_from_solution(ctx.grid, cats, solve_lp1(lp));
      } catch (const LpInfeasibleError& e) {
        std::fprintf(stderr, "warning: LP1 infeasible (%s); using the uniform fallback plan\n",
                     e.constraint.c_str());
        fr.lp_infeasible = true;
        plan = uniform_plan(ctx.grid, cfg.target_rate, "{\"lp\":\"lp1\",\"fallback\":\"uniform\"}");
      }
      acquire(frame, ctx, cfg, plan, budget_fraction, fr);
    }
    attach_detections(fr, t, ctx, cfg, radar_detector);
    results.push_back(std::move(fr));
  }
  return results;
}

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::CompRpd: return "comprpd";
    case Mode::CompRadImg: return "compradimg";
    case Mode::Rd: return "rd";
    case Mode::StandardCs: return "standard-cs";
    case Mode::CfarBaseline: return "cfar-baseline";
  }
  return "?";
}

std::string to_string(AnchorKind kind) {
  return kind == AnchorKind::Cs ? "cs" : "quantize3";
}

std::string to_string(MatrixKind kind) {
  switch (kind) {
    case MatrixKind::Gaussian: return "gaussian";
    case MatrixKind::Bpbd: return "bpbd";
    case MatrixKind::Bpd: return "bpd";
  }
  return "?";
}

Mode mode_from_string(const std::string& s) {
  if (s == "comprpd") return Mode::CompRpd;
  if (s == "compradimg") return Mode::CompRadImg;
  if (s == "rd") return Mode::Rd;
  if (s == "standard-cs") return Mode::StandardCs;
  if (s == "cfar-baseline") return Mode::CfarBaseline;
  throw std::invalid_argument("unknown mode: " + s);
}

AnchorKind anchor_kind_from_string(const std::string& s) {
  if (s == "cs") return AnchorKind::Cs;
  if (s == "quantize3") return AnchorKind::Quantize3Bit;
  throw std::invalid_argument("unknown anchor kind: " + s);
}

MatrixKind matrix_kind_from_string(const std::string& s) {
  if (s == "gaussian") return MatrixKind::Gaussian;
  if (s == "bpbd") return MatrixKind::Bpbd;
  if (s == "bpd") return MatrixKind::Bpd;
  throw std::invalid_argument("unknown matrix kind: " + s);
}

}  // namespace radsub
