#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "radsub/cfar.hpp"
#include "radsub/evaluation.hpp"
#include "radsub/io.hpp"
#include "radsub/pipeline.hpp"
#include "radsub/scene.hpp"
#include "radsub/tracking.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace radsub;

namespace {

json psnr_to_json(double value) {
  if (std::isinf(value)) return json("inf");
  return json(value);
}

int cmd_gen_scene(const std::string& config_path, const std::string& out_dir,
                  std::optional<std::uint64_t> seed, const std::string& calibration_path,
                  bool raw) {
  SceneConfig cfg = scene_config_from_json(read_text(config_path));
  if (seed) cfg.seed = *seed;
  std::optional<CameraCalibration> camera;
  if (!calibration_path.empty()) camera = calibration_from_json_file(calibration_path);

  const Scene scene = gen_scene(cfg, camera);
  const fs::path out(out_dir);
  fs::create_directories(out);
  const FrameFormat format = raw ? FrameFormat::RawF32 : FrameFormat::Png16;
  for (const RadarFrame& frame : scene.frames) write_frame(out / "frames", frame, format);

  std::map<int, std::vector<Detection>> gt;
  for (const auto& [frame, boxes] : scene.ground_truth)
    for (const BBox& b : boxes) gt[frame].push_back(Detection{b, 1.0, "vehicle"});
  write_detections_jsonl(out / "gt.jsonl", gt, /*with_score=*/false);
  if (camera && !scene.image_detections.empty())
    write_detections_jsonl(out / "image_detections.jsonl", scene.image_detections);
  write_text(out / "scene.json", to_json(cfg));
  std::printf("wrote %zu frames to %s\n", scene.frames.size(), (out / "frames").c_str());
  return 0;
}

int cmd_run(PipelineConfig cfg, const std::string& frames_dir, const std::string& out_dir,
            const std::string& detections_path, const std::string& image_detections_path,
            bool dump_measurements, bool raw) {
  const auto frames = read_frame_dir(frames_dir);
  const fs::path out(out_dir);
  fs::create_directories(out);

  DetectionProvider detector = detections_path.empty()
                                   ? DetectionProvider::synthetic()
                                   : DetectionProvider::file_backed(detections_path);

  std::vector<FrameResult> results;
  switch (cfg.mode) {
    case Mode::CompRpd:
    case Mode::Rd:
      results = run_comprpd(frames, detector, cfg);
      break;
    case Mode::StandardCs:
      results = run_standard_cs(frames, cfg, &detector);
      break;
    case Mode::CfarBaseline:
      results = run_cfar_baseline(frames, cfg, &detector);
      break;
    case Mode::CompRadImg: {
      if (image_detections_path.empty())
        throw std::runtime_error("run: --image-detections is required for compradimg");
      const DetectionProvider image_provider =
          DetectionProvider::file_backed(image_detections_path);
      results = run_compradimg(frames, image_provider, cfg, &detector);
      break;
    }
  }

  // Reconstructions mirror the input format unless --raw is given.
  FrameFormat format = FrameFormat::Png16;
  for (const auto& entry : fs::directory_iterator(frames_dir))
    if (entry.path().extension() == ".f32") format = FrameFormat::RawF32;
  if (raw) format = FrameFormat::RawF32;
  std::map<int, std::vector<Detection>> detections;
  std::vector<MeasurementSet> all_sets;
  const BlockGrid grid = partition(frames[0], cfg.block_rows, cfg.block_cols);
  for (std::size_t i = 0; i < results.size(); ++i) {
    const FrameResult& r = results[i];
    write_frame(out / "recon", r.reconstruction, format);
    char name[48];
    std::snprintf(name, sizeof(name), "plan_%06zu.json", i + 1);
    write_plan_json(out / name, r.plan, static_cast<int>(i + 1));
    if (!r.detections.empty()) detections[static_cast<int>(i + 1)] = r.detections;
    if (dump_measurements && !r.is_anchor) {
      auto sets = compress_frame(frames[i], grid, r.plan, cfg.matrix_kind, cfg.base_seed,
                                 cfg.exec);
      all_sets.insert(all_sets.end(), sets.begin(), sets.end());
    }
  }
  write_budget_csv(out / "budget.csv", results);
  write_detections_jsonl(out / "detections.jsonl", detections);
  if (dump_measurements) write_measurement_sets(out / "measurements.rsm", all_sets);
  write_text(out / "manifest.json", to_json(cfg));

  long total_meas = 0;
  double total_bits = 0;
  for (const FrameResult& r : results) {
    total_meas += r.measurements;
    total_bits += r.bits;
  }
  std::printf("%s: %zu frames, %ld measurements, %.0f bits\n", to_string(cfg.mode).c_str(),
              results.size(), total_meas, total_bits);
  return 0;
}

int cmd_cfar(const std::string& frame_path, const std::string& out_dir, const CfarParams& params,
             int block_rows, int block_cols) {
  const RadarFrame frame = read_frame(frame_path);
  const fs::path out(out_dir);
  fs::create_directories(out);
  const auto mask = cfar_mask(frame, params);
  write_mask_png(out / "cfar_mask.png", mask);

  const BlockGrid grid = partition(frame, block_rows, block_cols);
  json blocks = json::array();
  for (const BlockIndex& b : cfar_important_blocks(frame, grid, params))
    blocks.push_back({{"az", b.az}, {"rng", b.rng}});
  write_text(out / "cfar_blocks.json",
             json{{"frame", frame.frame_index}, {"blocks", std::move(blocks)}}.dump(2) + "\n");
  std::printf("cfar: %ld cells flagged\n", static_cast<long>(mask.cast<int>().sum()));
  return 0;
}

int cmd_plan(const std::string& lp, const std::string& inputs_path, const std::string& out_path) {
  const json in = json::parse(read_text(inputs_path));
  json doc;
  if (lp == "lp1") {
    Lp1Inputs inputs;
    inputs.a1 = in.at("a1").get<int>();
    inputs.a2 = in.at("a2").get<int>();
    inputs.a3 = in.at("a3").get<int>();
    inputs.r1 = in.at("r1").get<int>();
    inputs.r2 = in.at("r2").get<int>();
    inputs.b1 = in.value("b1", 0);
    inputs.b2 = in.value("b2", 0);
    inputs.b3 = in.value("b3", 0);
    inputs.total_blocks = in.at("total_blocks").get<int>();
    inputs.budget_fraction = in.value("budget_fraction", inputs.budget_fraction);
    const Lp1Rates rates = solve_lp1(inputs);
    doc = json{{"lp", "lp1"},
               {"inputs", in},
               {"solution",
                {{"x1", rates.x1}, {"x2", rates.x2}, {"x3", rates.x3}, {"x4", rates.x4},
                 {"objective", rates.objective}}}};
  } else if (lp == "lp2") {
    Lp2Inputs inputs;
    inputs.important_blocks = in.at("I").get<int>();
    inputs.other_blocks = in.at("O").get<int>();
    inputs.block_cols = in.at("w").get<int>();
    inputs.block_rows = in.at("h").get<int>();
    inputs.sample_budget = in.at("S").get<double>();
    inputs.x1_lower = in.at("x1_lower").get<double>();
    inputs.x1_upper = in.value("x1_upper", inputs.x1_upper);
    inputs.x2_lower = in.value("x2_lower", inputs.x2_lower);
    inputs.x2_upper = in.at("x2_upper").get<double>();
    const Lp2Rates rates = solve_lp2(inputs);
    doc = json{{"lp", "lp2"},
               {"inputs", in},
               {"solution", {{"x1", rates.x1}, {"x2", rates.x2}, {"objective", rates.objective}}}};
  } else {
    throw std::runtime_error("plan: --lp must be lp1 or lp2");
  }
  const std::string text = doc.dump(2) + "\n";
  if (out_path.empty())
    std::fputs(text.c_str(), stdout);
  else
    write_text(out_path, text);
  return 0;
}

int cmd_track(const std::string& detections_path, const std::string& out_path,
              const TrackerConfig& config, int anchor_period) {
  const auto by_frame = read_detections_jsonl(detections_path);
  if (by_frame.empty()) throw std::runtime_error("track: no detections in " + detections_path);
  const int last = by_frame.rbegin()->first;

  Tracker tracker(config);
  std::ofstream out(out_path);
  if (!out) throw std::runtime_error("track: cannot open " + out_path + " for writing");
  bool post_anchor = true;
  for (int t = by_frame.begin()->first; t <= last; ++t) {
    std::vector<BBox> boxes;
    if (const auto it = by_frame.find(t); it != by_frame.end())
      for (const Detection& d : it->second) boxes.push_back(d.bbox);
    const auto final_bb = tracker.step(boxes, post_anchor);
    post_anchor = anchor_period > 0 && anchor_schedule(t, anchor_period);
    for (const BBox& b : final_bb)
      out << json{{"frame", t}, {"bbox", {b.x, b.y, b.w, b.h}}, {"kind", "final"}}.dump() << "\n";
    for (const Track& track : tracker.tracks()) {
      const BBox b = track.bbox();
      out << json{{"frame", t},
                  {"track_id", track.id},
                  {"bbox", {b.x, b.y, b.w, b.h}},
                  {"age", track.age},
                  {"time_since_update", track.time_since_update},
                  {"kind", "track"}}
                 .dump()
          << "\n";
    }
  }
  return 0;
}

int cmd_eval(const std::string& orig_dir, const std::string& recon_dir,
             const std::string& detections_path, const std::string& gt_path,
             const std::string& out_dir, bool pr_svg) {
  const auto originals = read_frame_dir(orig_dir);
  const auto recons = read_frame_dir(recon_dir);
  if (originals.size() != recons.size())
    throw std::runtime_error("eval: original and reconstruction counts differ");
  const fs::path out(out_dir);
  fs::create_directories(out);

  std::ofstream csv(out / "per_frame.csv");
  csv << "frame,psnr_db\n";
  std::vector<double> psnrs;
  double mean_accum = 0.0;
  long finite = 0;
  for (std::size_t i = 0; i < originals.size(); ++i) {
    const double value = psnr(originals[i], recons[i]);
    psnrs.push_back(value);
    if (std::isfinite(value)) {
      mean_accum += value;
      ++finite;
    }
    csv << originals[i].frame_index << "," << (std::isinf(value) ? "inf" : std::to_string(value))
        << "\n";
  }

  json doc;
  doc["frames"] = originals.size();
  doc["mean_psnr_db"] = finite > 0 ? json(mean_accum / finite) : json("inf");
  {
    json arr = json::array();
    for (double v : psnrs) arr.push_back(psnr_to_json(v));
    doc["per_frame_psnr_db"] = std::move(arr);
  }

  // When the reconstructions come from a run directory, echo its budget
  // accounting and configuration into the report.
  const fs::path run_dir = fs::path(recon_dir).parent_path();
  if (fs::exists(run_dir / "budget.csv")) {
    std::ifstream csv(run_dir / "budget.csv");
    std::string line;
    std::getline(csv, line);  // header
    double total_budget = 0, total_bits = 0;
    long total_meas = 0, frames = 0;
    while (std::getline(csv, line)) {
      std::vector<std::string> cells;
      std::size_t pos = 0;
      while (true) {
        const auto comma = line.find(',', pos);
        cells.push_back(line.substr(pos, comma - pos));
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
      if (cells.size() != 7) continue;
      total_budget += std::stod(cells[2]);
      total_meas += std::stol(cells[3]);
      total_bits += std::stod(cells[4]);
      ++frames;
    }
    doc["budget"] = {{"total_budget_samples", total_budget},
                     {"total_measurements", total_meas},
                     {"total_bits", total_bits},
                     {"mean_measurements_per_frame",
                      frames > 0 ? total_meas / static_cast<double>(frames) : 0.0}};
  }
  if (fs::exists(run_dir / "manifest.json"))
    doc["run_config"] = json::parse(read_text(run_dir / "manifest.json"));

  if (!detections_path.empty() && !gt_path.empty()) {
    const auto detections = read_detections_jsonl(detections_path);
    const auto gt = read_gt_jsonl(gt_path);
    const ApResult ap = average_precision(detections, gt);
    doc["ap"] = ap.defined ? json(ap.ap) : json();
    doc["ap50"] = ap.defined ? json(ap.ap50) : json();
    if (pr_svg) write_pr_svg(out / "pr.svg", precision_recall_curve(detections, gt));
  }
  write_text(out / "report.json", doc.dump(2) + "\n");
  std::fputs((doc.dump(2) + "\n").c_str(), stdout);
  return 0;
}

int cmd_convert(const std::string& in_path, const std::string& out_path) {
  const RadarFrame frame = read_frame(in_path);
  const fs::path out(out_path);
  FrameFormat format;
  if (out.extension() == ".png")
    format = FrameFormat::Png16;
  else if (out.extension() == ".f32")
    format = FrameFormat::RawF32;
  else
    throw std::runtime_error("convert: output extension must be .png or .f32");
  write_frame(out.parent_path().empty() ? fs::path(".") : out.parent_path(), frame, format);
  const fs::path written =
      (out.parent_path().empty() ? fs::path(".") : out.parent_path()) /
      frame_file_name(frame.frame_index, format);
  if (written != out) {
    fs::rename(written, out);
    fs::path sidecar = written;
    sidecar.replace_extension(".json");
    fs::path target = out;
    target.replace_extension(".json");
    fs::rename(sidecar, target);
  }
  std::printf("wrote %s\n", out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prior-guided adaptive sub-sampling of range-azimuth radar frames"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", frames_dir, detections_path, image_detections_path;
  std::string calibration_path, gt_path, orig_dir, recon_dir, in_path, out_path, lp = "lp2";
  std::optional<std::uint64_t> seed;
  bool raw = false, dump_measurements = false, pr_svg = false;

  auto* gen = app.add_subcommand("gen-scene", "Generate a synthetic scene");
  gen->add_option("--config", config_path, "Scene config JSON")->required();
  gen->add_option("--out", out_dir, "Output directory");
  gen->add_option("--seed", seed, "Override the scene seed");
  gen->add_option("--calibration", calibration_path,
                  "Camera calibration JSON; also emits synthetic camera detections");
  gen->add_flag("--raw", raw, "Write raw float32 frames instead of 16-bit PNG");

  auto* run = app.add_subcommand("run", "Run an acquisition pipeline over a frame directory");
  std::string mode = "comprpd", matrix = "bpd", anchor_kind = "cs";
  double rate = 0.2;
  int anchor_period = 20;
  std::optional<std::uint64_t> run_seed;
  std::string run_config;
  bool no_shadow = false, serial = false;
  run->add_option("--frames", frames_dir, "Input frame directory")->required();
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--mode", mode, "comprpd|rd|compradimg|standard-cs|cfar-baseline");
  run->add_option("--rate", rate, "Target sampling rate");
  run->add_option("--anchor-period", anchor_period, "Frames between anchors");
  run->add_option("--anchor-kind", anchor_kind, "cs|quantize3");
  run->add_option("--matrix", matrix, "bpd|bpbd|gaussian");
  run->add_option("--seed", run_seed, "Base seed for measurement matrices");
  run->add_option("--config", run_config, "Pipeline config JSON (flags override it)");
  run->add_option("--detections", detections_path,
                  "Radar detections JSONL (default: built-in synthetic detector)");
  run->add_option("--image-detections", image_detections_path,
                  "Camera detections JSONL (compradimg)");
  run->add_option("--calibration", calibration_path, "Camera calibration JSON (compradimg)");
  run->add_flag("--no-occlusion-shadow", no_shadow, "Disable the inverted-T shadow block");
  run->add_flag("--dump-measurements", dump_measurements,
                "Also write measurements.rsm for non-anchor frames");
  run->add_flag("--raw", raw, "Write raw float32 reconstructions");
  run->add_flag("--serial", serial, "Force the serial reference kernels");

  auto* cfar_cmd = app.add_subcommand("cfar", "CFAR mask and important blocks for one frame");
  CfarParams cfar_params;
  int block_rows = 20, block_cols = 48;
  cfar_cmd->add_option("--frame", in_path, "Frame file (.png or .f32)")->required();
  cfar_cmd->add_option("--out", out_dir, "Output directory");
  cfar_cmd->add_option("--train", cfar_params.n_train, "Training cells (total)");
  cfar_cmd->add_option("--guard", cfar_params.n_guard, "Guard cells (total)");
  cfar_cmd->add_option("--pfa", cfar_params.pfa, "Design false-alarm probability");
  cfar_cmd->add_option("--block-rows", block_rows, "Azimuth bins per block");
  cfar_cmd->add_option("--block-cols", block_cols, "Range bins per block");

  auto* plan = app.add_subcommand("plan", "Solve an allocation program and print it as JSON");
  plan->add_option("--lp", lp, "lp1|lp2");
  plan->add_option("--inputs,--config", config_path, "Program inputs JSON")->required();
  plan->add_option("--out", out_path, "Write JSON here instead of stdout");

  auto* track = app.add_subcommand("track", "Run the tracker over a detections file");
  TrackerConfig tracker_config;
  int track_anchor_period = 0;
  track->add_option("--detections", detections_path, "Detections JSONL")->required();
  track->add_option("--out", out_path, "Track dump JSONL")->required();
  track->add_option("--min-age", tracker_config.min_age, "Matches before predictions are used");
  track->add_option("--max-age", tracker_config.max_age, "Unmatched frames before deletion");
  track->add_option("--anchor-period", track_anchor_period,
                    "Reinitialize after anchor frames (0 = never)");

  auto* eval = app.add_subcommand("eval", "PSNR and AP/AP50 report for a run");
  eval->add_option("--orig", orig_dir, "Original frame directory")->required();
  eval->add_option("--recon", recon_dir, "Reconstructed frame directory")->required();
  eval->add_option("--detections", detections_path, "Detections JSONL");
  eval->add_option("--gt", gt_path, "Ground-truth JSONL");
  eval->add_option("--out", out_dir, "Output directory");
  eval->add_flag("--pr-svg", pr_svg, "Also write a precision-recall SVG");

  auto* convert = app.add_subcommand("convert", "Convert a frame between raw f32 and 16-bit PNG");
  convert->add_option("--in", in_path, "Input frame file")->required();
  convert->add_option("--out", out_path, "Output frame file (.png or .f32)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed())
      return cmd_gen_scene(config_path, out_dir, seed, calibration_path, raw);
    if (run->parsed()) {
      PipelineConfig cfg;
      if (!run_config.empty()) cfg = pipeline_config_from_json(read_text(run_config));
      if (run->count("--mode") || run_config.empty()) cfg.mode = mode_from_string(mode);
      if (run->count("--rate") || run_config.empty()) cfg.target_rate = rate;
      if (run->count("--anchor-period") || run_config.empty()) cfg.anchor_period = anchor_period;
      if (run->count("--anchor-kind")) cfg.anchor_kind = anchor_kind_from_string(anchor_kind);
      if (run->count("--matrix")) cfg.matrix_kind = matrix_kind_from_string(matrix);
      if (run_seed) cfg.base_seed = *run_seed;
      if (no_shadow) cfg.occlusion_shadow = false;
      if (serial) cfg.exec = Exec::Serial;
      if (!calibration_path.empty())
        cfg.calibration = calibration_from_json_file(calibration_path);
      return cmd_run(cfg, frames_dir, out_dir, detections_path, image_detections_path,
                     dump_measurements, raw);
    }
    if (cfar_cmd->parsed())
      return cmd_cfar(in_path, out_dir, cfar_params, block_rows, block_cols);
    if (plan->parsed()) return cmd_plan(lp, config_path, out_path);
    if (track->parsed())
      return cmd_track(detections_path, out_path, tracker_config, track_anchor_period);
    if (eval->parsed())
      return cmd_eval(orig_dir, recon_dir, detections_path, gt_path, out_dir, pr_svg);
    if (convert->parsed()) return cmd_convert(in_path, out_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
