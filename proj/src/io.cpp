#include "radsub/io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace radsub {
namespace {

using nlohmann::json;

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

void write_png16_impl(const std::filesystem::path& path, const Eigen::MatrixXf& data,
                      float scale_max) {
  FilePtr fp(std::fopen(path.string().c_str(), "wb"));
  if (!fp) throw std::runtime_error("png: cannot open " + path.string() + " for writing");

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("png: create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw std::runtime_error("png: create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw std::runtime_error("png: write error for " + path.string());
  }

  const int rows = static_cast<int>(data.rows());
  const int cols = static_cast<int>(data.cols());
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, cols, rows, 16, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
               PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_set_swap(png);  // rows below are host little-endian

  std::vector<std::uint16_t> row(cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      double v = data(i, j) / scale_max;
      v = std::min(1.0, std::max(0.0, v));
      row[j] = static_cast<std::uint16_t>(std::lround(v * 65535.0));
    }
    png_write_row(png, reinterpret_cast<png_bytep>(row.data()));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

Eigen::MatrixXf read_png16_impl(const std::filesystem::path& path, float scale_max) {
  FilePtr fp(std::fopen(path.string().c_str(), "rb"));
  if (!fp) throw std::runtime_error("png: cannot open " + path.string());

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw std::runtime_error("png: create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw std::runtime_error("png: create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("png: read error for " + path.string());
  }

  png_init_io(png, fp.get());
  png_read_info(png, info);
  if (png_get_bit_depth(png, info) != 16 ||
      png_get_color_type(png, info) != PNG_COLOR_TYPE_GRAY) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw std::runtime_error("png: " + path.string() + " is not 16-bit grayscale");
  }
  const int cols = static_cast<int>(png_get_image_width(png, info));
  const int rows = static_cast<int>(png_get_image_height(png, info));
  png_set_swap(png);

  Eigen::MatrixXf data(rows, cols);
  std::vector<std::uint16_t> row(cols);
  for (int i = 0; i < rows; ++i) {
    png_read_row(png, reinterpret_cast<png_bytep>(row.data()), nullptr);
    for (int j = 0; j < cols; ++j)
      data(i, j) = static_cast<float>(row[j]) * scale_max / 65535.0f;
  }
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return data;
}

json sidecar_json(const RadarFrame& frame, FrameFormat format) {
  return json{{"rows", frame.rows()},
              {"cols", frame.cols()},
              {"azimuth_res", frame.azimuth_res},
              {"range_res", frame.range_res},
              {"peak_value", frame.peak_value},
              {"frame_index", frame.frame_index},
              {"format", format == FrameFormat::Png16 ? "png16" : "f32"},
              {"azimuth_origin", "vehicle heading (north in Cartesian renderings), clockwise"}};
}

std::filesystem::path sidecar_path(const std::filesystem::path& frame_path) {
  std::filesystem::path p = frame_path;
  p.replace_extension(".json");
  return p;
}

template <typename T>
void put_le(std::string& out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  out.append(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get_le(const std::string& in, std::size_t& offset) {
  if (offset + sizeof(T) > in.size())
    throw std::runtime_error("measurement file: truncated record");
  T value;
  std::memcpy(&value, in.data() + offset, sizeof(T));
  offset += sizeof(T);
  return value;
}

}  // namespace

std::filesystem::path frame_file_name(int frame_index, FrameFormat format) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%06d.%s", frame_index,
                format == FrameFormat::Png16 ? "png" : "f32");
  return buf;
}

void write_frame(const std::filesystem::path& dir, const RadarFrame& frame, FrameFormat format) {
  std::filesystem::create_directories(dir);
  const auto path = dir / frame_file_name(frame.frame_index, format);
  if (format == FrameFormat::Png16) {
    write_png16_impl(path, frame.data, frame.peak_value);
  } else {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("frame: cannot open " + path.string() + " for writing");
    std::vector<float> row(frame.cols());
    for (int i = 0; i < frame.rows(); ++i) {
      for (int j = 0; j < frame.cols(); ++j) row[j] = frame.data(i, j);
      out.write(reinterpret_cast<const char*>(row.data()),
                static_cast<std::streamsize>(row.size() * sizeof(float)));
    }
  }
  write_text(sidecar_path(path), sidecar_json(frame, format).dump(2) + "\n");
}

RadarFrame read_frame(const std::filesystem::path& frame_path) {
  const json meta = json::parse(read_text(sidecar_path(frame_path)));
  const int rows = meta.at("rows").get<int>();
  const int cols = meta.at("cols").get<int>();
  const float peak = meta.at("peak_value").get<float>();

  Eigen::MatrixXf data;
  if (frame_path.extension() == ".png") {
    data = read_png16_impl(frame_path, peak);
    if (data.rows() != rows || data.cols() != cols)
      throw std::runtime_error("frame: " + frame_path.string() + " shape disagrees with sidecar");
  } else {
    std::ifstream in(frame_path, std::ios::binary);
    if (!in) throw std::runtime_error("frame: cannot open " + frame_path.string());
    data.resize(rows, cols);
    std::vector<float> row(cols);
    for (int i = 0; i < rows; ++i) {
      in.read(reinterpret_cast<char*>(row.data()),
              static_cast<std::streamsize>(row.size() * sizeof(float)));
      if (!in) throw std::runtime_error("frame: " + frame_path.string() + " truncated");
      for (int j = 0; j < cols; ++j) data(i, j) = row[j];
    }
  }
  return make_frame(std::move(data), meta.at("azimuth_res").get<double>(),
                    meta.at("range_res").get<double>(), peak, meta.at("frame_index").get<int>());
}

std::vector<RadarFrame> read_frame_dir(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> paths;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    const auto ext = entry.path().extension();
    if (ext == ".png" || ext == ".f32") paths.push_back(entry.path());
  }
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) throw std::runtime_error("frames: no frame files in " + dir.string());
  std::vector<RadarFrame> frames;
  frames.reserve(paths.size());
  for (const auto& p : paths) frames.push_back(read_frame(p));
  std::sort(frames.begin(), frames.end(),
            [](const RadarFrame& a, const RadarFrame& b) { return a.frame_index < b.frame_index; });
  return frames;
}

void write_mask_png(const std::filesystem::path& path,
                    const Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>& mask) {
  write_png16_impl(path, mask.cast<float>(), 1.0f);
}

void write_detections_jsonl(const std::filesystem::path& path,
                            const std::map<int, std::vector<Detection>>& detections,
                            bool with_score) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("detections: cannot open " + path.string() + " for writing");
  for (const auto& [frame, dets] : detections) {
    for (const Detection& d : dets) {
      json record{{"frame", frame},
                  {"bbox", {d.bbox.x, d.bbox.y, d.bbox.w, d.bbox.h}},
                  {"class", d.cls}};
      if (with_score) record["score"] = d.score;
      out << record.dump() << "\n";
    }
  }
}

std::map<int, std::vector<Detection>> read_detections_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("detections: cannot open " + path.string());
  std::map<int, std::vector<Detection>> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json record = json::parse(line);
    Detection d;
    const auto& bbox = record.at("bbox");
    d.bbox = BBox{bbox.at(0).get<double>(), bbox.at(1).get<double>(), bbox.at(2).get<double>(),
                  bbox.at(3).get<double>()};
    d.score = record.value("score", 1.0);
    d.cls = record.value("class", std::string("vehicle"));
    out[record.at("frame").get<int>()].push_back(std::move(d));
  }
  return out;
}

std::map<int, std::vector<BBox>> read_gt_jsonl(const std::filesystem::path& path) {
  std::map<int, std::vector<BBox>> out;
  for (const auto& [frame, dets] : read_detections_jsonl(path)) {
    auto& boxes = out[frame];
    for (const Detection& d : dets) boxes.push_back(d.bbox);
  }
  return out;
}

void write_measurement_sets(const std::filesystem::path& path,
                            const std::vector<MeasurementSet>& sets) {
  std::string buf;
  for (const MeasurementSet& ms : sets) {
    buf.append("RSM1", 4);
    std::uint8_t kind = 2;
    if (ms.matrix.kind == MatrixKind::Gaussian) kind = 0;
    if (ms.matrix.kind == MatrixKind::Bpbd) kind = 1;
    put_le(buf, kind);
    buf.append(3, '\0');
    put_le(buf, static_cast<std::uint32_t>(ms.matrix.m));
    put_le(buf, static_cast<std::uint32_t>(ms.matrix.n));
    put_le(buf, static_cast<std::uint64_t>(ms.matrix.seed));
    put_le(buf, static_cast<std::uint32_t>(ms.frame_index));
    put_le(buf, static_cast<std::uint16_t>(ms.block.az));
    put_le(buf, static_cast<std::uint16_t>(ms.block.rng));
    for (Eigen::Index i = 0; i < ms.y.size(); ++i)
      put_le(buf, static_cast<float>(ms.y[i]));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("measurements: cannot open " + path.string() + " for writing");
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

std::vector<MeasurementSet> read_measurement_sets(const std::filesystem::path& path) {
  const std::string buf = read_text(path);
  std::vector<MeasurementSet> sets;
  std::size_t offset = 0;
  while (offset < buf.size()) {
    if (buf.compare(offset, 4, "RSM1") != 0)
      throw std::runtime_error("measurement file: bad magic at offset " + std::to_string(offset));
    offset += 4;
    const auto kind_byte = get_le<std::uint8_t>(buf, offset);
    offset += 3;  // padding
    MeasurementSet ms;
    switch (kind_byte) {
      case 0: ms.matrix.kind = MatrixKind::Gaussian; break;
      case 1: ms.matrix.kind = MatrixKind::Bpbd; break;
      case 2: ms.matrix.kind = MatrixKind::Bpd; break;
      default: throw std::runtime_error("measurement file: unknown matrix kind");
    }
    ms.matrix.m = static_cast<int>(get_le<std::uint32_t>(buf, offset));
    ms.matrix.n = static_cast<int>(get_le<std::uint32_t>(buf, offset));
    ms.matrix.seed = get_le<std::uint64_t>(buf, offset);
    ms.frame_index = static_cast<int>(get_le<std::uint32_t>(buf, offset));
    ms.block.az = get_le<std::uint16_t>(buf, offset);
    ms.block.rng = get_le<std::uint16_t>(buf, offset);
    ms.y.resize(ms.matrix.m);
    for (int i = 0; i < ms.matrix.m; ++i) ms.y[i] = get_le<float>(buf, offset);
    sets.push_back(std::move(ms));
  }
  return sets;
}

void write_budget_csv(const std::filesystem::path& path, const std::vector<FrameResult>& results) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("budget: cannot open " + path.string() + " for writing");
  out << "frame,is_anchor,budget_samples,measurements,bits,bits_per_sample,lp_infeasible\n";
  char line[256];
  for (std::size_t i = 0; i < results.size(); ++i) {
    const FrameResult& r = results[i];
    std::snprintf(line, sizeof(line), "%zu,%d,%.3f,%ld,%.3f,%.6f,%d\n", i + 1,
                  r.is_anchor ? 1 : 0, r.budget_samples, r.measurements, r.bits, r.bits_per_sample,
                  r.lp_infeasible ? 1 : 0);
    out << line;
  }
}

void write_plan_json(const std::filesystem::path& path, const SamplingPlan& plan,
                     int frame_index) {
  json rates = json::array();
  for (Eigen::Index a = 0; a < plan.rates.rows(); ++a) {
    json row = json::array();
    for (Eigen::Index r = 0; r < plan.rates.cols(); ++r) row.push_back(plan.rates(a, r));
    rates.push_back(std::move(row));
  }
  json doc{{"frame", frame_index}, {"rates", std::move(rates)}};
  doc["provenance"] = plan.provenance.empty() ? json() : json::parse(plan.provenance);
  write_text(path, doc.dump(2) + "\n");
}

std::string to_json(const PipelineConfig& cfg) {
  json doc{{"mode", to_string(cfg.mode)},
           {"target_rate", cfg.target_rate},
           {"anchor_period", cfg.anchor_period},
           {"anchor_rate", cfg.anchor_rate},
           {"anchor_kind", to_string(cfg.anchor_kind)},
           {"quantize_bits", cfg.quantize_bits},
           {"matrix", to_string(cfg.matrix_kind)},
           {"seed", cfg.base_seed},
           {"block_rows", cfg.block_rows},
           {"block_cols", cfg.block_cols},
           {"sample_bits", cfg.sample_bits},
           {"x1_upper", cfg.x1_upper},
           {"x2_lower", cfg.x2_lower},
           {"occlusion_shadow", cfg.occlusion_shadow},
           {"r1_blocks", cfg.r1_blocks},
           {"lp1_budget_fraction", cfg.lp1_budget_fraction},
           {"lp1_bounds",
            {{"x_lower", cfg.lp1_bounds.x_lower},
             {"x_upper", cfg.lp1_bounds.x_upper},
             {"x4_lower", cfg.lp1_bounds.x4_lower},
             {"x4_upper", cfg.lp1_bounds.x4_upper}}},
           {"cartesian_side", cfg.cartesian_side},
           {"meters_per_pixel", cfg.meters_per_pixel},
           {"tracker",
            {{"min_age", cfg.tracker.min_age},
             {"max_age", cfg.tracker.max_age},
             {"process_noise_pos", cfg.tracker.process_noise_pos},
             {"process_noise_vel", cfg.tracker.process_noise_vel},
             {"process_noise_size", cfg.tracker.process_noise_size},
             {"measurement_noise", cfg.tracker.measurement_noise},
             {"initial_velocity_var", cfg.tracker.initial_velocity_var},
             {"optimal_assignment", cfg.tracker.optimal_assignment}}},
           {"cfar",
            {{"n_train", cfg.cfar.n_train},
             {"n_guard", cfg.cfar.n_guard},
             {"pfa", cfg.cfar.pfa}}},
           {"solver",
            {{"max_iterations", cfg.solver.max_iterations},
             {"rho", cfg.solver.rho},
             {"over_relaxation", cfg.solver.over_relaxation},
             {"abs_tolerance", cfg.solver.abs_tolerance},
             {"rel_tolerance", cfg.solver.rel_tolerance},
             {"polish", cfg.solver.polish}}},
           {"parallel", cfg.exec == Exec::Parallel}};
  if (cfg.calibration)
    doc["calibration"] = {{"theta_min_deg", cfg.calibration->theta_min_deg},
                          {"theta_max_deg", cfg.calibration->theta_max_deg},
                          {"x_min", cfg.calibration->x_min},
                          {"x_max", cfg.calibration->x_max}};
  return doc.dump(2) + "\n";
}

PipelineConfig pipeline_config_from_json(const std::string& text) {
  const json doc = json::parse(text);
  PipelineConfig cfg;
  if (doc.contains("mode")) cfg.mode = mode_from_string(doc["mode"].get<std::string>());
  cfg.target_rate = doc.value("target_rate", cfg.target_rate);
  cfg.anchor_period = doc.value("anchor_period", cfg.anchor_period);
  cfg.anchor_rate = doc.value("anchor_rate", cfg.anchor_rate);
  if (doc.contains("anchor_kind"))
    cfg.anchor_kind = anchor_kind_from_string(doc["anchor_kind"].get<std::string>());
  cfg.quantize_bits = doc.value("quantize_bits", cfg.quantize_bits);
  if (doc.contains("matrix"))
    cfg.matrix_kind = matrix_kind_from_string(doc["matrix"].get<std::string>());
  cfg.base_seed = doc.value("seed", cfg.base_seed);
  cfg.block_rows = doc.value("block_rows", cfg.block_rows);
  cfg.block_cols = doc.value("block_cols", cfg.block_cols);
  cfg.sample_bits = doc.value("sample_bits", cfg.sample_bits);
  cfg.x1_upper = doc.value("x1_upper", cfg.x1_upper);
  cfg.x2_lower = doc.value("x2_lower", cfg.x2_lower);
  cfg.occlusion_shadow = doc.value("occlusion_shadow", cfg.occlusion_shadow);
  cfg.r1_blocks = doc.value("r1_blocks", cfg.r1_blocks);
  cfg.lp1_budget_fraction = doc.value("lp1_budget_fraction", cfg.lp1_budget_fraction);
  if (doc.contains("lp1_bounds")) {
    const auto& b = doc["lp1_bounds"];
    cfg.lp1_bounds.x_lower = b.value("x_lower", cfg.lp1_bounds.x_lower);
    cfg.lp1_bounds.x_upper = b.value("x_upper", cfg.lp1_bounds.x_upper);
    cfg.lp1_bounds.x4_lower = b.value("x4_lower", cfg.lp1_bounds.x4_lower);
    cfg.lp1_bounds.x4_upper = b.value("x4_upper", cfg.lp1_bounds.x4_upper);
  }
  cfg.cartesian_side = doc.value("cartesian_side", cfg.cartesian_side);
  cfg.meters_per_pixel = doc.value("meters_per_pixel", cfg.meters_per_pixel);
  if (doc.contains("tracker")) {
    const auto& t = doc["tracker"];
    cfg.tracker.min_age = t.value("min_age", cfg.tracker.min_age);
    cfg.tracker.max_age = t.value("max_age", cfg.tracker.max_age);
    cfg.tracker.process_noise_pos = t.value("process_noise_pos", cfg.tracker.process_noise_pos);
    cfg.tracker.process_noise_vel = t.value("process_noise_vel", cfg.tracker.process_noise_vel);
    cfg.tracker.process_noise_size = t.value("process_noise_size", cfg.tracker.process_noise_size);
    cfg.tracker.measurement_noise = t.value("measurement_noise", cfg.tracker.measurement_noise);
    cfg.tracker.initial_velocity_var =
        t.value("initial_velocity_var", cfg.tracker.initial_velocity_var);
    cfg.tracker.optimal_assignment =
        t.value("optimal_assignment", cfg.tracker.optimal_assignment);
  }
  if (doc.contains("cfar")) {
    const auto& c = doc["cfar"];
    cfg.cfar.n_train = c.value("n_train", cfg.cfar.n_train);
    cfg.cfar.n_guard = c.value("n_guard", cfg.cfar.n_guard);
    cfg.cfar.pfa = c.value("pfa", cfg.cfar.pfa);
  }
  if (doc.contains("solver")) {
    const auto& s = doc["solver"];
    cfg.solver.max_iterations = s.value("max_iterations", cfg.solver.max_iterations);
    cfg.solver.rho = s.value("rho", cfg.solver.rho);
    cfg.solver.over_relaxation = s.value("over_relaxation", cfg.solver.over_relaxation);
    cfg.solver.abs_tolerance = s.value("abs_tolerance", cfg.solver.abs_tolerance);
    cfg.solver.rel_tolerance = s.value("rel_tolerance", cfg.solver.rel_tolerance);
    cfg.solver.polish = s.value("polish", cfg.solver.polish);
  }
  if (doc.contains("calibration")) {
    const auto& c = doc["calibration"];
    cfg.calibration = CameraCalibration{
        c.at("theta_min_deg").get<double>(), c.at("theta_max_deg").get<double>(),
        c.at("x_min").get<double>(), c.at("x_max").get<double>()};
  }
  if (doc.contains("parallel"))
    cfg.exec = doc["parallel"].get<bool>() ? Exec::Parallel : Exec::Serial;
  return cfg;
}

std::string to_json(const SceneConfig& cfg) {
  json targets = json::array();
  for (const SceneTarget& t : cfg.targets) {
    json entry{{"x0_m", t.x0_m},       {"y0_m", t.y0_m},
               {"vx_m", t.vx_m},       {"vy_m", t.vy_m},
               {"reflectivity", t.reflectivity}, {"extent_m", t.extent_m},
               {"class", t.cls},       {"appear_frame", t.appear_frame}};
    if (t.disappear_frame != INT_MAX) entry["disappear_frame"] = t.disappear_frame;
    targets.push_back(std::move(entry));
  }
  const json doc{{"n_frames", cfg.n_frames},
                 {"rows", cfg.rows},
                 {"cols", cfg.cols},
                 {"range_res", cfg.range_res},
                 {"peak_value", cfg.peak_value},
                 {"clutter_mean", cfg.clutter_mean},
                 {"seed", cfg.seed},
                 {"cartesian_side", cfg.cartesian_side},
                 {"meters_per_pixel", cfg.meters_per_pixel},
                 {"targets", std::move(targets)}};
  return doc.dump(2) + "\n";
}

SceneConfig scene_config_from_json(const std::string& text) {
  const json doc = json::parse(text);
  SceneConfig cfg;
  cfg.n_frames = doc.value("n_frames", cfg.n_frames);
  cfg.rows = doc.value("rows", cfg.rows);
  cfg.cols = doc.value("cols", cfg.cols);
  cfg.range_res = doc.value("range_res", cfg.range_res);
  cfg.peak_value = doc.value("peak_value", cfg.peak_value);
  cfg.clutter_mean = doc.value("clutter_mean", cfg.clutter_mean);
  cfg.seed = doc.value("seed", cfg.seed);
  cfg.cartesian_side = doc.value("cartesian_side", cfg.cartesian_side);
  cfg.meters_per_pixel = doc.value("meters_per_pixel", cfg.meters_per_pixel);
  if (doc.contains("targets")) {
    for (const auto& entry : doc["targets"]) {
      SceneTarget t;
      t.x0_m = entry.value("x0_m", 0.0);
      t.y0_m = entry.value("y0_m", 0.0);
      t.vx_m = entry.value("vx_m", 0.0);
      t.vy_m = entry.value("vy_m", 0.0);
      t.reflectivity = entry.value("reflectivity", t.reflectivity);
      t.extent_m = entry.value("extent_m", t.extent_m);
      t.cls = entry.value("class", t.cls);
      t.appear_frame = entry.value("appear_frame", t.appear_frame);
      t.disappear_frame = entry.value("disappear_frame", t.disappear_frame);
      cfg.targets.push_back(std::move(t));
    }
  }
  return cfg;
}

CameraCalibration calibration_from_json_file(const std::filesystem::path& path) {
  const json doc = json::parse(read_text(path));
  CameraCalibration cal{doc.at("theta_min_deg").get<double>(),
                        doc.at("theta_max_deg").get<double>(), doc.at("x_min").get<double>(),
                        doc.at("x_max").get<double>()};
  validate(cal);
  return cal;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("io: cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("io: cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_pr_svg(const std::filesystem::path& path,
                  const std::vector<std::pair<double, double>>& curve) {
  const int w = 480, h = 480, margin = 40;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\">\n";
  svg << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << margin << "\" y1=\"" << h - margin << "\" x2=\"" << w - margin
      << "\" y2=\"" << h - margin << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << margin << "\" y1=\"" << h - margin << "\" x2=\"" << margin
      << "\" y2=\"" << margin << "\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << w / 2 << "\" y=\"" << h - 10 << "\" text-anchor=\"middle\">recall</text>\n";
  svg << "<text x=\"12\" y=\"" << h / 2 << "\" transform=\"rotate(-90 12 " << h / 2
      << ")\" text-anchor=\"middle\">precision</text>\n";
  if (!curve.empty()) {
    svg << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
    for (const auto& [recall, precision] : curve) {
      const double x = margin + recall * (w - 2 * margin);
      const double y = h - margin - precision * (h - 2 * margin);
      svg << x << "," << y << " ";
    }
    svg << "\"/>\n";
  }
  svg << "</svg>\n";
  write_text(path, svg.str());
}

}  // namespace radsub
