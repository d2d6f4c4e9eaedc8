#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "radsub/io.hpp"
#include "radsub/rng.hpp"
#include "radsub/scene.hpp"

using namespace radsub;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

RadarFrame random_frame(std::uint64_t seed, int rows = 40, int cols = 48) {
  Rng rng(seed);
  Eigen::MatrixXf data(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) data(i, j) = static_cast<float>(rng.uniform(0.0, 255.0));
  return make_frame(data, 360.0 / rows, 0.175, 255.0f, 3);
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(RADSUB_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  return std::system(cmd.c_str());
}

std::string read_file(const fs::path& p) { return read_text(p); }

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("raw f32 frames round-trip exactly") {
    TempDir dir("radsub_io_raw");
    const RadarFrame frame = random_frame(1);
    write_frame(dir.path, frame, FrameFormat::RawF32);
    const RadarFrame back = read_frame(dir.path / frame_file_name(3, FrameFormat::RawF32));
    CHECK(back.data == frame.data);
    CHECK(back.frame_index == 3);
    CHECK(back.range_res == frame.range_res);
  }

  TEST_CASE("png frames round-trip within the 16-bit quantization step") {
    TempDir dir("radsub_io_png");
    const RadarFrame frame = random_frame(2);
    write_frame(dir.path, frame, FrameFormat::Png16);
    const RadarFrame back = read_frame(dir.path / frame_file_name(3, FrameFormat::Png16));
    CHECK((back.data - frame.data).cwiseAbs().maxCoeff() <= 255.0f / 65535.0f);
  }

  TEST_CASE("frame directories load ordered by frame index") {
    TempDir dir("radsub_io_dir");
    for (int idx : {3, 1, 2}) {
      RadarFrame f = random_frame(10 + idx);
      f.frame_index = idx;
      write_frame(dir.path, f, FrameFormat::RawF32);
    }
    const auto frames = read_frame_dir(dir.path);
    REQUIRE(frames.size() == 3);
    CHECK(frames[0].frame_index == 1);
    CHECK(frames[2].frame_index == 3);
  }

  TEST_CASE("detection jsonl round-trips") {
    TempDir dir("radsub_io_jsonl");
    std::map<int, std::vector<Detection>> dets;
    dets[1] = {Detection{BBox{1, 2, 3, 4}, 0.5, "vehicle"}};
    dets[7] = {Detection{BBox{5, 6, 7, 8}, 0.25, "vehicle"},
               Detection{BBox{9, 10, 11, 12}, 1.0, "vehicle"}};
    write_detections_jsonl(dir.path / "d.jsonl", dets);
    const auto back = read_detections_jsonl(dir.path / "d.jsonl");
    REQUIRE(back.size() == 2);
    CHECK(back.at(7)[1].bbox.w == 11.0);
    CHECK(back.at(1)[0].score == 0.5);
  }

  TEST_CASE("measurement records match the documented byte layout") {
    TempDir dir("radsub_io_rsm");
    MeasurementSet ms;
    ms.matrix = MatrixDescriptor{MatrixKind::Bpd, 2, 960, 0x1122334455667788ULL};
    ms.frame_index = 9;
    ms.block = BlockIndex{4, 11};
    ms.y.resize(2);
    ms.y << 1.5, -2.25;
    write_measurement_sets(dir.path / "m.rsm", {ms});

    const std::string bytes = read_file(dir.path / "m.rsm");
    REQUIRE(bytes.size() == 32 + 2 * 4);
    CHECK(bytes.substr(0, 4) == "RSM1");
    CHECK(static_cast<unsigned char>(bytes[4]) == 2);  // bpd
    CHECK(static_cast<unsigned char>(bytes[8]) == 2);  // m, little-endian
    CHECK(static_cast<unsigned char>(bytes[12]) == 0xC0);  // n = 960 = 0x3C0
    CHECK(static_cast<unsigned char>(bytes[13]) == 0x03);
    CHECK(static_cast<unsigned char>(bytes[16]) == 0x88);  // seed low byte
    CHECK(static_cast<unsigned char>(bytes[24]) == 9);     // frame index
    CHECK(static_cast<unsigned char>(bytes[28]) == 4);     // az
    CHECK(static_cast<unsigned char>(bytes[30]) == 11);    // rng

    const auto back = read_measurement_sets(dir.path / "m.rsm");
    REQUIRE(back.size() == 1);
    CHECK(back[0].matrix == ms.matrix);
    CHECK(back[0].y[0] == 1.5);
    CHECK(back[0].y[1] == -2.25);
    CHECK(back[0].block == ms.block);
  }

  TEST_CASE("pipeline config json round-trips") {
    PipelineConfig cfg;
    cfg.mode = Mode::CompRadImg;
    cfg.target_rate = 0.1;
    cfg.anchor_kind = AnchorKind::Quantize3Bit;
    cfg.matrix_kind = MatrixKind::Bpbd;
    cfg.occlusion_shadow = false;
    cfg.calibration = CameraCalibration{-33, 33, 0, 1280};
    cfg.tracker.min_age = 4;
    const PipelineConfig back = pipeline_config_from_json(to_json(cfg));
    CHECK(back.mode == Mode::CompRadImg);
    CHECK(back.target_rate == 0.1);
    CHECK(back.anchor_kind == AnchorKind::Quantize3Bit);
    CHECK(back.matrix_kind == MatrixKind::Bpbd);
    CHECK_FALSE(back.occlusion_shadow);
    CHECK(back.tracker.min_age == 4);
    REQUIRE(back.calibration.has_value());
    CHECK(back.calibration->x_max == 1280);
  }
}

#ifdef RADSUB_CLI_PATH
TEST_SUITE("cli") {
  namespace {
  void write_scene_config(const fs::path& path, int n_frames, std::uint64_t seed) {
    json targets = json::array();
    targets.push_back({{"x0_m", 1.5},
                       {"y0_m", 4.0},
                       {"vx_m", 0.02},
                       {"vy_m", 0.02},
                       {"reflectivity", 150.0},
                       {"extent_m", 0.6}});
    const json doc{{"n_frames", n_frames}, {"rows", 40},          {"cols", 48},
                   {"range_res", 0.175},   {"clutter_mean", 2.0}, {"seed", seed},
                   {"targets", targets}};
    write_text(path, doc.dump());
  }
  }  // namespace

  TEST_CASE("gen-scene, full-rate run, and eval report the infinity sentinel") {
    TempDir dir("radsub_cli_fullrate");
    write_scene_config(dir.path / "scene.json", 2, 5);
    REQUIRE(run_cli("gen-scene --config " + (dir.path / "scene.json").string() + " --out " +
                    (dir.path / "scene").string() + " --raw") == 0);
    REQUIRE(fs::exists(dir.path / "scene/frames/frame_000001.f32"));
    REQUIRE(fs::exists(dir.path / "scene/gt.jsonl"));

    REQUIRE(run_cli("run --mode standard-cs --rate 1.0 --raw --frames " +
                    (dir.path / "scene/frames").string() + " --out " +
                    (dir.path / "run").string()) == 0);

    REQUIRE(run_cli("eval --orig " + (dir.path / "scene/frames").string() + " --recon " +
                    (dir.path / "run/recon").string() + " --detections " +
                    (dir.path / "run/detections.jsonl").string() + " --gt " +
                    (dir.path / "scene/gt.jsonl").string() + " --out " +
                    (dir.path / "eval").string() + " --pr-svg") == 0);
    const json report = json::parse(read_file(dir.path / "eval/report.json"));
    CHECK(report["mean_psnr_db"] == "inf");
    CHECK(fs::exists(dir.path / "eval/pr.svg"));
  }

  TEST_CASE("comprpd run writes plans, budget csv, and measurement dumps") {
    TempDir dir("radsub_cli_rpd");
    write_scene_config(dir.path / "scene.json", 6, 6);
    REQUIRE(run_cli("gen-scene --config " + (dir.path / "scene.json").string() + " --out " +
                    (dir.path / "scene").string() + " --raw") == 0);
    REQUIRE(run_cli("run --mode comprpd --rate 0.2 --anchor-period 5 --raw --seed 3 "
                    "--dump-measurements --frames " +
                    (dir.path / "scene/frames").string() + " --out " +
                    (dir.path / "run").string()) == 0);
    CHECK(fs::exists(dir.path / "run/plan_000002.json"));
    CHECK(fs::exists(dir.path / "run/manifest.json"));
    CHECK(fs::exists(dir.path / "run/measurements.rsm"));
    CHECK(!read_measurement_sets(dir.path / "run/measurements.rsm").empty());

    // Budget CSV columns obey the accounting formula.
    std::ifstream csv(dir.path / "run/budget.csv");
    std::string line;
    std::getline(csv, line);  // header
    const long n = 40 * 48;
    int rows = 0;
    while (std::getline(csv, line)) {
      ++rows;
      json row;  // parse by hand: frame,is_anchor,budget,meas,bits,bps,lp
      std::vector<std::string> cells;
      std::size_t pos = 0;
      while (true) {
        const auto comma = line.find(',', pos);
        cells.push_back(line.substr(pos, comma - pos));
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
      REQUIRE(cells.size() == 7);
      const int frame = std::stoi(cells[0]);
      const int is_anchor = std::stoi(cells[1]);
      CHECK(is_anchor == (anchor_schedule(frame, 5) ? 1 : 0));
      const double budget = std::stod(cells[2]);
      CHECK(budget == doctest::Approx((is_anchor ? 0.4 : 0.2) * n));
      CHECK(std::stol(cells[3]) <= budget + 4);
    }
    CHECK(rows == 6);
  }

  TEST_CASE("runs are byte-identical across reruns with the same seed") {
    TempDir dir("radsub_cli_repro");
    write_scene_config(dir.path / "scene.json", 4, 7);
    REQUIRE(run_cli("gen-scene --config " + (dir.path / "scene.json").string() + " --out " +
                    (dir.path / "scene").string() + " --raw") == 0);
    const std::string base = "run --mode comprpd --rate 0.2 --anchor-period 5 --raw --seed 9 "
                             "--frames " +
                             (dir.path / "scene/frames").string() + " --out ";
    REQUIRE(run_cli(base + (dir.path / "a").string()) == 0);
    REQUIRE(run_cli(base + (dir.path / "b").string()) == 0);
    for (int t = 1; t <= 4; ++t) {
      const auto name = frame_file_name(t, FrameFormat::RawF32);
      CHECK(read_file(dir.path / "a/recon" / name) == read_file(dir.path / "b/recon" / name));
    }
    CHECK(read_file(dir.path / "a/budget.csv") == read_file(dir.path / "b/budget.csv"));
  }

  TEST_CASE("plan subcommand prints the solved program") {
    TempDir dir("radsub_cli_plan");
    write_text(dir.path / "lp2.json",
               R"({"I": 10, "O": 230, "w": 48, "h": 20, "S": 46080,
                   "x1_lower": 0.2, "x1_upper": 0.55, "x2_lower": 0.07, "x2_upper": 0.2})");
    REQUIRE(run_cli("plan --lp lp2 --inputs " + (dir.path / "lp2.json").string() + " --out " +
                    (dir.path / "sol.json").string()) == 0);
    const json sol = json::parse(read_file(dir.path / "sol.json"));
    CHECK(sol["solution"]["x1"].get<double>() == doctest::Approx(0.55));
    CHECK(sol["solution"]["x2"].get<double>() == doctest::Approx(40800.0 / 220800.0));
  }

  TEST_CASE("cfar and convert subcommands run end to end") {
    TempDir dir("radsub_cli_misc");
    write_scene_config(dir.path / "scene.json", 1, 8);
    REQUIRE(run_cli("gen-scene --config " + (dir.path / "scene.json").string() + " --out " +
                    (dir.path / "scene").string() + " --raw") == 0);
    REQUIRE(run_cli("cfar --frame " + (dir.path / "scene/frames/frame_000001.f32").string() +
                    " --train 20 --guard 4 --block-rows 20 --block-cols 24 --out " +
                    (dir.path / "cfar").string()) == 0);
    CHECK(fs::exists(dir.path / "cfar/cfar_mask.png"));
    CHECK(fs::exists(dir.path / "cfar/cfar_blocks.json"));

    REQUIRE(run_cli("convert --in " + (dir.path / "scene/frames/frame_000001.f32").string() +
                    " --out " + (dir.path / "frame.png").string()) == 0);
    REQUIRE(run_cli("convert --in " + (dir.path / "frame.png").string() + " --out " +
                    (dir.path / "back.f32").string()) == 0);
    const RadarFrame orig = read_frame(dir.path / "scene/frames/frame_000001.f32");
    const RadarFrame back = read_frame(dir.path / "back.f32");
    CHECK((orig.data - back.data).cwiseAbs().maxCoeff() <= 255.0f / 65535.0f);
  }

  TEST_CASE("track subcommand emits final and track records") {
    TempDir dir("radsub_cli_track");
    std::map<int, std::vector<Detection>> dets;
    for (int t = 1; t <= 6; ++t)
      dets[t] = {Detection{BBox{2.0 * t, 0, 4, 4}, 0.9, "vehicle"}};
    write_detections_jsonl(dir.path / "d.jsonl", dets);
    REQUIRE(run_cli("track --detections " + (dir.path / "d.jsonl").string() + " --out " +
                    (dir.path / "tracks.jsonl").string()) == 0);
    std::ifstream in(dir.path / "tracks.jsonl");
    int finals = 0, tracks = 0;
    std::string line;
    while (std::getline(in, line)) {
      const json rec = json::parse(line);
      if (rec["kind"] == "final") ++finals;
      if (rec["kind"] == "track") ++tracks;
    }
    CHECK(finals == 6);
    CHECK(tracks >= 6);
  }

  TEST_CASE("invalid configuration exits nonzero with a structured error") {
    CHECK(run_cli("run --mode nosuchmode --frames /tmp --out /tmp/x") != 0);
    CHECK(run_cli("gen-scene --config /nonexistent.json --out /tmp/x") != 0);
    CHECK(run_cli("plan --lp lp3 --inputs /nonexistent.json") != 0);
  }
}
#endif  // RADSUB_CLI_PATH
