#include <doctest.h>

#include <cmath>

#include "radsub/frame.hpp"
#include "radsub/geometry.hpp"
#include "radsub/rng.hpp"

using namespace radsub;

namespace {

RadarFrame zero_frame(int rows, int cols, double range_res = 0.175) {
  return make_frame(Eigen::MatrixXf::Zero(rows, cols), 360.0 / rows, range_res, 255.0f, 1);
}

}  // namespace

TEST_SUITE("frame") {
  TEST_CASE("partition matches the reference grids") {
    const BlockGrid radiate = make_grid(400, 576, 20, 48);
    CHECK(radiate.n_az_blocks == 20);
    CHECK(radiate.n_range_blocks == 12);
    CHECK(radiate.total_blocks() == 240);

    const BlockGrid oxford = make_grid(400, 3700, 25, 100);
    CHECK(oxford.n_az_blocks == 16);
    CHECK(oxford.n_range_blocks == 37);

    const BlockGrid identity = make_grid(20, 48, 20, 48);
    CHECK(identity.total_blocks() == 1);
  }

  TEST_CASE("partition rejects non-divisible shapes and names the axis") {
    CHECK_THROWS_WITH_AS(make_grid(400, 576, 21, 48), doctest::Contains("azimuth"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(make_grid(400, 576, 20, 47), doctest::Contains("range"),
                         std::invalid_argument);
  }

  TEST_CASE("block areas tile the frame exactly") {
    const BlockGrid grid = make_grid(400, 576, 20, 48);
    CHECK(grid.total_blocks() * grid.block_samples() == 400 * 576);
  }

  TEST_CASE("block extraction and placement round-trip each cell once") {
    const BlockGrid grid = make_grid(40, 48, 20, 24);
    Eigen::MatrixXf data(40, 48);
    for (int i = 0; i < 40; ++i)
      for (int j = 0; j < 48; ++j) data(i, j) = static_cast<float>(i * 100 + j);
    Eigen::MatrixXf rebuilt = Eigen::MatrixXf::Zero(40, 48);
    for (int az = 0; az < grid.n_az_blocks; ++az)
      for (int rng = 0; rng < grid.n_range_blocks; ++rng)
        place_block(rebuilt, grid, {az, rng}, extract_block(data, grid, {az, rng}));
    CHECK(rebuilt == data);
  }

  TEST_CASE("frame invariants are enforced") {
    CHECK_THROWS_AS(make_frame(Eigen::MatrixXf::Zero(100, 10), 1.0, 0.1, 255.0f, 0),
                    std::invalid_argument);  // 100 rows at 1 deg != 360
    Eigen::MatrixXf bad = Eigen::MatrixXf::Zero(360, 4);
    bad(0, 0) = 300.0f;
    CHECK_THROWS_AS(make_frame(bad, 1.0, 0.1, 255.0f, 0), std::invalid_argument);
    bad(0, 0) = -1.0f;
    CHECK_THROWS_AS(make_frame(bad, 1.0, 0.1, 255.0f, 0), std::invalid_argument);
  }

  TEST_CASE("row-major vectorization convention") {
    Eigen::MatrixXd block(2, 3);
    block << 1, 2, 3, 4, 5, 6;
    const Eigen::VectorXd v = vectorize_row_major(block);
    CHECK(v[0] == 1);
    CHECK(v[2] == 3);
    CHECK(v[3] == 4);
    CHECK(devectorize_row_major(v, 2, 3) == block);
  }
}

TEST_SUITE("geometry") {
  TEST_CASE("image bbox center maps affinely into azimuth") {
    const CameraCalibration cal{-33.0, 33.0, 0.0, 1280.0};
    const BBox mid{600.0, 100.0, 80.0, 40.0};  // center x = 640
    const auto at_mid = image_bbox_to_azimuth(mid, cal, 16);
    CHECK(at_mid.azimuth_deg == doctest::Approx(0.0).epsilon(1e-12));

    const BBox left{280.0, 0.0, 80.0, 40.0};  // center x = 320
    CHECK(image_bbox_to_azimuth(left, cal, 16).azimuth_deg == doctest::Approx(-16.5));

    const BBox at_min{-40.0, 0.0, 80.0, 40.0};  // center x = x_min
    CHECK(image_bbox_to_azimuth(at_min, cal, 16).azimuth_deg == doctest::Approx(-33.0));
  }

  TEST_CASE("azimuth block ordinal comes from the wrapped angle") {
    const CameraCalibration cal{-33.0, 33.0, 0.0, 1280.0};
    // -16.5 deg wraps to 343.5; 16 blocks of 22.5 deg -> block 15.
    const BBox left{280.0, 0.0, 80.0, 40.0};
    CHECK(image_bbox_to_azimuth(left, cal, 16).az_block == 15);
    const BBox mid{600.0, 100.0, 80.0, 40.0};
    CHECK(image_bbox_to_azimuth(mid, cal, 16).az_block == 0);
  }

  TEST_CASE("bbox center outside the calibrated extent is rejected") {
    const CameraCalibration cal{-33.0, 33.0, 0.0, 1280.0};
    CHECK_THROWS_AS(image_bbox_to_azimuth(BBox{1400.0, 0.0, 10.0, 10.0}, cal, 16),
                    std::invalid_argument);
  }

  TEST_CASE("image azimuth is monotone in the bbox center") {
    const CameraCalibration cal{-33.0, 33.0, 0.0, 1280.0};
    double prev = -1e9;
    for (double cx = 0.0; cx <= 1280.0; cx += 12.8) {
      const double az = image_bbox_to_azimuth(BBox{cx - 1.0, 0.0, 2.0, 2.0}, cal, 16).azimuth_deg;
      CHECK(az >= prev);
      prev = az;
    }
  }

  TEST_CASE("cartesian bbox center maps to the enclosing polar block") {
    // 8.4 m range blocks (48 bins of 0.175 m), 18 deg azimuth blocks.
    const BlockGrid grid = make_grid(400, 576, 20, 48);
    CartesianImage img;
    img.meters_per_pixel = 1.0;
    img.pixels.setZero(201, 201);

    SUBCASE("north of the vehicle at 50 m") {
      const BBox b{100.0 - 2.0, 100.0 - 50.0 - 2.0, 4.0, 4.0};
      const BlockIndex idx = cartesian_bbox_to_polar_block(b, img, grid, 0.175);
      CHECK(idx.az == 0);
      CHECK(idx.rng == 5);  // floor(50 / 8.4)
    }
    SUBCASE("degenerate center at the vehicle") {
      const BBox b{100.0 - 2.0, 100.0 - 2.0, 4.0, 4.0};
      const BlockIndex idx = cartesian_bbox_to_polar_block(b, img, grid, 0.175);
      CHECK(idx.az == 0);
      CHECK(idx.rng == 0);
    }
    SUBCASE("45 degree bearing lands in azimuth block 2") {
      const double d = 30.0 / std::sqrt(2.0);
      const BBox b{100.0 + d - 2.0, 100.0 - d - 2.0, 4.0, 4.0};
      CHECK(cartesian_bbox_to_polar_block(b, img, grid, 0.175).az == 2);  // floor(45 / 18)
    }
  }

  TEST_CASE("inverted-T stencil") {
    const BlockGrid grid = make_grid(400, 576, 20, 48);  // 20 x 12 blocks

    SUBCASE("interior center yields stem plus bar") {
      const auto out = mark_important_blocks({{5, 6}}, grid);
      const std::set<BlockIndex> expected{{5, 6}, {5, 7}, {4, 5}, {5, 5}, {6, 5}};
      CHECK(out == expected);
    }
    SUBCASE("range 0 clips the bar away") {
      const auto out = mark_important_blocks({{3, 0}}, grid);
      const std::set<BlockIndex> expected{{3, 0}, {3, 1}};
      CHECK(out == expected);
    }
    SUBCASE("azimuth wraps circularly") {
      const auto out = mark_important_blocks({{0, 4}}, grid);
      CHECK(out.count({19, 3}) == 1);
      CHECK(out.count({1, 3}) == 1);
    }
    SUBCASE("shadow can be disabled") {
      const auto out = mark_important_blocks({{5, 6}}, grid, /*include_shadow=*/false);
      CHECK(out.count({5, 7}) == 0);
      CHECK(out.count({5, 6}) == 1);
    }
    SUBCASE("size bound and center containment") {
      Rng rng(11);
      std::vector<BlockIndex> centers;
      for (int i = 0; i < 17; ++i)
        centers.push_back({static_cast<int>(rng.uniform_int(20)),
                           static_cast<int>(rng.uniform_int(12))});
      const auto out = mark_important_blocks(centers, grid);
      CHECK(out.size() <= 5 * centers.size());
      for (const auto& c : centers) CHECK(out.count(c) == 1);
    }
    SUBCASE("invalid center is rejected") {
      CHECK_THROWS_AS(mark_important_blocks({{20, 0}}, grid), std::invalid_argument);
    }
  }

  TEST_CASE("polar to cartesian resampling") {
    SUBCASE("zero frame renders to zeros") {
      const auto img = polar_to_cartesian(zero_frame(72, 40), 81, 0.175);
      CHECK(img.pixels.maxCoeff() == 0.0f);
    }
    SUBCASE("single bright cell appears north of center") {
      RadarFrame frame = zero_frame(72, 40);
      frame.data(0, 20) = 200.0f;  // azimuth bin 0, range bin 20
      const auto img = polar_to_cartesian(frame, 81, 0.175);
      const int c = 40;
      // Range bin 20 covers [3.5m, 3.675m) -> 20 px north of center.
      bool found = false;
      for (int dy = 19; dy <= 21 && !found; ++dy)
        found = img.pixels(c - dy, c) == 200.0f;
      CHECK(found);
      CHECK(img.pixels(c + 20, c) == 0.0f);  // nothing to the south
    }
    SUBCASE("constant frame renders a disk with empty corners") {
      RadarFrame frame = zero_frame(72, 40);
      frame.data.setConstant(7.0f);
      const auto img = polar_to_cartesian(frame, 81, 0.175);
      CHECK(img.pixels(40, 40) == 7.0f);
      CHECK(img.pixels(0, 0) == 0.0f);
      CHECK(img.pixels(80, 80) == 0.0f);
    }
    SUBCASE("serial and parallel paths are bit-identical") {
      RadarFrame frame = zero_frame(72, 40);
      Rng rng(3);
      for (int i = 0; i < 72; ++i)
        for (int j = 0; j < 40; ++j) frame.data(i, j) = static_cast<float>(rng.uniform(0, 255));
      const auto a = polar_to_cartesian(frame, 101, 0.2, Exec::Serial);
      const auto b = polar_to_cartesian(frame, 101, 0.2, Exec::Parallel);
      CHECK(a.pixels == b.pixels);
    }
  }

  TEST_CASE("cartesian round-trip recovers the originating block") {
    const RadarFrame frame = zero_frame(72, 40);
    const BlockGrid grid = partition(frame, 8, 10);
    const int side = 2 * 40 + 1;
    const double mpp = frame.range_res;
    const double c = (side - 1) / 2.0;
    // Lattice of cell centers away from the center singularity.
    for (int a = 0; a < 72; a += 5) {
      for (int r = 8; r < 40; r += 7) {
        const double bearing = (a + 0.5) * frame.azimuth_res * M_PI / 180.0;
        const double range = (r + 0.5) * frame.range_res;
        const double px = c + range * std::sin(bearing) / mpp;
        const double py = c - range * std::cos(bearing) / mpp;
        const BlockIndex idx =
            cartesian_point_to_polar_block(px, py, c, mpp, grid, frame.range_res);
        CHECK(idx.az == a / 8);
        CHECK(idx.rng == r / 10);
      }
    }
  }
}
