#include <doctest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "radsub/basis_pursuit.hpp"
#include "radsub/dct.hpp"
#include "radsub/measurement.hpp"
#include "radsub/rng.hpp"
#include "radsub/scene.hpp"
#include "radsub/sensing.hpp"

using namespace radsub;

namespace {

Eigen::MatrixXd random_block(int rows, int cols, std::uint64_t seed) {
  Rng rng(seed);
  Eigen::MatrixXd b(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) b(i, j) = rng.uniform(0.0, 255.0);
  return b;
}

}  // namespace

TEST_SUITE("dct") {
  TEST_CASE("constant block concentrates into the DC coefficient") {
    const SparsityBasis basis(6, 9);
    const Eigen::MatrixXd block = Eigen::MatrixXd::Constant(6, 9, 3.25);
    const Eigen::MatrixXd coeffs = basis.forward(block);
    CHECK(coeffs(0, 0) == doctest::Approx(3.25 * std::sqrt(54.0)).epsilon(1e-12));
    CHECK((coeffs.cwiseAbs().sum() - std::abs(coeffs(0, 0))) < 1e-10);
  }

  TEST_CASE("zero block transforms to zero") {
    const SparsityBasis basis(4, 4);
    CHECK(basis.forward(Eigen::MatrixXd::Zero(4, 4)).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("orthonormality: norm preservation and exact inversion") {
    const SparsityBasis basis(20, 48);
    const Eigen::MatrixXd block = random_block(20, 48, 5);
    const Eigen::MatrixXd coeffs = basis.forward(block);
    CHECK(coeffs.norm() == doctest::Approx(block.norm()).epsilon(1e-10));
    CHECK((basis.inverse(coeffs) - block).cwiseAbs().maxCoeff() < 1e-10 * block.norm());
  }

  TEST_CASE("shape mismatch is rejected") {
    const SparsityBasis basis(4, 4);
    CHECK_THROWS_AS(basis.forward(Eigen::MatrixXd::Zero(4, 5)), std::invalid_argument);
  }
}

TEST_SUITE("measurement") {
  TEST_CASE("BPD at full rate is a permutation matrix") {
    const auto m = MeasurementMatrix::build(MatrixKind::Bpd, 16, 16, 99);
    std::set<int> cols(m.selected_columns().begin(), m.selected_columns().end());
    CHECK(cols.size() == 16);
  }

  TEST_CASE("BPD rows carry one 1 each in distinct columns") {
    const auto m = MeasurementMatrix::build(MatrixKind::Bpd, 3, 10, 7);
    std::set<int> seen;
    for (int i = 0; i < 3; ++i) {
      int ones = 0, where = -1;
      for (int j = 0; j < 10; ++j)
        if (m.entry(i, j) == 1.0) {
          ++ones;
          where = j;
        }
      CHECK(ones == 1);
      CHECK(seen.insert(where).second);
    }
  }

  TEST_CASE("BPBD structure: banded rows, each column used once") {
    const auto m = MeasurementMatrix::build(MatrixKind::Bpbd, 2, 4, 3);
    for (int i = 0; i < 2; ++i) {
      int ones = 0;
      for (int j = 0; j < 4; ++j) ones += m.entry(i, j) == 1.0 ? 1 : 0;
      CHECK(ones == 2);  // bands of n/m consecutive ones before permutation
    }
    for (int j = 0; j < 4; ++j) {
      int ones = 0;
      for (int i = 0; i < 2; ++i) ones += m.entry(i, j) == 1.0 ? 1 : 0;
      CHECK(ones == 1);
    }
  }

  TEST_CASE("construction rejects invalid shapes") {
    CHECK_THROWS_AS(MeasurementMatrix::build(MatrixKind::Bpd, 11, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(MeasurementMatrix::build(MatrixKind::Bpd, 0, 10, 1), std::invalid_argument);
    CHECK_THROWS_AS(MeasurementMatrix::build(MatrixKind::Bpbd, 3, 10, 1), std::invalid_argument);
  }

  TEST_CASE("construction is deterministic in the seed") {
    const auto a = MeasurementMatrix::build(MatrixKind::Bpd, 8, 32, 123);
    const auto b = MeasurementMatrix::build(MatrixKind::Bpd, 8, 32, 123);
    CHECK(a.selected_columns() == b.selected_columns());
    const auto g1 = MeasurementMatrix::build(MatrixKind::Gaussian, 8, 32, 5);
    const auto g2 = MeasurementMatrix::build(MatrixKind::Gaussian, 8, 32, 5);
    CHECK(test::dense_matrix(g1) == test::dense_matrix(g2));
  }

  TEST_CASE("apply and apply_transpose agree with the dense form") {
    Rng rng(17);
    for (MatrixKind kind : {MatrixKind::Bpd, MatrixKind::Bpbd, MatrixKind::Gaussian}) {
      const int n = 24, m = kind == MatrixKind::Bpbd ? 6 : 7;
      const auto mat = MeasurementMatrix::build(kind, m, n, 31);
      const Eigen::MatrixXd dense = test::dense_matrix(mat);
      Eigen::VectorXd x(n), y(m);
      for (int i = 0; i < n; ++i) x[i] = rng.normal();
      for (int i = 0; i < m; ++i) y[i] = rng.normal();
      CHECK((mat.apply(x) - dense * x).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((mat.apply_transpose(y) - dense.transpose() * y).cwiseAbs().maxCoeff() < 1e-12);
      // gram_solve inverts phi phi^T
      const Eigen::VectorXd r = dense * dense.transpose() * y;
      CHECK((mat.gram_solve(r) - y).cwiseAbs().maxCoeff() < 1e-9);
    }
  }

  TEST_CASE("compress_block on BPD selects samples without arithmetic") {
    const Eigen::MatrixXd block = random_block(4, 8, 2);
    const Eigen::VectorXd v = vectorize_row_major(block);
    const auto mat = MeasurementMatrix::build(MatrixKind::Bpd, 2, 32, 77);
    const auto ms = compress_block(block, mat);
    // Direct indexing oracle: y_i = v[selected column of row i].
    for (int i = 0; i < 2; ++i) CHECK(ms.y[i] == v[mat.selected_columns()[i]]);
    // Value-set inclusion: BPD output values are a subset of the input values.
    const std::set<double> values(v.data(), v.data() + v.size());
    for (int i = 0; i < ms.y.size(); ++i) CHECK(values.count(ms.y[i]) == 1);
  }

  TEST_CASE("compress_block edge cases") {
    const auto mat = MeasurementMatrix::build(MatrixKind::Bpd, 16, 16, 5);
    SUBCASE("full-rate BPD yields a permutation of the samples") {
      const Eigen::MatrixXd block = random_block(4, 4, 3);
      const auto ms = compress_block(block, mat);
      Eigen::VectorXd sorted_y = ms.y, sorted_v = vectorize_row_major(block);
      std::sort(sorted_y.data(), sorted_y.data() + 16);
      std::sort(sorted_v.data(), sorted_v.data() + 16);
      CHECK(sorted_y == sorted_v);
    }
    SUBCASE("zero block compresses to zero measurements") {
      const auto ms = compress_block(Eigen::MatrixXd::Zero(4, 4), mat);
      CHECK(ms.y.cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("dimension mismatch is rejected") {
      CHECK_THROWS_AS(compress_block(Eigen::MatrixXd::Zero(4, 5), mat), std::invalid_argument);
    }
  }

  TEST_CASE("measurement_count rounding rules") {
    CHECK(measurement_count(0.0, 960, MatrixKind::Bpd) == 0);
    CHECK(measurement_count(1e-5, 960, MatrixKind::Bpd) == 1);  // floor of one
    CHECK(measurement_count(0.2, 960, MatrixKind::Bpd) == 192);
    CHECK(measurement_count(1.0, 960, MatrixKind::Bpd) == 960);
    // BPBD lowers to the largest divisor of n.
    CHECK(measurement_count(0.21, 960, MatrixKind::Bpbd) == 192);
    CHECK(960 % measurement_count(0.37, 960, MatrixKind::Bpbd) == 0);
  }
}

TEST_SUITE("quantize") {
  TEST_CASE("3-bit quantization error bound is step/2") {
    Eigen::MatrixXf data(360, 4);
    for (int i = 0; i < 360; ++i)
      for (int j = 0; j < 4; ++j) data(i, j) = 255.0f * (i * 4 + j) / (360.0f * 4 - 1);
    const RadarFrame frame = make_frame(data, 1.0, 0.1, 255.0f, 0);
    const RadarFrame q = quantize_frame(frame, 3);
    CHECK((q.data - frame.data).cwiseAbs().maxCoeff() <= doctest::Approx(255.0 / 16.0));
  }

  TEST_CASE("zero frame maps to the lowest bin midpoint") {
    const RadarFrame frame = make_frame(Eigen::MatrixXf::Zero(360, 2), 1.0, 0.1, 255.0f, 0);
    const RadarFrame q = quantize_frame(frame, 3);
    CHECK(q.data(0, 0) == doctest::Approx(255.0 / 16.0));
    CHECK(q.data.minCoeff() == q.data.maxCoeff());
  }

  TEST_CASE("16-bit quantization of 8-bit data is nearly exact") {
    Eigen::MatrixXf data(360, 2);
    Rng rng(9);
    for (int i = 0; i < 360; ++i)
      for (int j = 0; j < 2; ++j)
        data(i, j) = static_cast<float>(static_cast<int>(rng.uniform_int(256)));
    const RadarFrame frame = make_frame(data, 1.0, 0.1, 255.0f, 0);
    const RadarFrame q = quantize_frame(frame, 16);
    CHECK((q.data - frame.data).cwiseAbs().maxCoeff() <= 0.002f);
  }

  TEST_CASE("bits outside [1, 16] are rejected") {
    const RadarFrame frame = make_frame(Eigen::MatrixXf::Zero(360, 2), 1.0, 0.1, 255.0f, 0);
    CHECK_THROWS_AS(quantize_frame(frame, 0), std::invalid_argument);
    CHECK_THROWS_AS(quantize_frame(frame, 17), std::invalid_argument);
  }
}

TEST_SUITE("basis_pursuit") {
  TEST_CASE("full-rate BPD reconstructs exactly") {
    const SparsityBasis basis(4, 8);
    const Eigen::MatrixXd block = random_block(4, 8, 21);
    const auto mat = MeasurementMatrix::build(MatrixKind::Bpd, 32, 32, 4);
    const auto res = reconstruct_block(compress_block(block, mat), mat, basis);
    CHECK((res.block - block).cwiseAbs().maxCoeff() <= 1e-8);
  }

  TEST_CASE("1-sparse DCT blocks recover from quarter-rate BPD measurements") {
    const SparsityBasis basis(8, 8);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      Rng rng(mix_seed({404, seed}));
      Eigen::MatrixXd coeffs = Eigen::MatrixXd::Zero(8, 8);
      coeffs(rng.uniform_int(8), rng.uniform_int(8)) = rng.uniform(0.5, 2.0);
      const Eigen::MatrixXd block = basis.inverse(coeffs);
      const auto mat = MeasurementMatrix::build(MatrixKind::Bpd, 16, 64, 1000 + seed);
      const auto res = reconstruct_block(compress_block(block, mat), mat, basis);
      CHECK((res.block - block).cwiseAbs().maxCoeff() <= 1e-4);
    }
  }

  TEST_CASE("zero measurements give the zero block") {
    const SparsityBasis basis(4, 4);
    const auto mat = MeasurementMatrix::build(MatrixKind::Bpd, 4, 16, 9);
    MeasurementSet ms = compress_block(Eigen::MatrixXd::Zero(4, 4), mat);
    const auto res = reconstruct_block(ms, mat, basis);
    CHECK(res.block.cwiseAbs().maxCoeff() == 0.0);
    CHECK(res.converged);
  }

  TEST_CASE("measurement residual contract holds on noisy blocks") {
    const SparsityBasis basis(10, 12);
    const Eigen::MatrixXd block = random_block(10, 12, 8);
    for (MatrixKind kind : {MatrixKind::Bpd, MatrixKind::Bpbd, MatrixKind::Gaussian}) {
      const auto mat = MeasurementMatrix::build(kind, 24, 120, 6);
      const auto ms = compress_block(block, mat);
      BasisPursuitOptions opts;
      opts.max_iterations = 120;  // well short of convergence
      const auto res = reconstruct_block(ms, mat, basis, opts);
      CHECK(res.residual <= 1e-6 * std::max(1.0, ms.y.norm()));
    }
  }

  TEST_CASE("objective matches the exhaustive vertex oracle on small instances") {
    const SparsityBasis basis(3, 4);  // n = 12
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      Rng rng(mix_seed({777, seed}));
      const MatrixKind kind = seed % 2 == 0 ? MatrixKind::Bpd : MatrixKind::Gaussian;
      const int m = 4 + static_cast<int>(seed % 2);
      const auto mat = MeasurementMatrix::build(kind, m, 12, 50 + seed);
      Eigen::MatrixXd block(3, 4);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 4; ++j) block(i, j) = rng.uniform(0.0, 10.0);
      const auto ms = compress_block(block, mat);
      const auto res = reconstruct_block(ms, mat, basis);

      // Oracle works on the coefficient-space operator A = phi * idct2.
      const Eigen::MatrixXd phi = test::dense_matrix(mat);
      Eigen::MatrixXd a(m, 12);
      for (int j = 0; j < 12; ++j) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(12);
        e[j] = 1.0;
        a.col(j) = phi * basis.inverse_vec(e);
      }
      const double oracle = test::l1_oracle_objective(a, ms.y);
      CHECK(res.objective <= oracle * (1.0 + 1e-4) + 1e-9);
      CHECK(res.objective >= oracle * (1.0 - 1e-4) - 1e-9);
    }
  }

  TEST_CASE("strict mode reports non-convergence with the residual attached") {
    const SparsityBasis basis(10, 12);
    const Eigen::MatrixXd block = random_block(10, 12, 31);
    const auto mat = MeasurementMatrix::build(MatrixKind::Bpd, 24, 120, 2);
    BasisPursuitOptions opts;
    opts.max_iterations = 1;
    opts.strict = true;
    opts.polish = false;
    CHECK_THROWS_AS(reconstruct_block(compress_block(block, mat), mat, basis, opts), SolverError);
  }

  TEST_CASE("descriptor mismatch is rejected") {
    const SparsityBasis basis(4, 4);
    const auto mat_a = MeasurementMatrix::build(MatrixKind::Bpd, 4, 16, 1);
    const auto mat_b = MeasurementMatrix::build(MatrixKind::Bpd, 4, 16, 2);
    const auto ms = compress_block(Eigen::MatrixXd::Zero(4, 4), mat_a);
    CHECK_THROWS_AS(reconstruct_block(ms, mat_b, basis), std::invalid_argument);
  }
}

TEST_SUITE("frame_sensing") {
  TEST_CASE("full-rate plan reproduces the frame exactly") {
    SceneConfig sc;
    sc.n_frames = 1;
    sc.rows = 40;
    sc.cols = 48;
    sc.clutter_mean = 2.0;
    sc.seed = 5;
    sc.targets = {{1.0, 3.0, 0.0, 0.0, 150.0, 0.8, "car", 1, INT_MAX}};
    const RadarFrame frame = gen_scene(sc).frames[0];
    const BlockGrid grid = partition(frame, 20, 24);
    const auto sets = compress_frame(frame, grid, uniform_plan(grid, 1.0, "t"), MatrixKind::Bpd, 1);
    const RadarFrame recon = reconstruct_frame(sets, grid, FrameMeta::of(frame));
    CHECK((recon.data - frame.data).cwiseAbs().maxCoeff() <= 1e-8f);
  }

  TEST_CASE("uniform 20 percent plan stays within the sample budget") {
    // 400 x 576 frame in 20 x 48 blocks: 240 blocks, budget 46080 samples.
    const BlockGrid grid = make_grid(400, 576, 20, 48);
    const SamplingPlan plan = uniform_plan(grid, 0.2, "t");
    const long planned = plan.planned_measurements(grid.block_samples(), MatrixKind::Bpd);
    CHECK(planned <= 46080 + grid.total_blocks());
  }

  TEST_CASE("compression and reconstruction are deterministic and order-independent") {
    SceneConfig sc;
    sc.n_frames = 1;
    sc.rows = 40;
    sc.cols = 48;
    sc.clutter_mean = 3.0;
    sc.seed = 6;
    const RadarFrame frame = gen_scene(sc).frames[0];
    const BlockGrid grid = partition(frame, 20, 24);
    const SamplingPlan plan = uniform_plan(grid, 0.25, "t");

    const auto sets_a = compress_frame(frame, grid, plan, MatrixKind::Bpd, 9, Exec::Parallel);
    const auto sets_b = compress_frame(frame, grid, plan, MatrixKind::Bpd, 9, Exec::Serial);
    REQUIRE(sets_a.size() == sets_b.size());
    for (std::size_t i = 0; i < sets_a.size(); ++i) {
      CHECK(sets_a[i].y == sets_b[i].y);
      CHECK(sets_a[i].matrix == sets_b[i].matrix);
    }

    const RadarFrame ra = reconstruct_frame(sets_a, grid, FrameMeta::of(frame),
                                            BasisPursuitOptions{}, Exec::Parallel);
    const RadarFrame rb = reconstruct_frame(sets_a, grid, FrameMeta::of(frame),
                                            BasisPursuitOptions{}, Exec::Serial);
    CHECK(ra.data == rb.data);
  }

  TEST_CASE("per-block seeds differ across blocks and frames") {
    const BlockGrid grid = make_grid(40, 48, 20, 24);
    RadarFrame frame = make_frame(Eigen::MatrixXf::Constant(40, 48, 1.0f), 9.0, 0.1, 255.0f, 1);
    const auto sets = compress_frame(frame, grid, uniform_plan(grid, 0.5, "t"), MatrixKind::Bpd, 1);
    std::set<std::uint64_t> seeds;
    for (const auto& ms : sets) seeds.insert(ms.matrix.seed);
    CHECK(seeds.size() == sets.size());
    frame.frame_index = 2;
    const auto sets2 =
        compress_frame(frame, grid, uniform_plan(grid, 0.5, "t"), MatrixKind::Bpd, 1);
    CHECK(sets2[0].matrix.seed != sets[0].matrix.seed);
  }

  TEST_CASE("plan and grid mismatches are rejected") {
    const BlockGrid grid = make_grid(40, 48, 20, 24);
    const RadarFrame frame =
        make_frame(Eigen::MatrixXf::Zero(40, 48), 9.0, 0.1, 255.0f, 1);
    SamplingPlan bad;
    bad.rates = Eigen::MatrixXd::Constant(3, 2, 0.5);
    CHECK_THROWS_AS(compress_frame(frame, grid, bad, MatrixKind::Bpd, 1), std::invalid_argument);

    auto sets = compress_frame(frame, grid, uniform_plan(grid, 0.5, "t"), MatrixKind::Bpd, 1);
    sets.pop_back();
    CHECK_THROWS_AS(reconstruct_frame(sets, grid, FrameMeta::of(frame)), std::invalid_argument);
  }
}
