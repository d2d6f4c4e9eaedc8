#include "radsub/sensing.hpp"

#include <cmath>
#include <stdexcept>

#include "radsub/rng.hpp"

namespace radsub {
namespace {

std::uint64_t block_seed(std::uint64_t base_seed, int frame_index, BlockIndex idx) {
  return mix_seed({base_seed, static_cast<std::uint64_t>(frame_index),
                   static_cast<std::uint64_t>(idx.az), static_cast<std::uint64_t>(idx.rng)});
}

}  // namespace

std::vector<MeasurementSet> compress_frame(const RadarFrame& frame, const BlockGrid& grid,
                                           const SamplingPlan& plan, MatrixKind kind,
                                           std::uint64_t base_seed, Exec exec) {
  if (grid.frame_rows() != frame.rows() || grid.frame_cols() != frame.cols())
    throw std::invalid_argument("compress_frame: grid does not match frame shape");
  if (plan.rates.rows() != grid.n_az_blocks || plan.rates.cols() != grid.n_range_blocks)
    throw std::invalid_argument("compress_frame: plan does not cover the grid");

  const int n = grid.block_samples();
  const int total = grid.total_blocks();
  std::vector<MeasurementSet> sets(total);

  auto compress_one = [&](int flat) {
    const BlockIndex idx{flat / grid.n_range_blocks, flat % grid.n_range_blocks};
    const int m = measurement_count(plan.rate_at(idx), n, kind);
    if (m == 0) {
      sets[flat] = MeasurementSet{Eigen::VectorXd(), idx, frame.frame_index,
                                  MatrixDescriptor{kind, 0, n, 0}};
      return;
    }
    const auto matrix =
        MeasurementMatrix::build(kind, m, n, block_seed(base_seed, frame.frame_index, idx));
    sets[flat] = compress_block(extract_block(frame.data, grid, idx), matrix, idx,
                                frame.frame_index);
  };

  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int flat = 0; flat < total; ++flat) compress_one(flat);
  } else {
    for (int flat = 0; flat < total; ++flat) compress_one(flat);
  }
  return sets;
}

RadarFrame reconstruct_frame(const std::vector<MeasurementSet>& sets, const BlockGrid& grid,
                             const FrameMeta& meta, const BasisPursuitOptions& opts, Exec exec) {
  if (grid.frame_rows() != meta.rows || grid.frame_cols() != meta.cols)
    throw std::invalid_argument("reconstruct_frame: grid does not match frame shape");
  if (static_cast<int>(sets.size()) != grid.total_blocks())
    throw std::invalid_argument("reconstruct_frame: expected " +
                                std::to_string(grid.total_blocks()) + " measurement sets, got " +
                                std::to_string(sets.size()));
  std::vector<char> seen(sets.size(), 0);
  for (const auto& ms : sets) {
    if (ms.block.az < 0 || ms.block.az >= grid.n_az_blocks || ms.block.rng < 0 ||
        ms.block.rng >= grid.n_range_blocks)
      throw std::invalid_argument("reconstruct_frame: measurement set outside grid");
    char& flag = seen[ms.block.az * grid.n_range_blocks + ms.block.rng];
    if (flag) throw std::invalid_argument("reconstruct_frame: duplicate block in measurement sets");
    flag = 1;
  }

  const SparsityBasis basis(grid.block_rows, grid.block_cols);
  Eigen::MatrixXf data(meta.rows, meta.cols);
  const int total = static_cast<int>(sets.size());

  auto reconstruct_one = [&](int i) {
    const MeasurementSet& ms = sets[i];
    Eigen::MatrixXd block;
    if (ms.matrix.m == 0) {
      block = Eigen::MatrixXd::Zero(grid.block_rows, grid.block_cols);
    } else {
      const auto matrix = MeasurementMatrix::build(ms.matrix);
      block = reconstruct_block(ms, matrix, basis, opts).block;
    }
    block = block.cwiseMax(0.0).cwiseMin(static_cast<double>(meta.peak_value));
    place_block(data, grid, ms.block, block);
  };

  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < total; ++i) reconstruct_one(i);
  } else {
    for (int i = 0; i < total; ++i) reconstruct_one(i);
  }
  return make_frame(std::move(data), meta.azimuth_res, meta.range_res, meta.peak_value,
                    meta.frame_index);
}

long total_measurements(const std::vector<MeasurementSet>& sets) {
  long total = 0;
  for (const auto& ms : sets) total += ms.y.size();
  return total;
}

RadarFrame quantize_frame(const RadarFrame& frame, int bits) {
  if (bits < 1 || bits > 16) throw std::invalid_argument("quantize_frame: bits must be in [1, 16]");
  const double peak = frame.peak_value;
  const double levels = static_cast<double>(1 << bits);
  const double step = peak / levels;
  Eigen::MatrixXf data(frame.rows(), frame.cols());
  for (Eigen::Index j = 0; j < data.cols(); ++j) {
    for (Eigen::Index i = 0; i < data.rows(); ++i) {
      double q = std::floor(frame.data(i, j) / step);
      if (q > levels - 1) q = levels - 1;
      data(i, j) = static_cast<float>((q + 0.5) * step);
    }
  }
  return make_frame(std::move(data), frame.azimuth_res, frame.range_res, frame.peak_value,
                    frame.frame_index);
}

}  // namespace radsub
