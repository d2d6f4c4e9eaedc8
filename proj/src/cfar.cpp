#include "radsub/cfar.hpp"

#include <cmath>
#include <stdexcept>

namespace radsub {

void validate(const CfarParams& params) {
  if (params.n_train < 2) throw std::invalid_argument("cfar: n_train must be >= 2");
  if (params.n_guard < 0) throw std::invalid_argument("cfar: n_guard must be >= 0");
  if (!(params.pfa > 0.0 && params.pfa < 1.0))
    throw std::invalid_argument("cfar: pfa must be in (0, 1)");
}

double threshold_factor(int n_effective, double pfa) {
  if (n_effective < 1) throw std::invalid_argument("cfar: n_effective must be >= 1");
  const double n = static_cast<double>(n_effective);
  return n * (std::pow(pfa, -1.0 / n) - 1.0);
}

std::vector<std::uint8_t> ca_cfar_row(const std::vector<double>& row, const CfarParams& params) {
  validate(params);
  const int len = static_cast<int>(row.size());
  if (len <= params.n_guard + 2)
    throw std::invalid_argument("cfar: row length " + std::to_string(len) +
                                " too short for n_guard=" + std::to_string(params.n_guard));
  const int guard = params.n_guard / 2;
  const int train = params.n_train / 2;

  std::vector<double> prefix(len + 1, 0.0);
  for (int i = 0; i < len; ++i) prefix[i + 1] = prefix[i] + row[i];
  auto window_sum = [&](int lo, int hi) {  // inclusive, assumed clipped
    return hi < lo ? 0.0 : prefix[hi + 1] - prefix[lo];
  };

  const double alpha_full = threshold_factor(2 * train, params.pfa);
  std::vector<std::uint8_t> mask(len, 0);
  for (int i = 0; i < len; ++i) {
    const int left_hi = i - guard - 1;
    const int left_lo = std::max(0, i - guard - train);
    const int right_lo = i + guard + 1;
    const int right_hi = std::min(len - 1, i + guard + train);
    const int count = std::max(0, left_hi - left_lo + 1) + std::max(0, right_hi - right_lo + 1);
    if (count == 0) continue;
    const double noise = (window_sum(left_lo, left_hi) + window_sum(right_lo, right_hi)) / count;
    const double alpha =
        count == 2 * train ? alpha_full : threshold_factor(count, params.pfa);
    if (row[i] > alpha * noise) mask[i] = 1;
  }
  return mask;
}

DetectionMask cfar_mask(const RadarFrame& frame, const CfarParams& params, Exec exec) {
  validate(params);
  const int rows = frame.rows();
  const int cols = frame.cols();
  DetectionMask mask(rows, cols);

  auto process_row = [&](int i) {
    std::vector<double> row(cols);
    for (int j = 0; j < cols; ++j) row[j] = frame.data(i, j);
    const auto m = ca_cfar_row(row, params);
    for (int j = 0; j < cols; ++j) mask(i, j) = m[j];
  };

  if (exec == Exec::Parallel) {
#pragma omp parallel for schedule(static)
    for (int i = 0; i < rows; ++i) process_row(i);
  } else {
    for (int i = 0; i < rows; ++i) process_row(i);
  }
  return mask;
}

std::set<BlockIndex> cfar_important_blocks(const RadarFrame& frame, const BlockGrid& grid,
                                           const CfarParams& params, Exec exec) {
  if (grid.frame_rows() != frame.rows() || grid.frame_cols() != frame.cols())
    throw std::invalid_argument("cfar_important_blocks: grid does not match frame shape");
  const DetectionMask mask = cfar_mask(frame, params, exec);
  std::set<BlockIndex> blocks;
  for (int i = 0; i < frame.rows(); ++i)
    for (int j = 0; j < frame.cols(); ++j)
      if (mask(i, j)) blocks.insert({i / grid.block_rows, j / grid.block_cols});
  return blocks;
}

}  // namespace radsub
