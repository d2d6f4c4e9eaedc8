#pragma once

#include <Eigen/Core>
#include <set>
#include <vector>

#include "radsub/frame.hpp"
#include "radsub/types.hpp"

namespace radsub {

// Cell-averaging CFAR over range rows. n_train and n_guard are totals split
// symmetrically per side; windows truncate at row ends and the threshold
// factor is recomputed for the actual training count, so near/far range cells
// remain detectable.
struct CfarParams {
  int n_train = 300;
  int n_guard = 50;
  double pfa = 1e-3;
};

void validate(const CfarParams& params);

// alpha = n * (pfa^(-1/n) - 1); exact for i.i.d. exponential clutter.
double threshold_factor(int n_effective, double pfa);

// Detection mask for one range profile: cell > alpha * (training mean).
std::vector<std::uint8_t> ca_cfar_row(const std::vector<double>& row, const CfarParams& params);

using DetectionMask = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

// Rows are independent; parallel and serial paths are bit-identical.
DetectionMask cfar_mask(const RadarFrame& frame, const CfarParams& params,
                        Exec exec = Exec::Parallel);

// Blocks containing at least one detected cell.
std::set<BlockIndex> cfar_important_blocks(const RadarFrame& frame, const BlockGrid& grid,
                                           const CfarParams& params, Exec exec = Exec::Parallel);

}  // namespace radsub
