#pragma once

#include <cstdint>
#include <vector>

#include "radsub/allocator.hpp"
#include "radsub/basis_pursuit.hpp"
#include "radsub/frame.hpp"
#include "radsub/measurement.hpp"
#include "radsub/types.hpp"

namespace radsub {

// Compresses every block of the frame under the plan. Per-block seeds derive
// deterministically from (base_seed, frame_index, az, rng); output order is
// az-major. Blocks are independent, so the parallel and serial paths emit
// identical measurement sets.
std::vector<MeasurementSet> compress_frame(const RadarFrame& frame, const BlockGrid& grid,
                                           const SamplingPlan& plan, MatrixKind kind,
                                           std::uint64_t base_seed, Exec exec = Exec::Parallel);

// Reassembles a frame from per-block reconstructions. Expects exactly one
// measurement set per grid block; measurement matrices are rebuilt from the
// stored descriptors. Values are clamped to [0, peak] so the frame invariants
// hold. Deterministic regardless of execution policy.
RadarFrame reconstruct_frame(const std::vector<MeasurementSet>& sets, const BlockGrid& grid,
                             const FrameMeta& meta, const BasisPursuitOptions& opts = {},
                             Exec exec = Exec::Parallel);

long total_measurements(const std::vector<MeasurementSet>& sets);

// Uniform quantization of [0, peak_value] into 2^bits levels, dequantized to
// bin midpoints; the worst-case error is peak / 2^(bits+1). Zero maps to the
// lowest bin midpoint.
RadarFrame quantize_frame(const RadarFrame& frame, int bits = 3);

}  // namespace radsub
