#pragma once

namespace radsub {

// Execution policy for the data-parallel kernels (block reconstruction,
// CFAR rows, resampling). Serial is the reference path kept for testing;
// Parallel uses OpenMP. Both must produce bit-identical results.
enum class Exec { Serial, Parallel };

// Axis-aligned box in pixel coordinates: top-left corner plus extent.
struct BBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double cx() const { return x + 0.5 * w; }
  double cy() const { return y + 0.5 * h; }
};

}  // namespace radsub
