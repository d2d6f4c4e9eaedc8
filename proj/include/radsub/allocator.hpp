#pragma once

#include <Eigen/Core>
#include <set>
#include <string>

#include "radsub/frame.hpp"
#include "radsub/lp.hpp"
#include "radsub/measurement.hpp"

namespace radsub {

// Category-driven allocation over (azimuth category x near/far range split).
// a1/a2/a3 count azimuth blocks holding pedestrians-or-bicycles / cars /
// everything else; r1/r2 split the range axis into near and far block counts.
// b1 promotes CFAR-flagged near-range blocks into the top rate category and
// b2/b3 remove those same blocks from their original categories, so
// b1 + b2 + b3 == 0 and no block is budgeted twice.
struct Lp1Bounds {
  double x_lower = 0.05;   // applies to x1..x3
  double x_upper = 0.4;
  double x4_lower = 0.02;  // far-range rate
  double x4_upper = 0.025;
};

struct Lp1Inputs {
  int a1 = 0;
  int a2 = 0;
  int a3 = 0;
  int r1 = 0;
  int r2 = 0;
  int b1 = 0;
  int b2 = 0;
  int b3 = 0;
  int total_blocks = 0;           // S, in block-equivalents
  double budget_fraction = 0.1;   // budget = budget_fraction * S
  Lp1Bounds bounds;
};

void validate(const Lp1Inputs& in);

struct Lp1Rates {
  double x1 = 0.0, x2 = 0.0, x3 = 0.0, x4 = 0.0;
  double objective = 0.0;  // budgeted block-equivalents
};

// Maximizes (a1 r1 + b1) x1 + (a2 r1 + b2) x2 + (a3 r1 + b3) x3 +
// (a1+a2+a3) r2 x4 under x1 = 3 x3, x2 = 2 x3, the budget, and the box
// bounds. The objective equals the budgeted quantity, so budget-saturating
// optima are non-unique; ties resolve lexicographically by maximizing x3
// first (x4 held at its lower bound), then x4 with the remaining budget.
Lp1Rates solve_lp1(const Lp1Inputs& in);

// Two-category allocation: important blocks (I) vs the rest (O), block shape
// w x h in samples, sample budget S.
struct Lp2Inputs {
  int important_blocks = 0;  // I
  int other_blocks = 0;      // O
  int block_cols = 0;        // w
  int block_rows = 0;        // h
  double sample_budget = 0;  // S
  double x1_lower = 0.0, x1_upper = 0.55;
  double x2_lower = 0.07, x2_upper = 0.0;
};

void validate(const Lp2Inputs& in);

struct Lp2Rates {
  double x1 = 0.0, x2 = 0.0;
  double objective = 0.0;  // budgeted samples
};

// Maximizes I w h x1 + O w h x2 under x1 >= 1.1 x2, the budget, and the box
// bounds; ties resolve by maximizing x1 first, then x2.
Lp2Rates solve_lp2(const Lp2Inputs& in);

// Per-block sampling rates for one frame.
struct SamplingPlan {
  Eigen::MatrixXd rates;    // n_az_blocks x n_range_blocks
  std::string provenance;   // compact JSON: which program produced it and its inputs

  double rate_at(BlockIndex idx) const { return rates(idx.az, idx.rng); }
  long planned_measurements(int block_samples, MatrixKind kind) const;
};

SamplingPlan uniform_plan(const BlockGrid& grid, double rate, std::string provenance);

// LP #2 assignment: important blocks get x1, all others x2.
SamplingPlan plan_from_solution(const BlockGrid& grid, const std::set<BlockIndex>& important,
                                const Lp2Rates& rates);

// LP #1 assignment. Near-range blocks (rng < r1) get x1/x2/x3 by azimuth
// category with CFAR-promoted blocks lifted to x1; every far-range block gets
// x4.
struct Lp1Categories {
  std::set<int> a1_azimuths;
  std::set<int> a2_azimuths;          // exclusive of a1
  std::set<BlockIndex> promoted;      // near-range CFAR promotions, az not in a1
  int r1 = 0;
};

SamplingPlan plan_from_solution(const BlockGrid& grid, const Lp1Categories& cats,
                                const Lp1Rates& rates);

}  // namespace radsub
