#include "radsub/allocator.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace radsub {
namespace {

Eigen::Vector4d lp1_budget_coeffs(const Lp1Inputs& in) {
  return {static_cast<double>(in.a1) * in.r1 + in.b1, static_cast<double>(in.a2) * in.r1 + in.b2,
          static_cast<double>(in.a3) * in.r1 + in.b3,
          static_cast<double>(in.a1 + in.a2 + in.a3) * in.r2};
}

}  // namespace

void validate(const Lp1Inputs& in) {
  if (in.a1 < 0 || in.a2 < 0 || in.a3 < 0)
    throw std::invalid_argument("lp1: azimuth category counts must be nonnegative");
  if (in.r1 < 0 || in.r2 < 0 || in.r1 + in.r2 < 1)
    throw std::invalid_argument("lp1: range split must be nonnegative and nonempty");
  if (in.b1 < 0 || in.b2 > 0 || in.b3 > 0)
    throw std::invalid_argument("lp1: need b1 >= 0 and b2, b3 <= 0");
  if (in.b1 + in.b2 + in.b3 != 0)
    throw std::invalid_argument("lp1: promotion terms must cancel (b1 + b2 + b3 == 0)");
  if (in.a2 * in.r1 + in.b2 < 0 || in.a3 * in.r1 + in.b3 < 0)
    throw std::invalid_argument("lp1: promotions exceed category sizes");
  if (in.total_blocks != (in.a1 + in.a2 + in.a3) * (in.r1 + in.r2))
    throw std::invalid_argument("lp1: total_blocks does not match category counts");
  if (!(in.budget_fraction > 0.0 && in.budget_fraction <= 1.0))
    throw std::invalid_argument("lp1: budget_fraction must be in (0, 1]");
  if (!(in.bounds.x_lower <= in.bounds.x_upper) || !(in.bounds.x4_lower <= in.bounds.x4_upper) ||
      in.bounds.x_lower < 0.0 || in.bounds.x4_lower < 0.0)
    throw std::invalid_argument("lp1: malformed rate bounds");
}

Lp1Rates solve_lp1(const Lp1Inputs& in) {
  validate(in);
  const Eigen::Vector4d cost = lp1_budget_coeffs(in);
  const double budget = in.budget_fraction * in.total_blocks;

  LpProblem stage;
  stage.objective = Eigen::Vector4d{0, 0, 1, 0};
  stage.equalities = {{Eigen::Vector4d{1, 0, -3, 0}, 0.0, "x1 - 3x3 = 0"},
                      {Eigen::Vector4d{0, 1, -2, 0}, 0.0, "x2 - 2x3 = 0"}};
  stage.inequalities = {{cost, budget, "budget"}};
  stage.lower = Eigen::Vector4d{in.bounds.x_lower, in.bounds.x_lower, in.bounds.x_lower,
                                in.bounds.x4_lower};
  stage.upper = Eigen::Vector4d{in.bounds.x_upper, in.bounds.x_upper, in.bounds.x_upper,
                                in.bounds.x4_lower};  // x4 pinned low while x3 is maximized

  const LpSolution first = solve_bounded_lp(stage);

  stage.objective = Eigen::Vector4d{0, 0, 0, 1};
  stage.lower[2] = stage.upper[2] = first.x[2];
  stage.upper[3] = in.bounds.x4_upper;
  const LpSolution second = solve_bounded_lp(stage);

  Lp1Rates rates;
  rates.x1 = second.x[0];
  rates.x2 = second.x[1];
  rates.x3 = second.x[2];
  rates.x4 = second.x[3];
  rates.objective = cost.dot(second.x);
  return rates;
}

void validate(const Lp2Inputs& in) {
  if (in.important_blocks < 0 || in.other_blocks < 0)
    throw std::invalid_argument("lp2: block counts must be nonnegative");
  if (in.important_blocks + in.other_blocks < 1)
    throw std::invalid_argument("lp2: empty grid");
  if (in.block_cols < 1 || in.block_rows < 1)
    throw std::invalid_argument("lp2: block shape must be positive");
  if (!(in.sample_budget > 0.0)) throw std::invalid_argument("lp2: sample budget must be positive");
  if (!(in.x1_lower <= in.x1_upper))
    throw LpInfeasibleError("lp2: empty x1 box", "bounds(x1)");
  if (!(in.x2_lower <= in.x2_upper))
    throw LpInfeasibleError("lp2: empty x2 box", "bounds(x2)");
}

Lp2Rates solve_lp2(const Lp2Inputs& in) {
  validate(in);
  const double wh = static_cast<double>(in.block_cols) * in.block_rows;
  const Eigen::Vector2d cost{in.important_blocks * wh, in.other_blocks * wh};

  LpProblem stage;
  stage.objective = Eigen::Vector2d{1, 0};
  stage.inequalities = {{Eigen::Vector2d{-1.0, 1.1}, 0.0, "x1 >= 1.1x2"},
                        {cost, in.sample_budget, "budget"}};
  stage.lower = Eigen::Vector2d{in.x1_lower, in.x2_lower};
  stage.upper = Eigen::Vector2d{in.x1_upper, in.x2_lower};  // x2 pinned low while x1 is maximized

  const LpSolution first = solve_bounded_lp(stage);

  stage.objective = Eigen::Vector2d{0, 1};
  stage.lower[0] = stage.upper[0] = first.x[0];
  stage.upper[1] = in.x2_upper;
  const LpSolution second = solve_bounded_lp(stage);

  Lp2Rates rates;
  rates.x1 = second.x[0];
  rates.x2 = second.x[1];
  rates.objective = cost.dot(second.x);
  return rates;
}

long SamplingPlan::planned_measurements(int block_samples, MatrixKind kind) const {
  long total = 0;
  for (Eigen::Index a = 0; a < rates.rows(); ++a)
    for (Eigen::Index r = 0; r < rates.cols(); ++r)
      total += measurement_count(rates(a, r), block_samples, kind);
  return total;
}

SamplingPlan uniform_plan(const BlockGrid& grid, double rate, std::string provenance) {
  if (rate < 0.0 || rate > 1.0) throw std::invalid_argument("plan: rate outside [0, 1]");
  SamplingPlan plan;
  plan.rates = Eigen::MatrixXd::Constant(grid.n_az_blocks, grid.n_range_blocks, rate);
  plan.provenance = std::move(provenance);
  return plan;
}

SamplingPlan plan_from_solution(const BlockGrid& grid, const std::set<BlockIndex>& important,
                                const Lp2Rates& rates) {
  SamplingPlan plan;
  plan.rates = Eigen::MatrixXd::Constant(grid.n_az_blocks, grid.n_range_blocks, rates.x2);
  for (const BlockIndex& b : important) {
    if (b.az < 0 || b.az >= grid.n_az_blocks || b.rng < 0 || b.rng >= grid.n_range_blocks)
      throw std::invalid_argument("plan: important block outside grid");
    plan.rates(b.az, b.rng) = rates.x1;
  }
  std::ostringstream os;
  os << std::setprecision(17) << "{\"lp\":\"lp2\",\"I\":" << important.size()
     << ",\"O\":" << grid.total_blocks() - static_cast<long>(important.size())
     << ",\"x1\":" << rates.x1 << ",\"x2\":" << rates.x2 << "}";
  plan.provenance = os.str();
  return plan;
}

SamplingPlan plan_from_solution(const BlockGrid& grid, const Lp1Categories& cats,
                                const Lp1Rates& rates) {
  if (cats.r1 < 0 || cats.r1 > grid.n_range_blocks)
    throw std::invalid_argument("plan: r1 outside range axis");
  for (int az : cats.a1_azimuths)
    if (az < 0 || az >= grid.n_az_blocks)
      throw std::invalid_argument("plan: a1 azimuth outside grid");
  for (int az : cats.a2_azimuths)
    if (az < 0 || az >= grid.n_az_blocks)
      throw std::invalid_argument("plan: a2 azimuth outside grid");
  for (const BlockIndex& b : cats.promoted)
    if (b.az < 0 || b.az >= grid.n_az_blocks || b.rng < 0 || b.rng >= cats.r1)
      throw std::invalid_argument("plan: promoted block outside the near-range region");

  SamplingPlan plan;
  plan.rates.resize(grid.n_az_blocks, grid.n_range_blocks);
  for (int az = 0; az < grid.n_az_blocks; ++az) {
    for (int rng = 0; rng < grid.n_range_blocks; ++rng) {
      double rate;
      if (rng >= cats.r1) {
        rate = rates.x4;
      } else if (cats.a1_azimuths.count(az) || cats.promoted.count({az, rng})) {
        rate = rates.x1;
      } else if (cats.a2_azimuths.count(az)) {
        rate = rates.x2;
      } else {
        rate = rates.x3;
      }
      plan.rates(az, rng) = rate;
    }
  }
  std::ostringstream os;
  os << std::setprecision(17) << "{\"lp\":\"lp1\",\"a1\":" << cats.a1_azimuths.size() << ",\"a2\":" << cats.a2_azimuths.size()
     << ",\"promoted\":" << cats.promoted.size() << ",\"r1\":" << cats.r1 << ",\"x1\":" << rates.x1
     << ",\"x2\":" << rates.x2 << ",\"x3\":" << rates.x3 << ",\"x4\":" << rates.x4 << "}";
  plan.provenance = os.str();
  return plan;
}

}  // namespace radsub
