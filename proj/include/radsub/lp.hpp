#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>
#include <vector>

namespace radsub {

struct LpConstraint {
  Eigen::VectorXd coeffs;
  double rhs = 0.0;
  std::string name;
};

// maximize objective . x
//   s.t. equalities   coeffs . x == rhs
//        inequalities coeffs . x <= rhs
//        lower <= x <= upper  (finite bounds required)
struct LpProblem {
  Eigen::VectorXd objective;
  std::vector<LpConstraint> equalities;
  std::vector<LpConstraint> inequalities;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

struct LpSolution {
  Eigen::VectorXd x;
  double objective = 0.0;
};

class LpInfeasibleError : public std::runtime_error {
 public:
  LpInfeasibleError(const std::string& what, std::string constraint)
      : std::runtime_error(what), constraint(std::move(constraint)) {}
  std::string constraint;  // name of the violated constraint
};

// Exact solver for small dense problems (intended dimension <= 6): enumerates
// candidate vertices from every nonsingular active set, keeps the best
// feasible one. The box bounds make the feasible region bounded, so an
// optimum, when it exists, is attained at an enumerated vertex. Deterministic;
// ties keep the first vertex in enumeration order.
LpSolution solve_bounded_lp(const LpProblem& problem);

}  // namespace radsub
