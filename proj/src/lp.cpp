#include "radsub/lp.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <limits>

namespace radsub {
namespace {

constexpr double kFeasTol = 1e-9;

struct Halfspace {
  Eigen::VectorXd coeffs;
  double rhs;
  std::string name;
};

double violation(const Halfspace& h, const Eigen::VectorXd& x) {
  const double v = h.coeffs.dot(x) - h.rhs;
  return v / std::max(1.0, std::abs(h.rhs));
}

// Next k-combination of indices in [0, n); returns false when exhausted.
bool next_combination(std::vector<int>& comb, int n) {
  const int k = static_cast<int>(comb.size());
  for (int i = k - 1; i >= 0; --i) {
    if (comb[i] < n - (k - i)) {
      ++comb[i];
      for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

LpSolution solve_bounded_lp(const LpProblem& problem) {
  const int d = static_cast<int>(problem.objective.size());
  if (d < 1) throw std::invalid_argument("lp: empty objective");
  if (problem.lower.size() != d || problem.upper.size() != d)
    throw std::invalid_argument("lp: bound dimension mismatch");
  for (int i = 0; i < d; ++i) {
    if (!std::isfinite(problem.lower[i]) || !std::isfinite(problem.upper[i]))
      throw std::invalid_argument("lp: bounds must be finite");
    if (problem.lower[i] > problem.upper[i] + kFeasTol)
      throw LpInfeasibleError("lp: empty box for variable " + std::to_string(i),
                              "bounds(x" + std::to_string(i + 1) + ")");
  }
  const int n_eq = static_cast<int>(problem.equalities.size());
  if (n_eq > d) throw std::invalid_argument("lp: more equalities than variables");

  // All inequality-form constraints that can complete an active set.
  std::vector<Halfspace> candidates;
  for (const auto& c : problem.inequalities) candidates.push_back({c.coeffs, c.rhs, c.name});
  for (int i = 0; i < d; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
    e[i] = -1.0;
    candidates.push_back({e, -problem.lower[i], "lower(x" + std::to_string(i + 1) + ")"});
    e[i] = 1.0;
    candidates.push_back({e, problem.upper[i], "upper(x" + std::to_string(i + 1) + ")"});
  }

  auto check_feasible = [&](const Eigen::VectorXd& x, double* worst,
                            std::string* worst_name) -> bool {
    bool ok = true;
    for (const auto& c : problem.equalities) {
      const double v = std::abs(c.coeffs.dot(x) - c.rhs) / std::max(1.0, std::abs(c.rhs));
      if (v > kFeasTol) ok = false;
      if (v > *worst) {
        *worst = v;
        *worst_name = c.name;
      }
    }
    for (const auto& h : candidates) {
      const double v = violation(h, x);
      if (v > kFeasTol) ok = false;
      if (v > *worst) {
        *worst = v;
        *worst_name = h.name;
      }
    }
    return ok;
  };

  const int k = d - n_eq;
  const int n_cand = static_cast<int>(candidates.size());
  if (k > n_cand) throw std::invalid_argument("lp: underdetermined active set");

  Eigen::MatrixXd m(d, d);
  Eigen::VectorXd r(d);
  for (int i = 0; i < n_eq; ++i) {
    m.row(i) = problem.equalities[i].coeffs.transpose();
    r[i] = problem.equalities[i].rhs;
  }

  bool found = false;
  LpSolution best;
  double least_infeasible = std::numeric_limits<double>::infinity();
  std::string least_infeasible_name = "equalities";

  std::vector<int> comb(k);
  for (int i = 0; i < k; ++i) comb[i] = i;
  bool more = true;
  while (more) {
    for (int i = 0; i < k; ++i) {
      m.row(n_eq + i) = candidates[comb[i]].coeffs.transpose();
      r[n_eq + i] = candidates[comb[i]].rhs;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    if (lu.isInvertible()) {
      const Eigen::VectorXd x = lu.solve(r);
      double worst = 0.0;
      std::string worst_name;
      if (check_feasible(x, &worst, &worst_name)) {
        const double obj = problem.objective.dot(x);
        if (!found || obj > best.objective + 1e-12 * std::max(1.0, std::abs(best.objective))) {
          best = LpSolution{x, obj};
          found = true;
        }
      } else if (worst < least_infeasible) {
        least_infeasible = worst;
        least_infeasible_name = worst_name;
      }
    }
    more = k > 0 && next_combination(comb, n_cand);
    if (k == 0) break;
  }

  if (!found)
    throw LpInfeasibleError("lp: no feasible vertex; most binding constraint: " +
                                least_infeasible_name,
                            least_infeasible_name);
  return best;
}

}  // namespace radsub
