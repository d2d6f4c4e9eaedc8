#include "radsub/basis_pursuit.hpp"

#include <Eigen/QR>
#include <cmath>
#include <vector>

namespace radsub {
namespace {

Eigen::VectorXd soft_threshold(const Eigen::VectorXd& v, double kappa) {
  return v.array().sign() * (v.array().abs() - kappa).max(0.0);
}

}  // namespace

BasisPursuitResult reconstruct_block(const MeasurementSet& ms, const MeasurementMatrix& matrix,
                                     const SparsityBasis& basis,
                                     const BasisPursuitOptions& opts) {
  if (!(matrix.descriptor() == ms.matrix))
    throw std::invalid_argument("reconstruct_block: matrix does not match measurement descriptor");
  if (matrix.n() != basis.size())
    throw std::invalid_argument("reconstruct_block: basis size does not match matrix n");
  if (ms.y.size() != matrix.m())
    throw std::invalid_argument("reconstruct_block: measurement length mismatch");

  const int n = matrix.n();
  BasisPursuitResult result;

  if (matrix.m() == 0 || ms.y.size() == 0) {
    result.block = Eigen::MatrixXd::Zero(basis.rows(), basis.cols());
    result.coeffs = Eigen::VectorXd::Zero(n);
    result.converged = true;
    return result;
  }

  const double y_norm = ms.y.norm();
  if (y_norm == 0.0) {
    // Minimum-L1 solution of phi x = 0 is x = 0.
    result.block = Eigen::MatrixXd::Zero(basis.rows(), basis.cols());
    result.coeffs = Eigen::VectorXd::Zero(n);
    result.converged = true;
    return result;
  }

  // Work at unit measurement scale so the shrinkage threshold 1/rho behaves
  // identically across intensity ranges.
  const Eigen::VectorXd y = ms.y / y_norm;

  auto apply_a = [&](const Eigen::VectorXd& c) { return matrix.apply(basis.inverse_vec(c)); };
  auto apply_at = [&](const Eigen::VectorXd& w) {
    return basis.forward_vec(matrix.apply_transpose(w));
  };
  auto project = [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
    return v + apply_at(matrix.gram_solve(y - apply_a(v)));
  };

  const double kappa = 1.0 / opts.rho;
  const double alpha = opts.over_relaxation;
  const double sqrt_n = std::sqrt(static_cast<double>(n));

  Eigen::VectorXd x = project(Eigen::VectorXd::Zero(n));  // min-norm feasible start
  Eigen::VectorXd z = x;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd z_prev(n);

  for (int k = 0; k < opts.max_iterations; ++k) {
    ++result.iterations;
    x = project(z - u);
    const Eigen::VectorXd x_hat = alpha * x + (1.0 - alpha) * z;
    z_prev = z;
    z = soft_threshold(x_hat + u, kappa);
    u += x_hat - z;

    const double r_norm = (x - z).norm();
    const double s_norm = opts.rho * (z - z_prev).norm();
    const double eps_pri =
        sqrt_n * opts.abs_tolerance + opts.rel_tolerance * std::max(x.norm(), z.norm());
    const double eps_dual = sqrt_n * opts.abs_tolerance + opts.rel_tolerance * opts.rho * u.norm();
    if (r_norm <= eps_pri && s_norm <= eps_dual) {
      result.converged = true;
      break;
    }
  }

  Eigen::VectorXd coeffs = project(z - u);

  if (opts.polish) {
    const double z_max = z.cwiseAbs().maxCoeff();
    std::vector<int> support;
    if (z_max > 0.0) {
      const double cut = 1e-5 * z_max;
      for (int i = 0; i < n; ++i)
        if (std::abs(z[i]) > cut) support.push_back(i);
    }
    if (!support.empty() && static_cast<int>(support.size()) <= matrix.m()) {
      Eigen::MatrixXd a_support(matrix.m(), support.size());
      Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
      for (std::size_t j = 0; j < support.size(); ++j) {
        e[support[j]] = 1.0;
        a_support.col(static_cast<Eigen::Index>(j)) = apply_a(e);
        e[support[j]] = 0.0;
      }
      const Eigen::VectorXd c_s = a_support.colPivHouseholderQr().solve(y);
      if ((a_support * c_s - y).norm() <= 1e-9) {
        Eigen::VectorXd polished = Eigen::VectorXd::Zero(n);
        for (std::size_t j = 0; j < support.size(); ++j)
          polished[support[j]] = c_s[static_cast<Eigen::Index>(j)];
        if (polished.lpNorm<1>() <= coeffs.lpNorm<1>() * (1.0 + 1e-12)) {
          coeffs = polished;
          result.polished = true;
        }
      }
    }
  }

  coeffs *= y_norm;
  result.coeffs = coeffs;
  result.objective = coeffs.lpNorm<1>();
  result.block = basis.inverse(devectorize_row_major(coeffs, basis.rows(), basis.cols()));
  result.residual = (matrix.apply(vectorize_row_major(result.block)) - ms.y).norm();

  const double allowed = 1e-6 * std::max(1.0, y_norm);
  if (!std::isfinite(result.residual) || result.residual > allowed)
    throw SolverError("basis pursuit: measurement residual " + std::to_string(result.residual) +
                          " exceeds tolerance " + std::to_string(allowed),
                      result.residual);
  if (opts.strict && !result.converged)
    throw SolverError("basis pursuit: iteration cap " + std::to_string(opts.max_iterations) +
                          " reached before convergence (residual " +
                          std::to_string(result.residual) + ")",
                      result.residual);
  return result;
}

}  // namespace radsub
