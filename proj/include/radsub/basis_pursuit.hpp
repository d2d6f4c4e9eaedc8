#pragma once

#include <stdexcept>

#include "radsub/dct.hpp"
#include "radsub/measurement.hpp"

namespace radsub {

struct BasisPursuitOptions {
  int max_iterations = 2000;
  double rho = 1.0;               // augmented Lagrangian parameter
  double over_relaxation = 1.6;   // alpha in [1.0, 1.8]
  double abs_tolerance = 1e-8;
  double rel_tolerance = 1e-6;
  bool polish = true;   // debias by least squares on the detected support
  bool strict = false;  // throw when the iteration cap is hit before convergence
};

struct BasisPursuitResult {
  Eigen::MatrixXd block;    // idct2 of the recovered coefficients
  Eigen::VectorXd coeffs;   // minimizer of ||c||_1 s.t. phi idct2(c) = y
  double objective = 0.0;   // L1 norm of coeffs
  double residual = 0.0;    // ||phi vec(block) - y||_2
  int iterations = 0;
  bool converged = false;
  bool polished = false;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual)
      : std::runtime_error(what), residual(residual) {}
  double residual;
};

// Equality-constrained basis pursuit by ADMM: alternates projection onto the
// affine set {c : phi idct2(c) = y} with soft thresholding. The returned
// iterate is always the projected one, so the measurement-consistency
// residual holds to roundoff; an optional polishing step solves least squares
// on the detected support and is kept only when it does not increase the L1
// objective. m = 0 returns the zero block.
BasisPursuitResult reconstruct_block(const MeasurementSet& ms, const MeasurementMatrix& matrix,
                                     const SparsityBasis& basis,
                                     const BasisPursuitOptions& opts = {});

}  // namespace radsub
