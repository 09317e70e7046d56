#pragma once

// Bound-constrained Levenberg-Marquardt with central-difference Jacobians.

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace nvdac {

using ResidualFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct LeastSquaresOptions {
  int max_iterations = 200;
  // Largest cosine between the residual vector and any Jacobian column.
  double gradient_tol = 1e-10;
  double step_tol = 1e-14;
  double relative_cost_tol = 1e-15;
  double fd_relative_step = 1e-6;
  double initial_damping = 1e-3;
};

struct Bounds {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  static Bounds unbounded(Eigen::Index n);
  Eigen::VectorXd clamp(const Eigen::VectorXd& x) const;
};

struct LeastSquaresResult {
  Eigen::VectorXd params;
  Eigen::VectorXd residuals;
  Eigen::MatrixXd jacobian;
  double cost = 0.0;  // 0.5 |r|^2
  // Cost at the start and after every accepted step.
  std::vector<double> cost_history;
  int iterations = 0;
  bool converged = false;
  std::string stop_reason;
};

/// Central differences with step h_i = rel * max(|x_i|, 1); one-sided where a
/// bound blocks the symmetric stencil.
Eigen::MatrixXd central_difference_jacobian(const ResidualFn& f, const Eigen::VectorXd& x,
                                            const Eigen::VectorXd& fx, const Bounds& bounds,
                                            double relative_step);

LeastSquaresResult levenberg_marquardt(const ResidualFn& f, const Eigen::VectorXd& x0,
                                       const Bounds& bounds,
                                       const LeastSquaresOptions& options = {});

/// 1-sigma parameter uncertainties from s^2 (J^T J)^-1 with
/// s^2 = |r|^2 / (m - n). Directions the data cannot resolve get +inf.
Eigen::VectorXd parameter_uncertainties(const LeastSquaresResult& result);

}  // namespace nvdac
