#include "nvdac/least_squares.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nvdac/error.hpp"

namespace nvdac {

Bounds Bounds::unbounded(Eigen::Index n) {
  const double inf = std::numeric_limits<double>::infinity();
  return {Eigen::VectorXd::Constant(n, -inf), Eigen::VectorXd::Constant(n, inf)};
}

Eigen::VectorXd Bounds::clamp(const Eigen::VectorXd& x) const {
  return x.cwiseMax(lower).cwiseMin(upper);
}

Eigen::MatrixXd central_difference_jacobian(const ResidualFn& f, const Eigen::VectorXd& x,
                                            const Eigen::VectorXd& fx, const Bounds& bounds,
                                            double relative_step) {
  Eigen::MatrixXd jac(fx.size(), x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double h = relative_step * std::max(std::abs(x(j)), 1.0);
    Eigen::VectorXd up = x;
    Eigen::VectorXd dn = x;
    const bool can_up = x(j) + h <= bounds.upper(j);
    const bool can_dn = x(j) - h >= bounds.lower(j);
    if (can_up && can_dn) {
      up(j) += h;
      dn(j) -= h;
      jac.col(j) = (f(up) - f(dn)) / (2.0 * h);
    } else if (can_up) {
      up(j) += h;
      jac.col(j) = (f(up) - fx) / h;
    } else if (can_dn) {
      dn(j) -= h;
      jac.col(j) = (fx - f(dn)) / h;
    } else {
      jac.col(j).setZero();
    }
  }
  return jac;
}

namespace {

double max_gradient_cosine(const Eigen::MatrixXd& jac, const Eigen::VectorXd& r) {
  const double rnorm = r.norm();
  if (rnorm == 0.0) return 0.0;
  double worst = 0.0;
  for (Eigen::Index j = 0; j < jac.cols(); ++j) {
    const double cnorm = jac.col(j).norm();
    if (cnorm == 0.0) continue;
    worst = std::max(worst, std::abs(jac.col(j).dot(r)) / (cnorm * rnorm));
  }
  return worst;
}

}  // namespace

LeastSquaresResult levenberg_marquardt(const ResidualFn& f, const Eigen::VectorXd& x0,
                                       const Bounds& bounds, const LeastSquaresOptions& options) {
  if (bounds.lower.size() != x0.size() || bounds.upper.size() != x0.size())
    throw InvalidInput("bounds dimension mismatch");

  LeastSquaresResult res;
  res.params = bounds.clamp(x0);
  res.residuals = f(res.params);
  if (!res.residuals.allFinite()) throw InvalidInput("residuals not finite at initial point");
  res.cost = 0.5 * res.residuals.squaredNorm();
  res.cost_history.push_back(res.cost);

  double lambda = options.initial_damping;

  for (res.iterations = 0; res.iterations < options.max_iterations; ++res.iterations) {
    res.jacobian = central_difference_jacobian(f, res.params, res.residuals, bounds,
                                               options.fd_relative_step);
    if (res.cost == 0.0 || max_gradient_cosine(res.jacobian, res.residuals) <= options.gradient_tol) {
      res.converged = true;
      res.stop_reason = "gradient tolerance";
      return res;
    }

    const Eigen::MatrixXd jtj = res.jacobian.transpose() * res.jacobian;
    const Eigen::VectorXd grad = res.jacobian.transpose() * res.residuals;
    Eigen::VectorXd scale = jtj.diagonal();
    const double floor = std::max(scale.maxCoeff(), 1.0) * 1e-12;
    scale = scale.cwiseMax(floor);

    bool accepted = false;
    while (!accepted) {
      Eigen::MatrixXd lhs = jtj;
      lhs.diagonal() += lambda * scale;
      const Eigen::VectorXd step = lhs.ldlt().solve(-grad);
      const Eigen::VectorXd trial = bounds.clamp(res.params + step);
      const Eigen::VectorXd r_trial = f(trial);
      const double c_trial = r_trial.allFinite() ? 0.5 * r_trial.squaredNorm()
                                                 : std::numeric_limits<double>::infinity();
      if (c_trial < res.cost) {
        const double dx = (trial - res.params).norm();
        const double reduction = (res.cost - c_trial) / res.cost;
        res.params = trial;
        res.residuals = r_trial;
        res.cost = c_trial;
        res.cost_history.push_back(c_trial);
        lambda = std::max(lambda / 3.0, 1e-15);
        accepted = true;
        if (dx <= options.step_tol * (res.params.norm() + options.step_tol) ||
            reduction <= options.relative_cost_tol) {
          res.converged = true;
          res.stop_reason = "step tolerance";
          ++res.iterations;
          res.jacobian = central_difference_jacobian(f, res.params, res.residuals, bounds,
                                                     options.fd_relative_step);
          return res;
        }
      } else {
        lambda *= 4.0;
        if (lambda > 1e16) {
          // No direction reduces the cost any further at working precision.
          res.converged = true;
          res.stop_reason = "no further reduction possible";
          return res;
        }
      }
    }
  }
  res.jacobian = central_difference_jacobian(f, res.params, res.residuals, bounds,
                                             options.fd_relative_step);
  res.converged = false;
  res.stop_reason = "iteration limit";
  return res;
}

Eigen::VectorXd parameter_uncertainties(const LeastSquaresResult& result) {
  const Eigen::Index n = result.params.size();
  const Eigen::Index m = result.residuals.size();
  const double inf = std::numeric_limits<double>::infinity();
  const double s2 = m > n ? result.residuals.squaredNorm() / static_cast<double>(m - n) : inf;

  const Eigen::MatrixXd jtj = result.jacobian.transpose() * result.jacobian;
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jtj);
  const Eigen::VectorXd& lam = eig.eigenvalues();
  const Eigen::MatrixXd& vec = eig.eigenvectors();
  const double lam_max = lam.cwiseAbs().maxCoeff();

  Eigen::VectorXd sigma(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double var = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      const double weight = vec(i, k) * vec(i, k);
      if (lam(k) <= 1e-13 * lam_max || lam_max == 0.0) {
        if (weight > 1e-12) var = inf;
      } else if (std::isfinite(var)) {
        var += weight / lam(k);
      }
    }
    sigma(i) = std::isinf(var) ? inf : std::sqrt(s2 * var);
  }
  return sigma;
}

}  // namespace nvdac
