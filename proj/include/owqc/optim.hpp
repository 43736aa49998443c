#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace owqc::optim {

struct Options {
  int max_iterations = 5000;
  /// Converged when the cost improvement drops below this.
  double cost_tolerance = 1e-10;
  double gradient_tolerance = 1e-9;
  double initial_step = 0.05;
  double line_search_tolerance = 0.1;
};

struct Result {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// f fills `grad` (always sized like x) and returns the cost.
using ValueAndGrad = std::function<double(const std::vector<double>& x, std::vector<double>& grad)>;

/// BFGS with line search (GSL vector_bfgs2), restarted when the line search
/// stalls away from the optimum.
Result minimize_bfgs(const ValueAndGrad& f, std::vector<double> x0, const Options& options = {});

struct LmOptions {
  int max_iterations = 400;
  double cost_tolerance = 1e-10;
  double initial_damping = 1e-3;
  double max_damping = 1e14;
  /// Scale-aware secondary stop on the gradient norm.
  double gradient_tolerance = 1e-9;
  /// Applied to x after each accepted step; used to pin cost-invariant
  /// gauge directions (e.g. the overall scale of a Cholesky factor).
  std::function<void(Eigen::VectorXd&)> project;
};

/// Fills the residual vector and, when J is non-null, the m x n Jacobian.
using ResidualsAndJacobian =
    std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& r, Eigen::MatrixXd* j)>;

/// Levenberg-Marquardt on sum-of-squares costs; the workhorse for the
/// tomography fits, which are least squares in the Cholesky factor.
Result minimize_lm(const ResidualsAndJacobian& f, std::vector<double> x0,
                   const LmOptions& options = {});

}  // namespace owqc::optim
