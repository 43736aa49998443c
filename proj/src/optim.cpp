#include "owqc/optim.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include <gsl/gsl_blas.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

namespace owqc::optim {

namespace {

struct Adapter {
  const ValueAndGrad* f;
  std::vector<double> x_buf;
  std::vector<double> g_buf;

  double eval(const gsl_vector* v, gsl_vector* g) {
    std::memcpy(x_buf.data(), v->data, x_buf.size() * sizeof(double));
    const double val = (*f)(x_buf, g_buf);
    if (g != nullptr) {
      std::memcpy(g->data, g_buf.data(), g_buf.size() * sizeof(double));
    }
    return val;
  }
};

double adapter_f(const gsl_vector* v, void* params) {
  return static_cast<Adapter*>(params)->eval(v, nullptr);
}

void adapter_df(const gsl_vector* v, void* params, gsl_vector* g) {
  static_cast<Adapter*>(params)->eval(v, g);
}

void adapter_fdf(const gsl_vector* v, void* params, double* val, gsl_vector* g) {
  *val = static_cast<Adapter*>(params)->eval(v, g);
}

}  // namespace

Result minimize_bfgs(const ValueAndGrad& f, std::vector<double> x0, const Options& options) {
  [[maybe_unused]] static gsl_error_handler_t* old_handler = gsl_set_error_handler_off();
  const std::size_t n = x0.size();
  if (n == 0) throw std::invalid_argument("empty parameter vector");

  Adapter adapter{&f, std::vector<double>(n), std::vector<double>(n)};
  gsl_multimin_function_fdf func;
  func.n = n;
  func.f = adapter_f;
  func.df = adapter_df;
  func.fdf = adapter_fdf;
  func.params = &adapter;

  gsl_vector_view x_view = gsl_vector_view_array(x0.data(), n);
  gsl_multimin_fdfminimizer* mini =
      gsl_multimin_fdfminimizer_alloc(gsl_multimin_fdfminimizer_vector_bfgs2, n);
  if (mini == nullptr) throw std::runtime_error("minimizer allocation failed");

  Result result;
  result.x = x0;
  double step = options.initial_step;
  gsl_multimin_fdfminimizer_set(mini, &func, &x_view.vector, step, options.line_search_tolerance);
  double f_prev = mini->f;
  int restarts = 0;
  int stalled = 0;

  for (result.iterations = 0; result.iterations < options.max_iterations; ++result.iterations) {
    const int status = gsl_multimin_fdfminimizer_iterate(mini);
    if (status == GSL_ENOPROG) {
      // line search stalled: either done, or restart with a shorter step
      const double gnorm = gsl_blas_dnrm2(mini->gradient);
      if (gnorm < options.gradient_tolerance * std::max(1.0, std::abs(mini->f)) ||
          restarts >= 4) {
        result.converged = true;
        break;
      }
      ++restarts;
      step *= 0.1;
      std::memcpy(x0.data(), mini->x->data, n * sizeof(double));
      gsl_multimin_fdfminimizer_set(mini, &func, &x_view.vector, step,
                                    options.line_search_tolerance);
      f_prev = mini->f;
      continue;
    }
    if (status != GSL_SUCCESS) break;
    // oscillating sub-tolerance changes count as convergence too
    stalled = std::abs(f_prev - mini->f) < options.cost_tolerance ? stalled + 1 : 0;
    if (stalled >= 3) {
      result.converged = true;
      break;
    }
    f_prev = mini->f;
  }

  result.value = mini->f;
  result.x.assign(mini->x->data, mini->x->data + n);
  gsl_multimin_fdfminimizer_free(mini);
  return result;
}

Result minimize_lm(const ResidualsAndJacobian& f, std::vector<double> x0,
                   const LmOptions& options) {
  const Eigen::Index n = static_cast<Eigen::Index>(x0.size());
  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(x0.data(), n);
  if (options.project) options.project(x);
  Eigen::VectorXd r;
  Eigen::MatrixXd j;
  f(x, r, &j);
  double cost = r.squaredNorm();
  double damping = options.initial_damping;

  Result result;
  result.converged = false;
  Eigen::MatrixXd jtj = j.transpose() * j;
  Eigen::VectorXd g = j.transpose() * r;
  Eigen::VectorXd r_try;
  double growth = 2.0;
  int stalled = 0;
  for (result.iterations = 0; result.iterations < options.max_iterations; ++result.iterations) {
    if (g.cwiseAbs().maxCoeff() < options.gradient_tolerance * std::max(1.0, cost)) {
      result.converged = true;
      break;
    }
    // Marquardt scaling keeps the step sane across badly scaled parameters
    const Eigen::VectorXd scale = jtj.diagonal().cwiseMax(1e-12);
    Eigen::MatrixXd lhs = jtj;
    lhs.diagonal() += damping * scale;
    const Eigen::VectorXd delta = lhs.ldlt().solve(-g);
    f(x + delta, r_try, nullptr);
    const double cost_try = r_try.squaredNorm();
    // Nielsen gain ratio: actual vs predicted reduction
    const double predicted = delta.dot(damping * scale.cwiseProduct(delta) - g);
    const double rho = predicted > 0.0 ? (cost - cost_try) / predicted : -1.0;
    if (cost_try < cost && rho > 0.0) {
      x += delta;
      if (options.project) options.project(x);
      const double improvement = cost - cost_try;
      f(x, r, &j);
      cost = r.squaredNorm();
      jtj = j.transpose() * j;
      g = j.transpose() * r;
      damping *= std::max(1.0 / 3.0, 1.0 - std::pow(2.0 * rho - 1.0, 3));
      damping = std::max(damping, 1e-14);
      growth = 2.0;
      stalled = improvement < options.cost_tolerance ? stalled + 1 : 0;
      if (stalled >= 2) {
        result.converged = true;
        break;
      }
    } else {
      damping *= growth;
      growth *= 2.0;
      if (damping > options.max_damping) {
        result.converged = true;  // no descent direction left at any damping
        break;
      }
    }
  }

  result.value = cost;
  result.x.assign(x.data(), x.data() + n);
  return result;
}

}  // namespace owqc::optim
