#include "owqc/kernels.hpp"

#include <stdexcept>

namespace owqc::kernels {

Exec& execution_policy() {
  static Exec policy = Exec::Parallel;
  return policy;
}

namespace {

Eigen::VectorXd setting_probabilities(const Mat& a, const Mat& kets) {
  const Mat b = a * kets;
  Eigen::VectorXd p(kets.cols());
  for (Eigen::Index o = 0; o < kets.cols(); ++o) {
    p(o) = kets.col(o).dot(b.col(o)).real();
  }
  return p;
}

Mat setting_projector_sum(const Mat& kets, const Eigen::VectorXd& coef) {
  return kets * coef.asDiagonal() * kets.adjoint();
}

}  // namespace

Eigen::MatrixXd born_probabilities_serial(const Mat& a, const std::vector<Mat>& setting_kets) {
  const auto n_settings = static_cast<Eigen::Index>(setting_kets.size());
  if (n_settings == 0) return {};
  Eigen::MatrixXd p(n_settings, setting_kets[0].cols());
  for (Eigen::Index s = 0; s < n_settings; ++s) {
    p.row(s) = setting_probabilities(a, setting_kets[s]).transpose();
  }
  return p;
}

Eigen::MatrixXd born_probabilities_parallel(const Mat& a, const std::vector<Mat>& setting_kets) {
  const auto n_settings = static_cast<Eigen::Index>(setting_kets.size());
  if (n_settings == 0) return {};
  Eigen::MatrixXd p(n_settings, setting_kets[0].cols());
#pragma omp parallel for schedule(static)
  for (Eigen::Index s = 0; s < n_settings; ++s) {
    p.row(s) = setting_probabilities(a, setting_kets[s]).transpose();
  }
  return p;
}

Eigen::MatrixXd born_probabilities(const Mat& a, const std::vector<Mat>& setting_kets) {
  return execution_policy() == Exec::Parallel ? born_probabilities_parallel(a, setting_kets)
                                              : born_probabilities_serial(a, setting_kets);
}

Mat weighted_projector_sum_serial(const std::vector<Mat>& setting_kets,
                                  const Eigen::MatrixXd& coef) {
  if (setting_kets.empty()) throw std::invalid_argument("no settings");
  const Eigen::Index d = setting_kets[0].rows();
  Mat m = Mat::Zero(d, d);
  for (std::size_t s = 0; s < setting_kets.size(); ++s) {
    m += setting_projector_sum(setting_kets[s], coef.row(s).transpose());
  }
  return m;
}

Mat weighted_projector_sum_parallel(const std::vector<Mat>& setting_kets,
                                    const Eigen::MatrixXd& coef) {
  if (setting_kets.empty()) throw std::invalid_argument("no settings");
  const auto n_settings = static_cast<Eigen::Index>(setting_kets.size());
  const Eigen::Index d = setting_kets[0].rows();
  std::vector<Mat> partial(setting_kets.size());
#pragma omp parallel for schedule(static)
  for (Eigen::Index s = 0; s < n_settings; ++s) {
    partial[s] = setting_projector_sum(setting_kets[s], coef.row(s).transpose());
  }
  // fold in setting order so the result does not depend on the thread count
  Mat m = Mat::Zero(d, d);
  for (const Mat& part : partial) m += part;
  return m;
}

Mat weighted_projector_sum(const std::vector<Mat>& setting_kets, const Eigen::MatrixXd& coef) {
  return execution_policy() == Exec::Parallel ? weighted_projector_sum_parallel(setting_kets, coef)
                                              : weighted_projector_sum_serial(setting_kets, coef);
}

std::vector<double> map_indexed_serial(int count, const std::function<double(int)>& fn) {
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = fn(i);
  return out;
}

std::vector<double> map_indexed_parallel(int count, const std::function<double(int)>& fn) {
  std::vector<double> out(count);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < count; ++i) out[i] = fn(i);
  return out;
}

std::vector<double> map_indexed(int count, const std::function<double(int)>& fn) {
  return execution_policy() == Exec::Parallel ? map_indexed_parallel(count, fn)
                                              : map_indexed_serial(count, fn);
}

}  // namespace owqc::kernels
