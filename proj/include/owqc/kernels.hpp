#pragma once

#include <functional>
#include <vector>

#include "owqc/qstate.hpp"

namespace owqc::kernels {

/// Execution policy for the data-parallel kernels. Both variants produce
/// bit-identical results: parallel work units are independent and the final
/// folds always run in index order.
enum class Exec { Serial, Parallel };

Exec& execution_policy();

/// p(s, o) = Re <v_{s,o}| A |v_{s,o}> for Hermitian A; column o of
/// setting_kets[s] holds the outcome ket |v_{s,o}>.
Eigen::MatrixXd born_probabilities(const Mat& a, const std::vector<Mat>& setting_kets);
Eigen::MatrixXd born_probabilities_serial(const Mat& a, const std::vector<Mat>& setting_kets);
Eigen::MatrixXd born_probabilities_parallel(const Mat& a, const std::vector<Mat>& setting_kets);

/// M = sum_{s,o} coef(s, o) |v_{s,o}><v_{s,o}|, accumulated per setting and
/// folded in setting order.
Mat weighted_projector_sum(const std::vector<Mat>& setting_kets, const Eigen::MatrixXd& coef);
Mat weighted_projector_sum_serial(const std::vector<Mat>& setting_kets,
                                  const Eigen::MatrixXd& coef);
Mat weighted_projector_sum_parallel(const std::vector<Mat>& setting_kets,
                                    const Eigen::MatrixXd& coef);

/// results[i] = fn(i); fn must be pure given the index. Used for Monte Carlo
/// resampling, where each index derives its own RNG seed.
std::vector<double> map_indexed(int count, const std::function<double(int)>& fn);
std::vector<double> map_indexed_serial(int count, const std::function<double(int)>& fn);
std::vector<double> map_indexed_parallel(int count, const std::function<double(int)>& fn);

}  // namespace owqc::kernels
