#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "owqc/channels.hpp"
#include "owqc/qstate.hpp"

namespace owqc::tomo {

/// One Pauli label per measured qubit: X = {|+>,|->}, Y = {|L>,|R>},
/// Z = {|H>,|V>}. Outcome bit 0 always denotes the +1 eigenstate.
using BasisSetting = std::string;

/// All 3^n settings in lexicographic X < Y < Z order (qubit 0 slowest).
std::vector<BasisSetting> all_settings(int n_qubits);

/// Outcome kets of one setting; column o is the projector ket of outcome o.
Mat setting_kets(const BasisSetting& setting);
std::vector<Mat> settings_kets(const std::vector<BasisSetting>& settings);

/// Raw tomography data: one row of outcome counts per basis setting.
struct MeasurementRecord {
  int n_qubits = 0;
  std::vector<BasisSetting> settings;
  Eigen::MatrixXd counts;  // settings x 2^n
  double shots_per_setting = 0.0;

  void validate() const;
  std::size_t n_outcomes() const { return std::size_t{1} << n_qubits; }
};

/// Counts drawn per outcome as independent Poisson variables with mean
/// shots * Born probability.
MeasurementRecord simulate_counts(const DensityMatrix& rho,
                                  const std::vector<BasisSetting>& settings, double shots,
                                  std::uint64_t seed);

/// Infinite-statistics limit: counts = shots * probability, no sampling.
MeasurementRecord exact_record(const DensityMatrix& rho,
                               const std::vector<BasisSetting>& settings, double shots);

/// Fresh Poisson draw around each recorded count.
MeasurementRecord resample_poisson(const MeasurementRecord& record, std::uint64_t seed);

struct DensityEstimate {
  DensityMatrix rho;
  double cost = 0.0;
  double min_eigenvalue = 0.0;
  bool psd = true;  // min eigenvalue >= -1e-9
  int iterations = 0;
  bool converged = true;
};

/// Direct inversion from empirical Pauli expectations. Hermitian with unit
/// trace, but possibly indefinite (flagged via `psd`).
DensityEstimate linear_reconstruct(const MeasurementRecord& record);

struct MleOptions {
  int max_iterations = 5000;
  double cost_tolerance = 1e-10;
  /// Default cost is Gaussian-weighted least squares with variance
  /// max(count, 1); switch to the Poisson log-likelihood here.
  bool poisson_likelihood = false;
  /// Warm start (projected to PSD); defaults to the linear inversion.
  /// Monte Carlo resamples pass the base estimate here.
  std::optional<DensityMatrix> initializer;
};

/// Maximum-likelihood state: minimizes the weighted least-squares cost over
/// rho = T T^dag / Tr(T T^dag), warm-started from the PSD-projected linear
/// inversion. Always PSD with unit trace.
DensityEstimate mle_state(const MeasurementRecord& record, const MleOptions& options = {});

/// Probe combinations "H","V","+","L" (one character per input qubit).
std::vector<std::string> probe_combinations(int arity);
DensityMatrix probe_input(const std::string& combination);

struct ProcessOptions {
  MleOptions mle;
  double tp_tolerance = 1e-6;
  double initial_penalty = 100.0;
  double penalty_growth = 10.0;
  int max_escalations = 14;
  /// Warm start; when set, the cold-start least squares (and its
  /// degeneracy probe) is skipped.
  std::optional<channels::ChiMatrix> initializer;
};

struct ProcessEstimate {
  channels::ChiMatrix chi;
  double cost = 0.0;
  double tp_residual = 0.0;
  double min_eigenvalue = 0.0;
  int iterations = 0;
  bool converged = true;
  /// Set when the probe data does not pin the channel (rank-deficient fit).
  bool degenerate = false;
};

/// Constrained least-squares chi fit: chi = T T^dag (Hermitian PSD) with a
/// trace-preservation penalty escalated until the residual is below
/// tp_tolerance. Probe inputs are the ideal encodings; outputs are the
/// reconstructed estimates, keyed by probe combination.
ProcessEstimate process_tomography(int arity,
                                   const std::map<std::string, DensityMatrix>& probe_outputs,
                                   const ProcessOptions& options = {});

struct MonteCarloStats {
  double mean = 0.0;
  double stddev = 0.0;
};

/// Resamples the record n times (Poisson around each count), re-runs the
/// estimator and returns sample statistics of the scalar functional.
MonteCarloStats monte_carlo_errors(const MeasurementRecord& record,
                                   const std::function<double(const MeasurementRecord&)>& estimator,
                                   int n_samples, std::uint64_t seed);

/// CSV with header "setting,outcome,count"; one row per (setting, outcome).
void write_counts_csv(std::ostream& out, const MeasurementRecord& record);
MeasurementRecord read_counts_csv(std::istream& in);

std::string outcome_bits(int n_qubits, std::size_t outcome);

/// Internals exposed for the gradient tests: both fits parameterize over the
/// packed lower-triangular Cholesky factor (d^2 reals for a d x d matrix).
namespace detail {

struct StateCostData {
  std::vector<Mat> kets;
  Eigen::MatrixXd counts;
  Eigen::MatrixXd weights;
  Eigen::VectorXd totals;
  bool poisson = false;
  Eigen::Index dim = 0;
};

StateCostData make_state_cost_data(const MeasurementRecord& record, bool poisson);
double state_cost_and_gradient(const StateCostData& data, const std::vector<double>& x,
                               std::vector<double>& grad);

/// Least-squares residuals sqrt(w)(N_s p - c) and their Jacobian in the
/// packed Cholesky parameters; the Levenberg-Marquardt route of mle_state.
void state_residuals_and_jacobian(const StateCostData& data, const Eigen::VectorXd& x,
                                  Eigen::VectorXd& r, Eigen::MatrixXd* jacobian);

struct ChiFitContext {
  int arity = 1;
  Eigen::Index basis_size = 0;
  Mat gram;
  Vec linear;
  double offset = 0.0;
  Mat tp_map;
  Vec tp_target;
  Mat stacked;
  Vec stacked_rhs;
};

ChiFitContext make_chi_fit_context(int arity,
                                   const std::map<std::string, DensityMatrix>& probe_outputs);
double chi_cost_and_gradient(const ChiFitContext& ctx, double penalty,
                             const std::vector<double>& x, std::vector<double>& grad);

}  // namespace detail

}  // namespace owqc::tomo
