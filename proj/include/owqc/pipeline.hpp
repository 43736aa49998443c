#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "owqc/channels.hpp"
#include "owqc/cluster.hpp"
#include "owqc/mbqc.hpp"
#include "owqc/tomography.hpp"

namespace owqc::pipeline {

/// Reference values the reports compare against (the measured star-cluster
/// experiment behind the "paper-2013" preset).
namespace reference {
inline constexpr double kStateFidelity = 0.66;
inline constexpr double kHadamard = 0.67;
inline constexpr double kTGate = 0.76;
inline constexpr double kCnot = 0.64;
inline constexpr double kSwap = 0.30;
inline constexpr double kGateBandHalfWidth = 0.12;
inline constexpr double kSwapBandLow = 0.25;
inline constexpr double kSwapBandHigh = 0.35;
inline constexpr double kWitnessThreshold = 0.5;
inline constexpr double kFaultToleranceLow = 1e-5;
inline constexpr double kFaultToleranceHigh = 1e-2;

double gate_reference(mbqc::Gate gate);
}  // namespace reference

struct ExperimentConfig {
  std::string preset = "paper-2013";
  std::optional<cluster::NoiseModel> noise;  // explicit model overrides the preset
  double shots = 600.0;
  std::uint64_t seed = 1;
  int samples = 100;
  std::string out_dir = "out";
  std::string gate = "CNOT";
  /// "" = postselect all outcomes 0; "sample" = Born sampling;
  /// otherwise comma-separated bits per pattern instruction.
  std::string force_outcomes;
  bool poisson_likelihood = false;

  void validate() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& config);

cluster::NoiseModel resolve_noise(const ExperimentConfig& config);

struct ValueWithError {
  double value = 0.0;
  double error = 0.0;
  bool has_error = false;
};

struct BuildStateResult {
  DensityMatrix truth;
  double fusion_acceptance = 0.0;
  tomo::MeasurementRecord record;
  tomo::DensityEstimate linear;
  tomo::DensityEstimate mle;
  /// Fidelity of the MLE state against the ideal star state, with the
  /// Monte Carlo error bar when samples >= 2.
  ValueWithError fidelity;
  bool witness_passed = false;
};

BuildStateResult run_build_state(const ExperimentConfig& config);

struct GateRunResult {
  mbqc::Gate gate = mbqc::Gate::H;
  tomo::ProcessEstimate estimate;
  ValueWithError process_fidelity;
  double epsilon_bound = 0.0;
  double reference = 0.0;
  bool within_band = false;
  /// "above" or "below" the reference value.
  std::string band_side;
  std::map<std::string, tomo::MeasurementRecord> probe_records;
  std::map<std::string, DensityMatrix> probe_estimates;
};

GateRunResult run_gate(const ExperimentConfig& config, mbqc::Gate gate);

struct SwapRunResult {
  channels::SwapSimulation sim;
  bool within_reference_band = false;
};

SwapRunResult run_swap_from_chi(const channels::ChiMatrix& chi_cnot);

}  // namespace owqc::pipeline
