#include "owqc/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "owqc/json_io.hpp"
#include "owqc/kernels.hpp"
#include "owqc/rng.hpp"

namespace owqc::pipeline {

namespace reference {
double gate_reference(mbqc::Gate gate) {
  switch (gate) {
    case mbqc::Gate::H: return kHadamard;
    case mbqc::Gate::T: return kTGate;
    case mbqc::Gate::CNOT: return kCnot;
  }
  throw std::logic_error("bad gate");
}
}  // namespace reference

void ExperimentConfig::validate() const {
  if (shots <= 0.0) throw std::invalid_argument("shots must be positive");
  if (samples < 0) throw std::invalid_argument("samples must be nonnegative");
  if (samples == 1) throw std::invalid_argument("error bars need at least two samples");
  if (!noise) cluster::preset(preset);  // throws on unknown preset
  if (!force_outcomes.empty() && force_outcomes != "sample") {
    std::stringstream ss(force_outcomes);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok != "0" && tok != "1") {
        throw std::invalid_argument("force-outcomes must be bits or \"sample\"");
      }
    }
  }
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  c.preset = j.value("preset", c.preset);
  if (j.contains("noise")) c.noise = j.at("noise").get<cluster::NoiseModel>();
  c.shots = j.value("shots", c.shots);
  c.seed = j.value("seed", c.seed);
  c.samples = j.value("samples", c.samples);
  c.out_dir = j.value("out", c.out_dir);
  c.gate = j.value("gate", c.gate);
  c.force_outcomes = j.value("force_outcomes", c.force_outcomes);
  c.poisson_likelihood = j.value("poisson_likelihood", c.poisson_likelihood);
  c.validate();
  return c;
}

nlohmann::json config_to_json(const ExperimentConfig& config) {
  nlohmann::json j{{"preset", config.preset},
                   {"shots", config.shots},
                   {"seed", config.seed},
                   {"samples", config.samples},
                   {"out", config.out_dir},
                   {"gate", config.gate},
                   {"force_outcomes", config.force_outcomes},
                   {"poisson_likelihood", config.poisson_likelihood}};
  if (config.noise) j["noise"] = *config.noise;
  return j;
}

cluster::NoiseModel resolve_noise(const ExperimentConfig& config) {
  return config.noise ? *config.noise : cluster::preset(config.preset);
}

BuildStateResult run_build_state(const ExperimentConfig& config) {
  config.validate();
  const cluster::NoiseModel noise = resolve_noise(config);
  const cluster::PostselectedState star = cluster::make_star(noise);
  const auto settings = tomo::all_settings(4);

  BuildStateResult out;
  out.truth = star.state;
  out.fusion_acceptance = star.acceptance_probability;
  out.record = tomo::simulate_counts(star.state, settings, config.shots,
                                     split_seed(config.seed, 0));
  out.linear = tomo::linear_reconstruct(out.record);

  tomo::MleOptions mle_opt;
  mle_opt.poisson_likelihood = config.poisson_likelihood;
  out.mle = tomo::mle_state(out.record, mle_opt);

  const PureState target = cluster::star_state_ideal();
  out.fidelity.value = state_fidelity(target, out.mle.rho);
  if (config.samples >= 2) {
    tomo::MleOptions mc_opt = mle_opt;
    mc_opt.initializer = out.mle.rho;  // resample optima sit near the base fit
    const auto stats = tomo::monte_carlo_errors(
        out.record,
        [&](const tomo::MeasurementRecord& rec) {
          return state_fidelity(target, tomo::mle_state(rec, mc_opt).rho);
        },
        config.samples, split_seed(config.seed, 1));
    out.fidelity.error = stats.stddev;
    out.fidelity.has_error = true;
  }
  out.witness_passed = out.fidelity.value > reference::kWitnessThreshold;
  return out;
}

namespace {

std::vector<mbqc::Probe> probes_from_combo(const std::string& combo) {
  std::vector<mbqc::Probe> probes;
  for (char c : combo) probes.push_back(mbqc::probe_from_name(std::string(1, c)));
  return probes;
}

mbqc::RunOptions run_options_for(const ExperimentConfig& config,
                                 const mbqc::MeasurementPattern& pattern, std::uint64_t seed) {
  mbqc::RunOptions opt;
  if (config.force_outcomes.empty()) {
    opt.forced_outcomes.assign(pattern.instructions.size(), 0);
  } else if (config.force_outcomes == "sample") {
    opt.rng_seed = seed;
  } else {
    std::stringstream ss(config.force_outcomes);
    std::string tok;
    while (std::getline(ss, tok, ',')) opt.forced_outcomes.push_back(tok == "1" ? 1 : 0);
    if (opt.forced_outcomes.size() != pattern.instructions.size()) {
      throw std::invalid_argument("force-outcomes length does not match the pattern");
    }
  }
  return opt;
}

}  // namespace

GateRunResult run_gate(const ExperimentConfig& config, mbqc::Gate gate) {
  config.validate();
  const cluster::NoiseModel noise = resolve_noise(config);
  const DensityMatrix resource = cluster::make_star(noise).state;
  const mbqc::MeasurementPattern pattern = mbqc::pattern_for(gate);
  const int arity = static_cast<int>(pattern.input_qubits.size());
  const auto combos = tomo::probe_combinations(arity);
  const auto settings = tomo::all_settings(arity);

  tomo::MleOptions mle_opt;
  mle_opt.poisson_likelihood = config.poisson_likelihood;

  GateRunResult out;
  out.gate = gate;
  for (std::size_t j = 0; j < combos.size(); ++j) {
    const auto probes = probes_from_combo(combos[j]);
    const auto opt = run_options_for(config, pattern, split_seed(config.seed, 100 + j));
    const mbqc::RunResult run = mbqc::run_pattern(resource, pattern, probes, opt);
    const auto record = tomo::simulate_counts(run.output, settings, config.shots,
                                              split_seed(config.seed, 200 + j));
    out.probe_records.emplace(combos[j], record);
    out.probe_estimates.emplace(combos[j], tomo::mle_state(record, mle_opt).rho);
  }

  tomo::ProcessOptions proc_opt;
  proc_opt.mle = mle_opt;
  out.estimate = tomo::process_tomography(arity, out.probe_estimates, proc_opt);

  const channels::ChiMatrix ideal = channels::chi_of_unitary(mbqc::circuit_oracle_unitary(gate));
  out.process_fidelity.value = channels::process_fidelity(ideal, out.estimate.chi);

  if (config.samples >= 2) {
    const int n_probes = static_cast<int>(combos.size());
    tomo::ProcessOptions mc_proc_opt = proc_opt;
    mc_proc_opt.initializer = out.estimate.chi;
    const std::vector<double> values =
        kernels::map_indexed(config.samples, [&](int i) {
          std::map<std::string, DensityMatrix> estimates;
          for (int j = 0; j < n_probes; ++j) {
            tomo::MleOptions mc_opt = mle_opt;
            mc_opt.initializer = out.probe_estimates.at(combos[j]);
            const auto resampled = tomo::resample_poisson(
                out.probe_records.at(combos[j]),
                split_seed(config.seed, 10000 + static_cast<std::uint64_t>(i) * 64 + j));
            estimates.emplace(combos[j], tomo::mle_state(resampled, mc_opt).rho);
          }
          const auto fit = tomo::process_tomography(arity, estimates, mc_proc_opt);
          return channels::process_fidelity(ideal, fit.chi);
        });
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= values.size();
    double var = 0.0;
    for (double v : values) var += (v - mean) * (v - mean);
    out.process_fidelity.error = std::sqrt(var / (values.size() - 1));
    out.process_fidelity.has_error = true;
  }

  out.epsilon_bound = channels::error_bound(std::clamp(out.process_fidelity.value, 0.0, 1.0));
  out.reference = reference::gate_reference(gate);
  out.within_band =
      std::abs(out.process_fidelity.value - out.reference) <= reference::kGateBandHalfWidth;
  out.band_side = out.process_fidelity.value >= out.reference ? "above" : "below";
  return out;
}

SwapRunResult run_swap_from_chi(const channels::ChiMatrix& chi_cnot) {
  SwapRunResult out;
  out.sim = channels::swap_simulation(chi_cnot);
  out.within_reference_band = out.sim.fidelity_vs_ideal >= reference::kSwapBandLow &&
                              out.sim.fidelity_vs_ideal <= reference::kSwapBandHigh;
  return out;
}

}  // namespace owqc::pipeline
