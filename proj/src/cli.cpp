#include "owqc/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "owqc/json_io.hpp"
#include "owqc/kernels.hpp"
#include "owqc/pipeline.hpp"
#include "owqc/version.hpp"

namespace owqc::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_text(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path().empty() ? "." : path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

json tool_info() { return json{{"name", kToolName}, {"version", kToolVersion}}; }

json value_with_error(const pipeline::ValueWithError& v) {
  json j{{"value", v.value}};
  if (v.has_error) j["error"] = v.error;
  return j;
}

struct CommonFlags {
  std::string config_path;
  std::optional<std::string> preset;
  std::optional<double> shots;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  std::optional<std::string> out_dir;
  std::optional<std::string> gate;
  std::optional<std::string> force_outcomes;
  bool serial = false;
  bool poisson = false;
};

pipeline::ExperimentConfig resolve_config(const CommonFlags& flags) {
  pipeline::ExperimentConfig config;
  if (!flags.config_path.empty()) {
    std::ifstream in(flags.config_path);
    if (!in) throw std::invalid_argument("cannot read config file " + flags.config_path);
    json j;
    in >> j;
    config = pipeline::config_from_json(j);
  }
  if (flags.preset) config.preset = *flags.preset;
  if (flags.shots) config.shots = *flags.shots;
  if (flags.seed) config.seed = *flags.seed;
  if (flags.samples) config.samples = *flags.samples;
  if (flags.out_dir) config.out_dir = *flags.out_dir;
  if (flags.gate) config.gate = *flags.gate;
  if (flags.force_outcomes) config.force_outcomes = *flags.force_outcomes;
  if (flags.poisson) config.poisson_likelihood = true;
  config.validate();
  kernels::execution_policy() =
      flags.serial ? kernels::Exec::Serial : kernels::Exec::Parallel;
  return config;
}

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON config file; flags override its fields");
  cmd->add_option("--preset", flags.preset, "noise preset (ideal, paper-2013)");
  cmd->add_option("--shots", flags.shots, "expected counts per basis setting");
  cmd->add_option("--seed", flags.seed, "random seed");
  cmd->add_option("--samples", flags.samples, "Monte Carlo resamples for error bars (0 = off)");
  cmd->add_option("--out", flags.out_dir, "output directory");
  cmd->add_option("--gate", flags.gate, "gate for the gate/swap pipelines (H, T, CNOT)");
  cmd->add_option("--force-outcomes", flags.force_outcomes,
                  "comma-separated outcome bits per instruction, or \"sample\"");
  cmd->add_flag("--serial", flags.serial, "run the kernels single-threaded");
  cmd->add_flag("--poisson", flags.poisson, "Poisson log-likelihood instead of least squares");
}

json counts_file_entry(const fs::path& dir, const std::string& name,
                       const tomo::MeasurementRecord& record) {
  std::ostringstream csv;
  tomo::write_counts_csv(csv, record);
  write_text(dir / name, csv.str());
  return json{{"file", name},
              {"settings", record.settings.size()},
              {"outcomes", record.n_outcomes()}};
}

int cmd_build_state(const pipeline::ExperimentConfig& config) {
  const auto result = pipeline::run_build_state(config);
  const fs::path dir = config.out_dir;
  fs::create_directories(dir);

  json report;
  report["command"] = "build-state";
  report["tool"] = tool_info();
  report["config"] = pipeline::config_to_json(config);
  report["files"]["counts"] = counts_file_entry(dir, "counts.csv", result.record);

  json rho_mle(result.mle.rho);
  rho_mle["psd_min_eig"] = result.mle.min_eigenvalue;
  write_json(dir / "rho_mle.json", rho_mle);
  report["files"]["rho_mle"] = "rho_mle.json";
  json rho_lin(result.linear.rho);
  rho_lin["psd_min_eig"] = result.linear.min_eigenvalue;
  write_json(dir / "rho_linear.json", rho_lin);
  report["files"]["rho_linear"] = "rho_linear.json";

  report["results"]["state_fidelity"] = value_with_error(result.fidelity);
  report["results"]["state_fidelity"]["reference"] = pipeline::reference::kStateFidelity;
  report["results"]["entanglement_witness"] = {
      {"threshold", pipeline::reference::kWitnessThreshold},
      {"genuine_four_party", result.witness_passed}};
  report["results"]["fusion_acceptance"] = result.fusion_acceptance;
  report["diagnostics"]["mle"] = {{"cost", result.mle.cost},
                                  {"iterations", result.mle.iterations},
                                  {"converged", result.mle.converged},
                                  {"min_eigenvalue", result.mle.min_eigenvalue}};
  report["diagnostics"]["linear"] = {{"min_eigenvalue", result.linear.min_eigenvalue},
                                     {"psd", result.linear.psd}};
  write_json(dir / "report.json", report);

  std::cout << "state fidelity " << result.fidelity.value;
  if (result.fidelity.has_error) std::cout << " +/- " << result.fidelity.error;
  std::cout << (result.witness_passed ? "  (witness > 0.5: genuine four-party entanglement)"
                                      : "  (witness <= 0.5)")
            << "\n";
  return result.mle.converged ? kExitOk : kExitNonConvergence;
}

json gate_report(const pipeline::ExperimentConfig& config,
                 const pipeline::GateRunResult& result) {
  json report;
  report["command"] = "gate";
  report["tool"] = tool_info();
  report["config"] = pipeline::config_to_json(config);
  report["gate"] = mbqc::gate_name(result.gate);
  report["results"]["process_fidelity"] = value_with_error(result.process_fidelity);
  report["results"]["process_fidelity"]["reference"] = result.reference;
  report["results"]["process_fidelity"]["band"] = {
      {"low", result.reference - pipeline::reference::kGateBandHalfWidth},
      {"high", result.reference + pipeline::reference::kGateBandHalfWidth}};
  report["results"]["process_fidelity"]["within_band"] = result.within_band;
  report["results"]["process_fidelity"]["side"] = result.band_side;
  report["results"]["epsilon_bound"] = {
      {"value", result.epsilon_bound},
      {"fault_tolerance_thresholds",
       {pipeline::reference::kFaultToleranceLow, pipeline::reference::kFaultToleranceHigh}}};
  report["diagnostics"] = {{"tp_residual", result.estimate.tp_residual},
                           {"chi_min_eigenvalue", result.estimate.min_eigenvalue},
                           {"cost", result.estimate.cost},
                           {"iterations", result.estimate.iterations},
                           {"converged", result.estimate.converged},
                           {"degenerate", result.estimate.degenerate}};
  return report;
}

int cmd_gate(const pipeline::ExperimentConfig& config) {
  const mbqc::Gate gate = mbqc::gate_from_name(config.gate);
  const auto result = pipeline::run_gate(config, gate);
  const fs::path dir = fs::path(config.out_dir) / ("gate_" + mbqc::gate_name(gate));
  fs::create_directories(dir);

  json report = gate_report(config, result);
  write_json(dir / "chi.json", json(result.estimate.chi));
  report["files"]["chi"] = "chi.json";
  for (const auto& [combo, record] : result.probe_records) {
    report["files"]["counts_" + combo] = counts_file_entry(dir, "counts_" + combo + ".csv", record);
  }
  write_json(dir / "report.json", report);

  std::cout << "gate " << mbqc::gate_name(gate) << ": F = " << result.process_fidelity.value;
  if (result.process_fidelity.has_error) std::cout << " +/- " << result.process_fidelity.error;
  std::cout << ", eps* = " << result.epsilon_bound << " (" << result.band_side
            << " the reference " << result.reference << ")\n";
  return result.estimate.converged ? kExitOk : kExitNonConvergence;
}

void write_chi_bars_csv(const fs::path& path, const channels::ChiMatrix& chi) {
  std::ostringstream out;
  out << "row,col,real,imag\n";
  char buf[80];
  for (Eigen::Index m = 0; m < chi.elements.rows(); ++m) {
    for (Eigen::Index n = 0; n < chi.elements.cols(); ++n) {
      std::snprintf(buf, sizeof buf, "%.17g,%.17g", chi.elements(m, n).real(),
                    chi.elements(m, n).imag());
      out << channels::pauli_label(chi.n_qubits, m) << ','
          << channels::pauli_label(chi.n_qubits, n) << ',' << buf << '\n';
    }
  }
  write_text(path, out.str());
}

int cmd_swap(const pipeline::ExperimentConfig& config, const std::string& chi_path) {
  channels::ChiMatrix chi_cnot;
  json report;
  bool pipeline_converged = true;
  if (!chi_path.empty()) {
    std::ifstream in(chi_path);
    if (!in) throw std::invalid_argument("cannot read chi file " + chi_path);
    json j;
    in >> j;
    chi_cnot = j.get<channels::ChiMatrix>();
    report["chi_source"] = chi_path;
  } else {
    const auto gate_result = pipeline::run_gate(config, mbqc::Gate::CNOT);
    chi_cnot = gate_result.estimate.chi;
    pipeline_converged = gate_result.estimate.converged;
    report["chi_source"] = "gate pipeline";
    report["cnot"] = gate_report(config, gate_result)["results"];
  }
  if (chi_cnot.n_qubits != 2) throw std::invalid_argument("swap needs a two-qubit chi");

  const auto result = pipeline::run_swap_from_chi(chi_cnot);
  const fs::path dir = fs::path(config.out_dir) / "swap";
  fs::create_directories(dir);

  report["command"] = "swap";
  report["tool"] = tool_info();
  report["config"] = pipeline::config_to_json(config);
  report["results"]["swap_fidelity"] = {
      {"value", result.sim.fidelity_vs_ideal},
      {"reference", pipeline::reference::kSwap},
      {"band", {{"low", pipeline::reference::kSwapBandLow},
                {"high", pipeline::reference::kSwapBandHigh}}},
      {"within_band", result.within_reference_band}};
  report["results"]["epsilon_bound"] = {
      {"value", result.sim.epsilon_bound},
      {"fault_tolerance_thresholds",
       {pipeline::reference::kFaultToleranceLow, pipeline::reference::kFaultToleranceHigh}}};
  report["diagnostics"]["stage_tp_residuals"] = result.sim.stage_tp_residuals;
  report["diagnostics"]["composed_tp_residual"] = result.sim.composed_tp_residual;

  write_json(dir / "chi_swap.json", json(result.sim.chi));
  report["files"]["chi_swap"] = "chi_swap.json";
  write_chi_bars_csv(dir / "chi_bars.csv", result.sim.chi);
  report["files"]["chi_bars"] = "chi_bars.csv";
  write_json(dir / "report.json", report);

  std::cout << "swap: F = " << result.sim.fidelity_vs_ideal
            << ", eps* = " << result.sim.epsilon_bound << ", reference band ["
            << pipeline::reference::kSwapBandLow << ", " << pipeline::reference::kSwapBandHigh
            << "] " << (result.within_reference_band ? "hit" : "missed") << "\n";
  return pipeline_converged ? kExitOk : kExitNonConvergence;
}

int cmd_report(const std::string& out_dir) {
  if (!fs::is_directory(out_dir)) {
    std::cerr << "no such output directory: " << out_dir << "\n";
    return kExitConfigError;
  }
  int status = kExitOk;
  bool found = false;
  for (const auto& entry : fs::recursive_directory_iterator(out_dir)) {
    if (entry.path().filename() != "report.json") continue;
    found = true;
    std::ifstream in(entry.path());
    json report;
    in >> report;
    std::cout << entry.path().string() << ": " << report.value("command", "?");
    if (report.contains("results")) {
      for (const auto& [key, value] : report["results"].items()) {
        if (value.is_object() && value.contains("value")) {
          std::cout << "  " << key << "=" << value["value"].dump();
        }
      }
    }
    std::cout << "\n";
    // every referenced matrix file must re-parse
    const fs::path dir = entry.path().parent_path();
    if (report.contains("files")) {
      for (const auto& [key, value] : report["files"].items()) {
        const std::string name = value.is_object() ? value.value("file", "") : value.get<std::string>();
        if (name.empty()) continue;
        const fs::path file = dir / name;
        if (!fs::exists(file)) {
          std::cout << "  missing: " << file.string() << "\n";
          status = kExitConfigError;
          continue;
        }
        if (file.extension() == ".json") {
          std::ifstream fin(file);
          json j;
          fin >> j;
          if (j.contains("basis")) {
            (void)j.get<channels::ChiMatrix>();
          } else if (j.contains("data")) {
            (void)j.get<DensityMatrix>();
          }
        }
        std::cout << "  ok: " << name << "\n";
      }
    }
  }
  if (!found) {
    std::cerr << "no report.json under " << out_dir << "\n";
    return kExitConfigError;
  }
  return status;
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"one-way quantum computing simulator and reconstruction toolkit"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string chi_path;

  CLI::App* build = app.add_subcommand("build-state",
                                       "simulate the fused star resource and reconstruct it");
  add_common_flags(build, flags);
  CLI::App* gate = app.add_subcommand("gate", "run a gate pipeline and reconstruct its channel");
  add_common_flags(gate, flags);
  CLI::App* swap = app.add_subcommand("swap", "compose three CNOT channels into a swap");
  add_common_flags(swap, flags);
  swap->add_option("--chi", chi_path, "two-qubit chi JSON (skips the gate pipeline)");
  CLI::App* rep = app.add_subcommand("report", "summarize and validate emitted files");
  add_common_flags(rep, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (rep->parsed()) {
      return cmd_report(flags.out_dir.value_or("out"));
    }
    const pipeline::ExperimentConfig config = resolve_config(flags);
    if (build->parsed()) return cmd_build_state(config);
    if (gate->parsed()) return cmd_gate(config);
    if (swap->parsed()) return cmd_swap(config, chi_path);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNonConvergence;
  }
  return kExitConfigError;
}

}  // namespace owqc::cli
