#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "owqc/cluster.hpp"
#include "owqc/qstate.hpp"

namespace owqc::mbqc {

enum class Gate { H, T, CNOT };

std::string gate_name(Gate g);
Gate gate_from_name(const std::string& name);

/// Measurement basis: either the equatorial B(alpha) basis with
/// |alpha_+/-> = (|H> +/- e^{i alpha}|V>)/sqrt(2), or a sigma_z removal.
struct Basis {
  enum class Kind { BAlpha, ZRemoval };
  Kind kind = Kind::BAlpha;
  double alpha = 0.0;

  static Basis b(double alpha) { return Basis{Kind::BAlpha, alpha}; }
  static Basis z() { return Basis{Kind::ZRemoval, 0.0}; }

  /// Basis ket for outcome s (0 maps to |alpha_+>, or |H> for Z).
  Vec ket(int outcome) const;
};

/// One measurement step. When the XOR of the outcomes of the qubits listed
/// in adapt_on is 1, the basis angle flips alpha -> alpha + pi (outcomes are
/// then labeled in the flipped basis).
struct MeasurementInstruction {
  int qubit = 0;
  Basis basis;
  std::vector<int> adapt_on;
};

/// Pauli correction applied to one output qubit: sigma_x to the XOR of the
/// outcomes of the qubits in x_from, sigma_z likewise for z_from.
struct ByproductRule {
  int output_qubit = 0;
  std::vector<int> x_from;
  std::vector<int> z_from;
};

struct MeasurementPattern {
  Gate gate = Gate::H;
  cluster::GraphSpec resource;
  std::vector<int> input_qubits;
  std::vector<int> output_qubits;
  std::vector<MeasurementInstruction> instructions;
  std::vector<ByproductRule> byproducts;

  void validate() const;
};

struct OutcomeRecord {
  std::vector<int> qubits;            // measured qubit per instruction
  std::vector<int> outcomes;          // s_i in {0,1}
  std::vector<double> probabilities;  // conditional probability of each s_i
  double branch_probability = 1.0;
};

/// Probe input states and their optical encoding recipes.
enum class Probe { H, V, Plus, L };

std::string probe_name(Probe p);
Probe probe_from_name(const std::string& name);
Vec probe_ket(Probe p);

struct MeasureResult {
  int outcome = 0;
  double probability = 1.0;
};

/// Projects `qubit` onto the basis ket of the sampled (or forced) outcome,
/// renormalizes and removes the qubit from the register. Throws when an
/// outcome with probability < 1e-12 is forced.
MeasureResult measure(PureState& state, int qubit, const Basis& basis,
                      std::optional<int> forced, std::mt19937_64* rng);
MeasureResult measure(DensityMatrix& state, int qubit, const Basis& basis,
                      std::optional<int> forced, std::mt19937_64* rng);

/// Applies the probe encoding to `qubit`: |+> is a no-op, |L> a quarter
/// waveplate, |H>/|V> a polarizer (projection + renormalization, acceptance
/// probability reported).
cluster::PostselectedState encode_probe(const DensityMatrix& state, int qubit, Probe probe);
cluster::PostselectedPure encode_probe(const PureState& state, int qubit, Probe probe);

/// The star-cluster measurement patterns for H, T and CNOT, including the
/// sigma_z removals, the adaptive rule of the T gate and the full byproduct
/// bookkeeping for every outcome branch.
MeasurementPattern pattern_for(Gate gate);

struct RunOptions {
  /// Forced outcome per instruction (enumerating branches); empty = sample.
  std::vector<int> forced_outcomes;
  std::uint64_t rng_seed = 0;
  /// Test hook: disable the adaptive basis flips while keeping corrections.
  bool apply_adaptation = true;
  /// Apply the byproduct corrections to the output (on by default).
  bool apply_corrections = true;
};

struct RunResult {
  DensityMatrix output;
  OutcomeRecord record;
  double acceptance_probability = 1.0;  // from probe encoding
};

RunResult run_pattern(const DensityMatrix& resource, const MeasurementPattern& pattern,
                      const std::vector<Probe>& probes, const RunOptions& options = {});

/// All outcome branches with probability above `min_probability`.
std::vector<RunResult> enumerate_branches(const DensityMatrix& resource,
                                          const MeasurementPattern& pattern,
                                          const std::vector<Probe>& probes,
                                          double min_probability = 1e-12);

/// Circuit-model ground truth: the plain gate matrix applied to the input.
Mat circuit_oracle_unitary(Gate gate);
PureState circuit_oracle(Gate gate, const PureState& input);

/// Ideal output for a probe combination, used to validate pattern branches.
PureState oracle_output(Gate gate, const std::vector<Probe>& probes);

}  // namespace owqc::mbqc
