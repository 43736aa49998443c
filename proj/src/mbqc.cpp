#include "owqc/mbqc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace owqc::mbqc {

namespace {
constexpr double kForcedMin = 1e-12;
}

std::string gate_name(Gate g) {
  switch (g) {
    case Gate::H: return "H";
    case Gate::T: return "T";
    case Gate::CNOT: return "CNOT";
  }
  throw std::logic_error("bad gate");
}

Gate gate_from_name(const std::string& name) {
  if (name == "H") return Gate::H;
  if (name == "T") return Gate::T;
  if (name == "CNOT") return Gate::CNOT;
  throw std::invalid_argument("unknown gate: " + name);
}

Vec Basis::ket(int outcome) const {
  Vec v(2);
  if (kind == Kind::ZRemoval) {
    v << (outcome == 0 ? 1.0 : 0.0), (outcome == 0 ? 0.0 : 1.0);
  } else {
    const double sign = outcome == 0 ? 1.0 : -1.0;
    v << M_SQRT1_2, sign * std::polar(M_SQRT1_2, alpha);
  }
  return v;
}

void MeasurementPattern::validate() const {
  resource.validate();
  std::vector<int> measured;
  for (const auto& ins : instructions) {
    if (ins.qubit < 0 || ins.qubit >= resource.n_vertices) {
      throw std::invalid_argument("instruction qubit out of range");
    }
    for (int dep : ins.adapt_on) {
      if (std::find(measured.begin(), measured.end(), dep) == measured.end()) {
        throw std::invalid_argument("adaptive rule depends on a later instruction");
      }
    }
    measured.push_back(ins.qubit);
  }
  for (int q : output_qubits) {
    if (std::find(measured.begin(), measured.end(), q) != measured.end()) {
      throw std::invalid_argument("output qubit is measured");
    }
  }
}

std::string probe_name(Probe p) {
  switch (p) {
    case Probe::H: return "H";
    case Probe::V: return "V";
    case Probe::Plus: return "+";
    case Probe::L: return "L";
  }
  throw std::logic_error("bad probe");
}

Probe probe_from_name(const std::string& name) {
  if (name == "H") return Probe::H;
  if (name == "V") return Probe::V;
  if (name == "+") return Probe::Plus;
  if (name == "L") return Probe::L;
  throw std::invalid_argument("unknown probe: " + name);
}

Vec probe_ket(Probe p) {
  switch (p) {
    case Probe::H: return kets::h();
    case Probe::V: return kets::v();
    case Probe::Plus: return kets::plus();
    case Probe::L: return kets::l();
  }
  throw std::logic_error("bad probe");
}

namespace {

int sample_or_force(double p0, std::optional<int> forced, std::mt19937_64* rng) {
  if (forced) {
    const double p = *forced == 0 ? p0 : 1.0 - p0;
    if (p < kForcedMin) throw std::runtime_error("forced outcome has vanishing probability");
    return *forced;
  }
  if (rng == nullptr) throw std::invalid_argument("measure needs an rng when not forced");
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  return dist(*rng) < p0 ? 0 : 1;
}

// <e| on `qubit`, mapping dim 2^n -> 2^(n-1).
Vec project_out(const Vec& amp, int qubit, int n, const Vec& e) {
  const std::size_t half = amp.size() / 2;
  Vec out(half);
  for (std::size_t r = 0; r < half; ++r) {
    out(r) = std::conj(e(0)) * amp(insert_bit(r, qubit, 0, n)) +
             std::conj(e(1)) * amp(insert_bit(r, qubit, 1, n));
  }
  return out;
}

Mat project_out(const Mat& rho, int qubit, int n, const Vec& e) {
  const std::size_t half = rho.rows() / 2;
  Mat out(half, half);
  for (std::size_t r = 0; r < half; ++r) {
    const std::size_t r0 = insert_bit(r, qubit, 0, n);
    const std::size_t r1 = insert_bit(r, qubit, 1, n);
    for (std::size_t c = 0; c < half; ++c) {
      const std::size_t c0 = insert_bit(c, qubit, 0, n);
      const std::size_t c1 = insert_bit(c, qubit, 1, n);
      out(r, c) = std::conj(e(0)) * e(0) * rho(r0, c0) + std::conj(e(0)) * e(1) * rho(r0, c1) +
                  std::conj(e(1)) * e(0) * rho(r1, c0) + std::conj(e(1)) * e(1) * rho(r1, c1);
    }
  }
  return out;
}

}  // namespace

MeasureResult measure(PureState& state, int qubit, const Basis& basis,
                      std::optional<int> forced, std::mt19937_64* rng) {
  if (qubit < 0 || qubit >= state.n_qubits) throw std::invalid_argument("qubit out of range");
  const Vec amp0 = project_out(state.amplitudes, qubit, state.n_qubits, basis.ket(0));
  const double p0 = amp0.squaredNorm();
  const int outcome = sample_or_force(p0, forced, rng);
  Vec amp = outcome == 0
                ? amp0
                : project_out(state.amplitudes, qubit, state.n_qubits, basis.ket(1));
  const double p = outcome == 0 ? p0 : 1.0 - p0;
  state = PureState{state.n_qubits - 1, amp / std::sqrt(std::max(p, kForcedMin))};
  return MeasureResult{outcome, p};
}

MeasureResult measure(DensityMatrix& state, int qubit, const Basis& basis,
                      std::optional<int> forced, std::mt19937_64* rng) {
  if (qubit < 0 || qubit >= state.n_qubits) throw std::invalid_argument("qubit out of range");
  const Mat m0 = project_out(state.elements, qubit, state.n_qubits, basis.ket(0));
  const double p0 = m0.trace().real();
  const int outcome = sample_or_force(p0, forced, rng);
  Mat m = outcome == 0 ? m0 : project_out(state.elements, qubit, state.n_qubits, basis.ket(1));
  const double p = outcome == 0 ? p0 : 1.0 - p0;
  state = DensityMatrix{state.n_qubits - 1, m / std::max(p, kForcedMin)};
  return MeasureResult{outcome, p};
}

namespace {

template <typename StateT, typename ResultT>
ResultT encode_probe_impl(const StateT& state, int qubit, Probe probe) {
  switch (probe) {
    case Probe::Plus:
      return ResultT{state, 1.0};
    case Probe::L:
      return ResultT{apply_gate(state, gates::qwp(), {qubit}), 1.0};
    case Probe::H:
    case Probe::V: {
      // polarizer: rank-1 projector on the qubit, then renormalize
      const int target = probe == Probe::H ? 0 : 1;
      StateT out = state;
      double p = 0.0;
      if constexpr (std::is_same_v<StateT, PureState>) {
        const std::size_t dim = out.dim();
        for (std::size_t i = 0; i < dim; ++i) {
          if (bit_of(i, qubit, out.n_qubits) != target) out.amplitudes(i) = 0.0;
        }
        p = out.amplitudes.squaredNorm();
        if (p < kForcedMin) throw std::runtime_error("polarizer annihilates the state");
        out.amplitudes /= std::sqrt(p);
      } else {
        const std::size_t dim = out.dim();
        for (std::size_t i = 0; i < dim; ++i) {
          for (std::size_t j = 0; j < dim; ++j) {
            if (bit_of(i, qubit, out.n_qubits) != target ||
                bit_of(j, qubit, out.n_qubits) != target) {
              out.elements(i, j) = 0.0;
            }
          }
        }
        p = out.elements.trace().real();
        if (p < kForcedMin) throw std::runtime_error("polarizer annihilates the state");
        out.elements /= p;
      }
      return ResultT{std::move(out), p};
    }
  }
  throw std::logic_error("bad probe");
}

}  // namespace

cluster::PostselectedState encode_probe(const DensityMatrix& state, int qubit, Probe probe) {
  return encode_probe_impl<DensityMatrix, cluster::PostselectedState>(state, qubit, probe);
}

cluster::PostselectedPure encode_probe(const PureState& state, int qubit, Probe probe) {
  return encode_probe_impl<PureState, cluster::PostselectedPure>(state, qubit, probe);
}

MeasurementPattern pattern_for(Gate gate) {
  MeasurementPattern p;
  p.gate = gate;
  p.resource = cluster::star_graph();
  switch (gate) {
    case Gate::H:
      // Input on qubit 1, output on qubit 2; qubits 0 and 3 removed.
      // Raw output carries sigma_x^{s1} sigma_z^{s0 ^ s3}.
      p.input_qubits = {1};
      p.output_qubits = {2};
      p.instructions = {{0, Basis::z(), {}}, {3, Basis::z(), {}}, {1, Basis::b(0.0), {}}};
      p.byproducts = {{2, {1}, {0, 3}}};
      break;
    case Gate::T:
      // Linear chain 1-2-3 after removing qubit 0. The qubit-2 angle flips
      // by pi on the XOR of the removal outcome and s_1; outcomes are
      // labeled in the flipped basis, which folds into the x exponent.
      p.input_qubits = {1};
      p.output_qubits = {3};
      p.instructions = {
          {0, Basis::z(), {}}, {1, Basis::b(-M_PI / 4), {}}, {2, Basis::b(0.0), {0, 1}}};
      p.byproducts = {{3, {2, 1}, {1}}};
      break;
    case Gate::CNOT:
      // Control in/out on qubit 0, target in on 1, target out on 3.
      p.input_qubits = {0, 1};
      p.output_qubits = {0, 3};
      p.instructions = {{1, Basis::b(0.0), {}}, {2, Basis::b(0.0), {}}};
      p.byproducts = {{0, {}, {1}}, {3, {2}, {1}}};
      break;
  }
  p.validate();
  return p;
}

RunResult run_pattern(const DensityMatrix& resource, const MeasurementPattern& pattern,
                      const std::vector<Probe>& probes, const RunOptions& options) {
  pattern.validate();
  if (probes.size() != pattern.input_qubits.size()) {
    throw std::invalid_argument("probe count does not match pattern inputs");
  }
  if (!options.forced_outcomes.empty() &&
      options.forced_outcomes.size() != pattern.instructions.size()) {
    throw std::invalid_argument("forced outcome count does not match instructions");
  }

  DensityMatrix state = resource;
  double acceptance = 1.0;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    auto enc = encode_probe(state, pattern.input_qubits[i], probes[i]);
    state = std::move(enc.state);
    acceptance *= enc.acceptance_probability;
  }

  std::mt19937_64 rng(options.rng_seed);
  // qubit label -> current register position
  std::vector<int> live(resource.n_qubits);
  for (int q = 0; q < resource.n_qubits; ++q) live[q] = q;
  auto position_of = [&](int label) {
    const auto it = std::find(live.begin(), live.end(), label);
    if (it == live.end()) throw std::logic_error("qubit already measured");
    return static_cast<int>(it - live.begin());
  };

  OutcomeRecord record;
  auto outcome_of = [&](int qubit_label) {
    for (std::size_t i = 0; i < record.qubits.size(); ++i) {
      if (record.qubits[i] == qubit_label) return record.outcomes[i];
    }
    throw std::logic_error("byproduct references an unmeasured qubit");
  };

  for (std::size_t i = 0; i < pattern.instructions.size(); ++i) {
    const auto& ins = pattern.instructions[i];
    Basis basis = ins.basis;
    if (options.apply_adaptation && basis.kind == Basis::Kind::BAlpha) {
      int flip = 0;
      for (int dep : ins.adapt_on) flip ^= outcome_of(dep);
      if (flip) basis.alpha += M_PI;
    }
    std::optional<int> forced;
    if (!options.forced_outcomes.empty()) forced = options.forced_outcomes[i];
    const int pos = position_of(ins.qubit);
    const auto res = measure(state, pos, basis, forced, forced ? nullptr : &rng);
    live.erase(live.begin() + pos);
    record.qubits.push_back(ins.qubit);
    record.outcomes.push_back(res.outcome);
    record.probabilities.push_back(res.probability);
    record.branch_probability *= res.probability;
  }

  if (options.apply_corrections) {
    for (const auto& rule : pattern.byproducts) {
      int x = 0;
      for (int q : rule.x_from) x ^= outcome_of(q);
      int z = 0;
      for (int q : rule.z_from) z ^= outcome_of(q);
      const int pos = position_of(rule.output_qubit);
      if (x) state = apply_gate(state, gates::pauli_x(), {pos});
      if (z) state = apply_gate(state, gates::pauli_z(), {pos});
    }
  }

  // Keep the declared outputs (spectator qubits of user-supplied patterns
  // get traced out), then put them into the declared order.
  std::vector<int> keep_pos;
  for (int q : pattern.output_qubits) keep_pos.push_back(position_of(q));
  std::vector<int> sorted_pos = keep_pos;
  std::sort(sorted_pos.begin(), sorted_pos.end());
  DensityMatrix output = partial_trace(state, sorted_pos);
  if (keep_pos != sorted_pos) {
    std::vector<int> perm;
    for (int p : keep_pos) {
      perm.push_back(static_cast<int>(
          std::lower_bound(sorted_pos.begin(), sorted_pos.end(), p) - sorted_pos.begin()));
    }
    output = permute_qubits(output, perm);
  }
  return RunResult{std::move(output), std::move(record), acceptance};
}

std::vector<RunResult> enumerate_branches(const DensityMatrix& resource,
                                          const MeasurementPattern& pattern,
                                          const std::vector<Probe>& probes,
                                          double min_probability) {
  std::vector<RunResult> results;
  const std::size_t n = pattern.instructions.size();
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    RunOptions opt;
    opt.forced_outcomes.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      opt.forced_outcomes[i] = static_cast<int>((mask >> i) & 1u);
    }
    try {
      RunResult r = run_pattern(resource, pattern, probes, opt);
      if (r.record.branch_probability >= min_probability) results.push_back(std::move(r));
    } catch (const std::runtime_error&) {
      // zero-probability branch
    }
  }
  return results;
}

Mat circuit_oracle_unitary(Gate gate) {
  switch (gate) {
    case Gate::H: return gates::hadamard().unitary;
    case Gate::T: return gates::t_gate().unitary;
    case Gate::CNOT: return gates::cnot().unitary;
  }
  throw std::logic_error("bad gate");
}

PureState circuit_oracle(Gate gate, const PureState& input) {
  const Mat u = circuit_oracle_unitary(gate);
  if (u.rows() != static_cast<std::int64_t>(input.dim())) {
    throw std::invalid_argument("gate arity does not match input");
  }
  return PureState{input.n_qubits, u * input.amplitudes};
}

PureState oracle_output(Gate gate, const std::vector<Probe>& probes) {
  PureState in = PureState::from_amplitudes(probe_ket(probes.at(0)));
  for (std::size_t i = 1; i < probes.size(); ++i) {
    in = tensor(in, PureState::from_amplitudes(probe_ket(probes[i])));
  }
  return circuit_oracle(gate, in);
}

}  // namespace owqc::mbqc
