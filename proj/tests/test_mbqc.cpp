#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <unsupported/Eigen/KroneckerProduct>

#include "owqc/cluster.hpp"
#include "owqc/json_io.hpp"
#include "owqc/mbqc.hpp"
#include "test_util.hpp"

using namespace owqc;
using namespace owqc::mbqc;

namespace {

DensityMatrix ideal_star() {
  return DensityMatrix::from_pure(cluster::graph_state(cluster::star_graph()));
}

const std::vector<Probe> kProbes = {Probe::H, Probe::V, Probe::Plus, Probe::L};

std::vector<std::vector<Probe>> probe_sets(int arity) {
  std::vector<std::vector<Probe>> sets;
  if (arity == 1) {
    for (Probe p : kProbes) sets.push_back({p});
  } else {
    for (Probe a : kProbes) {
      for (Probe b : kProbes) sets.push_back({a, b});
    }
  }
  return sets;
}

}  // namespace

TEST_CASE("measure") {
  SUBCASE("B(0) on |+> is deterministic") {
    PureState st = PureState::from_amplitudes(kets::plus());
    std::mt19937_64 rng(1);
    const auto res = measure(st, 0, Basis::b(0.0), std::nullopt, &rng);
    CHECK(res.outcome == 0);
    CHECK(res.probability == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("Z on the star center leaves |+++>") {
    DensityMatrix st = ideal_star();
    const auto res = measure(st, 2, Basis::z(), 0, nullptr);
    CHECK(res.probability == doctest::Approx(0.5).epsilon(1e-12));
    const PureState ppp = PureState::from_amplitudes(
        Eigen::kroneckerProduct(kets::plus(),
                                Eigen::kroneckerProduct(kets::plus(), kets::plus()).eval())
            .eval());
    CHECK(state_fidelity(ppp, st) == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("B(alpha) is unbiased against the computational basis") {
    for (int forced : {0, 1}) {
      PureState st = PureState::from_amplitudes(kets::h());
      const auto res = measure(st, 0, Basis::b(-M_PI / 4), forced, nullptr);
      CHECK(res.probability == doctest::Approx(0.5).epsilon(1e-12));
    }
  }
  SUBCASE("B(-pi/4) on |+> follows the Born rule") {
    // |<alpha_+|+>|^2 = cos^2(alpha/2)
    PureState st = PureState::from_amplitudes(kets::plus());
    const auto res = measure(st, 0, Basis::b(-M_PI / 4), 0, nullptr);
    CHECK(res.probability == doctest::Approx(std::cos(M_PI / 8) * std::cos(M_PI / 8))
                                 .epsilon(1e-12));
  }
  SUBCASE("forcing an impossible outcome throws") {
    PureState st = PureState::from_amplitudes(kets::plus());
    CHECK_THROWS_AS(measure(st, 0, Basis::b(0.0), 1, nullptr), std::runtime_error);
  }
  SUBCASE("sampled outcomes follow Born statistics") {
    std::mt19937_64 rng(7);
    int ones = 0;
    const int trials = 4000;
    for (int i = 0; i < trials; ++i) {
      PureState st = PureState::from_amplitudes(kets::h());
      ones += measure(st, 0, Basis::b(0.0), std::nullopt, &rng).outcome;
    }
    CHECK(std::abs(ones / static_cast<double>(trials) - 0.5) < 0.05);
  }
}

TEST_CASE("encode_probe") {
  const DensityMatrix star = ideal_star();
  SUBCASE("|+> probe is a no-op") {
    const auto enc = encode_probe(star, 1, Probe::Plus);
    CHECK(enc.acceptance_probability == doctest::Approx(1.0));
    CHECK(owqc_test::max_abs_diff(enc.state.elements, star.elements) < kTol);
  }
  SUBCASE("polarizer halves the count rate") {
    const auto enc = encode_probe(star, 1, Probe::H);
    CHECK(enc.acceptance_probability == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("QWP turns |+> into |L>") {
    const PureState plus = PureState::from_amplitudes(kets::plus());
    const auto enc = encode_probe(plus, 0, Probe::L);
    CHECK((enc.state.amplitudes - kets::l()).norm() < kTol);
  }
  SUBCASE("acceptance equals the Born probability of the projector") {
    for (int qubit : {0, 1, 3}) {
      const auto enc = encode_probe(star, qubit, Probe::V);
      std::string labels = "IIII";
      labels[qubit] = 'Z';
      const double born = 0.5 * (1.0 - pauli_expectation(star, labels));
      CHECK(enc.acceptance_probability == doctest::Approx(born).epsilon(1e-12));
    }
  }
}

TEST_CASE("pattern_for structure") {
  SUBCASE("H byproduct is sigma_x^{s2} (input measurement) on the output") {
    const auto p = pattern_for(Gate::H);
    CHECK(p.input_qubits == std::vector<int>{1});
    CHECK(p.output_qubits == std::vector<int>{2});
    REQUIRE(p.byproducts.size() == 1);
    CHECK(p.byproducts[0].x_from == std::vector<int>{1});
    // sigma_z removals feed the z correction
    CHECK(p.byproducts[0].z_from == std::vector<int>{0, 3});
  }
  SUBCASE("T third measurement adapts on the qubit-1 outcome") {
    const auto p = pattern_for(Gate::T);
    REQUIRE(p.instructions.size() == 3);
    CHECK(p.instructions[1].qubit == 1);
    CHECK(p.instructions[1].basis.alpha == doctest::Approx(-M_PI / 4));
    const auto& adaptive = p.instructions[2];
    CHECK(adaptive.qubit == 2);
    CHECK(std::find(adaptive.adapt_on.begin(), adaptive.adapt_on.end(), 1) !=
          adaptive.adapt_on.end());
  }
  SUBCASE("CNOT byproducts") {
    const auto p = pattern_for(Gate::CNOT);
    REQUIRE(p.byproducts.size() == 2);
    CHECK(p.byproducts[0].output_qubit == 0);
    CHECK(p.byproducts[0].x_from.empty());
    CHECK(p.byproducts[0].z_from == std::vector<int>{1});
    CHECK(p.byproducts[1].output_qubit == 3);
    CHECK(p.byproducts[1].x_from == std::vector<int>{2});
    CHECK(p.byproducts[1].z_from == std::vector<int>{1});
  }
  SUBCASE("instruction order respects adaptivity") {
    auto p = pattern_for(Gate::T);
    std::swap(p.instructions[0], p.instructions[2]);
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  }
}

TEST_CASE("run_pattern trivial branches") {
  const DensityMatrix star = ideal_star();
  SUBCASE("H on probe |H| with all outcomes 0 gives |+>") {
    RunOptions opt;
    opt.forced_outcomes = {0, 0, 0};
    const auto run = run_pattern(star, pattern_for(Gate::H), {Probe::H}, opt);
    CHECK(state_fidelity(PureState::from_amplitudes(kets::plus()), run.output) ==
          doctest::Approx(1.0).epsilon(1e-9));
    CHECK(run.acceptance_probability == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(run.record.branch_probability == doctest::Approx(0.125).epsilon(1e-9));
  }
  SUBCASE("T on probe |+> gives T|+>") {
    RunOptions opt;
    opt.forced_outcomes = {0, 0, 0};
    const auto run = run_pattern(star, pattern_for(Gate::T), {Probe::Plus}, opt);
    CHECK(state_fidelity(oracle_output(Gate::T, {Probe::Plus}), run.output) ==
          doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("CNOT on (+, H) gives the Bell state on any branch") {
    for (const auto& branch :
         enumerate_branches(star, pattern_for(Gate::CNOT), {Probe::Plus, Probe::H})) {
      const PureState bell = oracle_output(Gate::CNOT, {Probe::Plus, Probe::H});
      CHECK(state_fidelity(bell, branch.output) == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("every branch of every gate matches the circuit oracle") {
  const DensityMatrix star = ideal_star();
  for (Gate gate : {Gate::H, Gate::T, Gate::CNOT}) {
    const auto pattern = pattern_for(gate);
    for (const auto& probes : probe_sets(static_cast<int>(pattern.input_qubits.size()))) {
      const auto branches = enumerate_branches(star, pattern, probes);
      CHECK(!branches.empty());
      const PureState expect = oracle_output(gate, probes);
      double total = 0.0;
      for (const auto& branch : branches) {
        CHECK(state_fidelity(expect, branch.output) > 1.0 - 1e-9);
        total += branch.record.branch_probability;
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("adaptivity is required for the T gate") {
  const DensityMatrix star = ideal_star();
  const auto pattern = pattern_for(Gate::T);
  RunOptions opt;
  opt.forced_outcomes = {0, 1, 0};  // s = 1 on the B(-pi/4) measurement
  opt.apply_adaptation = false;
  const auto run = run_pattern(star, pattern, {Probe::Plus}, opt);
  CHECK(state_fidelity(oracle_output(Gate::T, {Probe::Plus}), run.output) < 0.99);

  opt.apply_adaptation = true;
  const auto good = run_pattern(star, pattern, {Probe::Plus}, opt);
  CHECK(state_fidelity(oracle_output(Gate::T, {Probe::Plus}), good.output) >
        1.0 - 1e-9);
}

TEST_CASE("sampled execution is deterministic per seed") {
  const DensityMatrix star = ideal_star();
  RunOptions opt;
  opt.rng_seed = 12345;
  const auto a = run_pattern(star, pattern_for(Gate::CNOT), {Probe::Plus, Probe::L}, opt);
  const auto b = run_pattern(star, pattern_for(Gate::CNOT), {Probe::Plus, Probe::L}, opt);
  CHECK(a.record.outcomes == b.record.outcomes);
  CHECK(owqc_test::max_abs_diff(a.output.elements, b.output.elements) == 0.0);
}

TEST_CASE("circuit oracle basics") {
  SUBCASE("CNOT|10> = |11>") {
    const PureState in = PureState::from_amplitudes(
        Eigen::kroneckerProduct(kets::v(), kets::h()).eval());
    const PureState out = circuit_oracle(Gate::CNOT, in);
    CHECK(std::abs(out.amplitudes(0b11) - 1.0) < kTol);
  }
  SUBCASE("H|+> = |0>") {
    const PureState out =
        circuit_oracle(Gate::H, PureState::from_amplitudes(kets::plus()));
    CHECK(std::abs(out.amplitudes(0) - 1.0) < kTol);
  }
  SUBCASE("T|0> = |0>") {
    const PureState out = circuit_oracle(Gate::T, PureState::from_amplitudes(kets::h()));
    CHECK(std::abs(out.amplitudes(0) - 1.0) < kTol);
  }
  SUBCASE("arity mismatch throws") {
    CHECK_THROWS_AS(circuit_oracle(Gate::CNOT, PureState::from_amplitudes(kets::h())),
                    std::invalid_argument);
  }
}

TEST_CASE("pattern json round trip") {
  for (Gate gate : {Gate::H, Gate::T, Gate::CNOT}) {
    const auto p = pattern_for(gate);
    const nlohmann::json j(p);
    CHECK(j.at("gate") == gate_name(gate));
    const auto back = j.get<MeasurementPattern>();
    CHECK(back.input_qubits == p.input_qubits);
    CHECK(back.output_qubits == p.output_qubits);
    REQUIRE(back.instructions.size() == p.instructions.size());
    for (std::size_t i = 0; i < p.instructions.size(); ++i) {
      CHECK(back.instructions[i].qubit == p.instructions[i].qubit);
      CHECK(back.instructions[i].adapt_on == p.instructions[i].adapt_on);
    }
  }
  // execution report carries the record and probabilities
  RunOptions opt;
  opt.forced_outcomes = {0, 0};
  const auto run = run_pattern(ideal_star(), pattern_for(Gate::CNOT),
                               {Probe::Plus, Probe::Plus}, opt);
  const auto j = run_result_to_json(run);
  CHECK(j.contains("branch_probability"));
  CHECK(j.contains("acceptance_probability"));
  CHECK(j.contains("outcomes"));
}
