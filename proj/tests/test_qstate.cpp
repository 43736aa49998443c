#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "owqc/cluster.hpp"
#include "owqc/json_io.hpp"
#include "owqc/qstate.hpp"
#include "test_util.hpp"

using namespace owqc;
using owqc_test::max_abs_diff;

namespace {

PureState ket(const Vec& v) { return PureState::from_amplitudes(v); }

}  // namespace

TEST_CASE("tensor products") {
  SUBCASE("|0> x |+>") {
    const PureState st = tensor(ket(kets::h()), ket(kets::plus()));
    Vec expect(4);
    expect << M_SQRT1_2, M_SQRT1_2, 0, 0;
    CHECK((st.amplitudes - expect).norm() < kTol);
  }
  SUBCASE("two crossed Bell pairs give the four-photon state") {
    const PureState st = tensor(cluster::bell_pair(0.0), cluster::bell_pair(0.0));
    Vec expect = Vec::Zero(16);
    expect(0b0000) = 0.5;
    expect(0b0011) = 0.5;
    expect(0b1100) = 0.5;
    expect(0b1111) = 0.5;
    CHECK((st.amplitudes - expect).norm() < kTol);
  }
  SUBCASE("I/2 x I/2 = I/4") {
    const DensityMatrix m = tensor(DensityMatrix::maximally_mixed(1),
                                   DensityMatrix::maximally_mixed(1));
    CHECK(max_abs_diff(m.elements, DensityMatrix::maximally_mixed(2).elements) < kTol);
  }
}

TEST_CASE("apply_gate") {
  SUBCASE("H|0> = |+>") {
    const PureState st = apply_gate(ket(kets::h()), gates::hadamard(), {0});
    CHECK((st.amplitudes - kets::plus()).norm() < kTol);
  }
  SUBCASE("CZ on |++>") {
    const PureState st =
        apply_gate(tensor(ket(kets::plus()), ket(kets::plus())), gates::cz(), {0, 1});
    Vec expect(4);
    expect << 0.5, 0.5, 0.5, -0.5;
    CHECK((st.amplitudes - expect).norm() < kTol);
  }
  SUBCASE("T|+>") {
    const PureState st = apply_gate(ket(kets::plus()), gates::t_gate(), {0});
    Vec expect(2);
    expect << M_SQRT1_2, std::polar(M_SQRT1_2, M_PI / 4);
    CHECK((st.amplitudes - expect).norm() < kTol);
  }
  SUBCASE("U then U^dag restores the state for every named gate") {
    const PureState st = owqc_test::random_pure(2, 42);
    for (const GateMatrix& g : {gates::identity1(), gates::pauli_x(), gates::pauli_y(),
                                gates::pauli_z(), gates::hadamard(), gates::t_gate(),
                                gates::qwp(), gates::hwp45()}) {
      GateMatrix inv{1, g.unitary.adjoint().eval()};
      const PureState back = apply_gate(apply_gate(st, g, {1}), inv, {1});
      CHECK((back.amplitudes - st.amplitudes).cwiseAbs().maxCoeff() < kTol);
    }
    for (const GateMatrix& g : {gates::cnot(), gates::cz(), gates::swap2()}) {
      GateMatrix inv{2, g.unitary.adjoint().eval()};
      const PureState back = apply_gate(apply_gate(st, g, {0, 1}), inv, {0, 1});
      CHECK((back.amplitudes - st.amplitudes).cwiseAbs().maxCoeff() < kTol);
    }
  }
  SUBCASE("norm is preserved") {
    const PureState st = owqc_test::random_pure(3, 7);
    const PureState out = apply_gate(st, gates::cnot(), {2, 0});
    CHECK(out.norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("target checks") {
    const PureState st = owqc_test::random_pure(2, 3);
    CHECK_THROWS_AS(apply_gate(st, gates::cnot(), {0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(apply_gate(st, gates::hadamard(), {2}), std::invalid_argument);
    CHECK_THROWS_AS(apply_gate(st, gates::hadamard(), {0, 1}), std::invalid_argument);
  }
  SUBCASE("embedding acts on the right qubit") {
    // X on qubit 1 of |00> flips the least significant bit
    const PureState st = apply_gate(tensor(ket(kets::h()), ket(kets::h())),
                                    gates::pauli_x(), {1});
    CHECK(std::abs(st.amplitudes(0b01) - 1.0) < kTol);
  }
}

TEST_CASE("partial_trace") {
  SUBCASE("Bell state reduces to I/2") {
    const DensityMatrix bell = DensityMatrix::from_pure(cluster::bell_pair(0.0));
    for (int keep : {0, 1}) {
      const DensityMatrix red = partial_trace(bell, {keep});
      CHECK(max_abs_diff(red.elements, DensityMatrix::maximally_mixed(1).elements) < kTol);
    }
  }
  SUBCASE("keeping all qubits is the identity") {
    const DensityMatrix rho = owqc_test::random_density(3, 5);
    CHECK(max_abs_diff(partial_trace(rho, {0, 1, 2}).elements, rho.elements) < kTol);
  }
  SUBCASE("product state") {
    const DensityMatrix rho =
        DensityMatrix::from_pure(tensor(ket(kets::h()), ket(kets::plus())));
    const DensityMatrix red = partial_trace(rho, {0});
    Mat expect = Mat::Zero(2, 2);
    expect(0, 0) = 1.0;
    CHECK(max_abs_diff(red.elements, expect) < kTol);
  }
  SUBCASE("tensor then trace returns the original") {
    const DensityMatrix a = owqc_test::random_density(2, 11);
    const DensityMatrix b = owqc_test::random_density(1, 12);
    const DensityMatrix back = partial_trace(tensor(a, b), {0, 1});
    CHECK(max_abs_diff(back.elements, a.elements) < kTol);
  }
  SUBCASE("empty keep set throws") {
    CHECK_THROWS_AS(partial_trace(owqc_test::random_density(2, 1), {}), std::invalid_argument);
  }
}

TEST_CASE("state_fidelity") {
  const PureState star = cluster::star_state_ideal();
  SUBCASE("pure state against itself") {
    CHECK(state_fidelity(star, DensityMatrix::from_pure(star)) == doctest::Approx(1.0));
  }
  SUBCASE("maximally mixed") {
    CHECK(state_fidelity(star, DensityMatrix::maximally_mixed(4)) ==
          doctest::Approx(1.0 / 16).epsilon(1e-12));
  }
  SUBCASE("white-noise mixture hits 0.66") {
    const double p = 0.34 * 16 / 15;
    DensityMatrix rho = DensityMatrix::from_pure(star);
    rho.elements = (1 - p) * rho.elements + p * DensityMatrix::maximally_mixed(4).elements;
    CHECK(state_fidelity(star, rho) == doctest::Approx(0.66).epsilon(1e-12));
  }
  SUBCASE("linear in rho") {
    const DensityMatrix r1 = owqc_test::random_density(4, 21);
    const DensityMatrix r2 = owqc_test::random_density(4, 22);
    const double a = 0.3;
    DensityMatrix mix{4, a * r1.elements + (1 - a) * r2.elements};
    CHECK(state_fidelity(star, mix) ==
          doctest::Approx(a * state_fidelity(star, r1) + (1 - a) * state_fidelity(star, r2))
              .epsilon(1e-12));
  }
  SUBCASE("dimension mismatch throws") {
    CHECK_THROWS_AS(state_fidelity(owqc_test::random_pure(2, 1), owqc_test::random_density(3, 2)),
                    std::invalid_argument);
  }
}

TEST_CASE("uhlmann fidelity") {
  SUBCASE("agrees with state_fidelity for pure first argument") {
    const PureState psi = owqc_test::random_pure(2, 31);
    const DensityMatrix rho = owqc_test::random_density(2, 32);
    CHECK(fidelity(DensityMatrix::from_pure(psi), rho) ==
          doctest::Approx(state_fidelity(psi, rho)).epsilon(1e-7));
  }
  SUBCASE("self fidelity is one and symmetric") {
    const DensityMatrix a = owqc_test::random_density(2, 33);
    const DensityMatrix b = owqc_test::random_density(2, 34);
    CHECK(fidelity(a, a) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(fidelity(a, b) == doctest::Approx(fidelity(b, a)).epsilon(1e-9));
  }
}

TEST_CASE("pauli_expectation") {
  SUBCASE("<X> on |+>") {
    CHECK(pauli_expectation(DensityMatrix::from_pure(ket(kets::plus())), "X") ==
          doctest::Approx(1.0));
  }
  SUBCASE("<Y> eigenstates") {
    CHECK(pauli_expectation(DensityMatrix::from_pure(ket(kets::l())), "Y") ==
          doctest::Approx(1.0));
    CHECK(pauli_expectation(DensityMatrix::from_pure(ket(kets::r())), "Y") ==
          doctest::Approx(-1.0));
  }
  SUBCASE("<ZZ> on the Bell state") {
    CHECK(pauli_expectation(DensityMatrix::from_pure(cluster::bell_pair(0.0)), "ZZ") ==
          doctest::Approx(1.0));
  }
  SUBCASE("identity string gives the trace") {
    const DensityMatrix rho = owqc_test::random_density(3, 41);
    CHECK(pauli_expectation(rho, "III") == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("star stabilizer generators") {
    const DensityMatrix star = DensityMatrix::from_pure(cluster::star_state_ideal());
    for (const auto& gen : cluster::star_stabilizer_generators()) {
      CHECK(pauli_expectation(star, gen) == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
  SUBCASE("bad label throws") {
    CHECK_THROWS_AS(pauli_expectation(owqc_test::random_density(1, 2), "Q"),
                    std::invalid_argument);
    CHECK_THROWS_AS(pauli_expectation(owqc_test::random_density(2, 2), "X"),
                    std::invalid_argument);
  }
}

TEST_CASE("permute_qubits") {
  const PureState st = tensor(ket(kets::h()), ket(kets::v()));  // |01>
  const PureState swapped = permute_qubits(st, {1, 0});
  CHECK(std::abs(swapped.amplitudes(0b10) - 1.0) < kTol);
  const DensityMatrix rho = owqc_test::random_density(3, 55);
  const DensityMatrix back = permute_qubits(permute_qubits(rho, {2, 0, 1}), {1, 2, 0});
  CHECK(max_abs_diff(back.elements, rho.elements) < kTol);
}

TEST_CASE("matrix json round trip") {
  const DensityMatrix rho = owqc_test::random_density(2, 61);
  const nlohmann::json j(rho);
  CHECK(j.at("n_qubits") == 2);
  const auto back = j.get<DensityMatrix>();
  CHECK(max_abs_diff(back.elements, rho.elements) == 0.0);

  const PureState psi = owqc_test::random_pure(3, 62);
  const nlohmann::json jp(psi);
  const auto back_psi = jp.get<PureState>();
  CHECK((back_psi.amplitudes - psi.amplitudes).cwiseAbs().maxCoeff() == 0.0);

  const nlohmann::json bad{{"n_qubits", 2}, {"data", {{1, 2}}}};
  CHECK_THROWS_AS(bad.get<DensityMatrix>(), std::exception);
}

TEST_CASE("gate constants are unitary") {
  for (const GateMatrix& g : {gates::identity1(), gates::pauli_x(), gates::pauli_y(),
                              gates::pauli_z(), gates::hadamard(), gates::t_gate(),
                              gates::qwp(), gates::hwp45()}) {
    CHECK(g.is_unitary());
  }
  for (const GateMatrix& g : {gates::cnot(), gates::cz(), gates::swap2()}) {
    CHECK(g.is_unitary());
  }
  // the paper's waveplate conventions
  CHECK(max_abs_diff(gates::hwp45().unitary, gates::pauli_x().unitary) < kTol);
  CHECK(std::abs(gates::qwp().unitary(1, 1) - cplx(0, 1)) < kTol);
}
