#include "owqc/channels.hpp"

#include <cmath>
#include <stdexcept>
#include <unsupported/Eigen/KroneckerProduct>

namespace owqc::channels {

namespace {

const char kDigits[] = {'I', 'X', 'Y', 'Z'};

int qubits_for_basis(std::size_t basis_size) {
  int n = 0;
  while (pauli_count(n) < basis_size) ++n;
  if (pauli_count(n) != basis_size) throw std::invalid_argument("basis size is not a power of 4");
  return n;
}

void check_same_size(const ChiMatrix& a, const ChiMatrix& b) {
  if (a.n_qubits != b.n_qubits) throw std::invalid_argument("channel dimension mismatch");
}

}  // namespace

std::size_t pauli_count(int n_qubits) {
  return std::size_t{1} << (2 * n_qubits);
}

std::string pauli_label(int n_qubits, std::size_t index) {
  std::string label(n_qubits, 'I');
  for (int q = n_qubits - 1; q >= 0; --q) {
    label[q] = kDigits[index & 3u];
    index >>= 2;
  }
  return label;
}

Mat pauli_basis_op(int n_qubits, std::size_t index) {
  return pauli_string_matrix(pauli_label(n_qubits, index));
}

DensityMatrix apply_chi(const ChiMatrix& chi, const DensityMatrix& rho) {
  if (pauli_count(chi.n_qubits) != chi.basis_size() || chi.n_qubits != rho.n_qubits) {
    throw std::invalid_argument("channel/state dimension mismatch");
  }
  const std::size_t nb = chi.basis_size();
  Mat out = Mat::Zero(rho.dim(), rho.dim());
  for (std::size_t m = 0; m < nb; ++m) {
    const Mat em_rho = pauli_basis_op(chi.n_qubits, m) * rho.elements;
    for (std::size_t n = 0; n < nb; ++n) {
      if (chi.elements(m, n) == cplx(0, 0)) continue;
      out += chi.elements(m, n) * em_rho * pauli_basis_op(chi.n_qubits, n);
    }
  }
  return DensityMatrix{rho.n_qubits, std::move(out)};
}

ChiMatrix chi_of_unitary(const Mat& u) {
  const GateMatrix gate = GateMatrix::from_unitary(u);  // validates unitarity
  const int n = gate.arity;
  const std::size_t nb = pauli_count(n);
  const double d = static_cast<double>(u.rows());
  Vec c(nb);
  for (std::size_t m = 0; m < nb; ++m) {
    c(m) = (pauli_basis_op(n, m) * u).trace() / d;
  }
  return ChiMatrix{n, c * c.adjoint()};
}

ChiMatrix depolarizing_chi(const Mat& u, double q) {
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("depolarizing weight outside [0,1]");
  ChiMatrix chi = chi_of_unitary(u);
  const std::size_t nb = chi.basis_size();
  chi.elements = q * chi.elements +
                 (1.0 - q) / static_cast<double>(nb) * Mat::Identity(nb, nb);
  return chi;
}

SuperOperator to_superoperator(const ChiMatrix& chi) {
  const std::size_t nb = chi.basis_size();
  const std::size_t d2 = nb;  // d^2 == 4^n
  Mat s = Mat::Zero(d2, d2);
  for (std::size_t m = 0; m < nb; ++m) {
    const Mat em = pauli_basis_op(chi.n_qubits, m);
    for (std::size_t n = 0; n < nb; ++n) {
      if (chi.elements(m, n) == cplx(0, 0)) continue;
      // vec(E_m rho E_n^dag) = (conj(E_n) kron E_m) vec(rho)
      const Mat en = pauli_basis_op(chi.n_qubits, n);
      s += chi.elements(m, n) * Eigen::kroneckerProduct(en.conjugate(), em);
    }
  }
  return SuperOperator{chi.n_qubits, std::move(s)};
}

ChiMatrix from_superoperator(const SuperOperator& s) {
  const std::size_t nb = pauli_count(s.n_qubits);
  if (static_cast<std::size_t>(s.elements.rows()) != nb) {
    throw std::invalid_argument("superoperator dimension mismatch");
  }
  const double d2 = static_cast<double>(nb);
  Mat chi(nb, nb);
  for (std::size_t m = 0; m < nb; ++m) {
    const Mat em = pauli_basis_op(s.n_qubits, m);
    for (std::size_t n = 0; n < nb; ++n) {
      const Mat en = pauli_basis_op(s.n_qubits, n);
      const Mat basis = Eigen::kroneckerProduct(en.conjugate(), em);
      chi(m, n) = (basis.adjoint() * s.elements).trace() / d2;
    }
  }
  return ChiMatrix{s.n_qubits, std::move(chi)};
}

ChiMatrix compose(const ChiMatrix& first, const ChiMatrix& second) {
  check_same_size(first, second);
  const SuperOperator sa = to_superoperator(first);
  const SuperOperator sb = to_superoperator(second);
  return from_superoperator(SuperOperator{first.n_qubits, sb.elements * sa.elements});
}

ChiMatrix permute_channel_qubits(const ChiMatrix& chi, const std::vector<int>& perm) {
  const Mat p = permutation_matrix(chi.n_qubits, perm);
  const Mat sp = Eigen::kroneckerProduct(p.conjugate(), p);
  const SuperOperator s = to_superoperator(chi);
  return from_superoperator(SuperOperator{chi.n_qubits, sp * s.elements * sp.adjoint()});
}

double process_fidelity(const ChiMatrix& a, const ChiMatrix& b) {
  check_same_size(a, b);
  const double tra = a.elements.trace().real();
  const double trb = b.elements.trace().real();
  if (std::abs(tra) < 1e-12 || std::abs(trb) < 1e-12) {
    throw std::invalid_argument("process fidelity of a zero-trace channel");
  }
  return (a.elements * b.elements).trace().real() / (tra * trb);
}

double channel_similarity(const ChiMatrix& a, const ChiMatrix& b) {
  check_same_size(a, b);
  const double pa = (a.elements * a.elements).trace().real();
  const double pb = (b.elements * b.elements).trace().real();
  if (pa < 1e-24 || pb < 1e-24) throw std::invalid_argument("similarity of a null channel");
  return (a.elements * b.elements).trace().real() / std::sqrt(pa * pb);
}

double tp_residual(const ChiMatrix& chi) {
  const std::size_t nb = chi.basis_size();
  const Eigen::Index d = Eigen::Index{1} << chi.n_qubits;
  Mat w = Mat::Zero(d, d);
  for (std::size_t m = 0; m < nb; ++m) {
    const Mat em = pauli_basis_op(chi.n_qubits, m);
    for (std::size_t n = 0; n < nb; ++n) {
      if (chi.elements(m, n) == cplx(0, 0)) continue;
      w += chi.elements(m, n) * pauli_basis_op(chi.n_qubits, n) * em;
    }
  }
  return (w - Mat::Identity(d, d)).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const ChiMatrix& chi) {
  Eigen::SelfAdjointEigenSolver<Mat> es(chi.elements);
  return es.eigenvalues().minCoeff();
}

double error_bound(double fidelity) {
  if (fidelity < -kTol || fidelity > 1.0 + kTol) {
    throw std::invalid_argument("fidelity outside [0,1]");
  }
  return 1.0 - fidelity;
}

SwapSimulation swap_simulation(const ChiMatrix& chi_cnot) {
  if (chi_cnot.n_qubits != 2) throw std::invalid_argument("swap simulation needs a 2-qubit channel");
  const ChiMatrix reversed = permute_channel_qubits(chi_cnot, {1, 0});
  SwapSimulation sim;
  sim.stage_tp_residuals = {tp_residual(chi_cnot), tp_residual(reversed), tp_residual(chi_cnot)};
  sim.chi = compose(compose(chi_cnot, reversed), chi_cnot);
  sim.composed_tp_residual = tp_residual(sim.chi);
  sim.fidelity_vs_ideal = process_fidelity(sim.chi, chi_of_unitary(gates::swap2().unitary));
  sim.epsilon_bound = 1.0 - sim.fidelity_vs_ideal;
  return sim;
}

}  // namespace owqc::channels
