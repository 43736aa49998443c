#pragma once

#include <complex>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace owqc {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

/// Default absolute tolerance for invariant checks.
inline constexpr double kTol = 1e-9;

/// Index convention used everywhere: qubit 0 is the most significant bit of
/// a basis index, so for n qubits the basis state |q0 q1 ... q_{n-1}> has
/// index q0*2^(n-1) + q1*2^(n-2) + ... + q_{n-1}.
inline int bit_of(std::size_t index, int qubit, int n_qubits) {
  return static_cast<int>((index >> (n_qubits - 1 - qubit)) & 1u);
}

/// Inserts bit b for `qubit` into a reduced index over the remaining qubits.
std::size_t insert_bit(std::size_t reduced, int qubit, int bit, int n_qubits);

/// Pure state of an n-qubit register (complex amplitudes, length 2^n).
struct PureState {
  int n_qubits = 0;
  Vec amplitudes;

  static PureState zero(int n_qubits);
  /// Wraps an amplitude vector; the length must be a power of two.
  static PureState from_amplitudes(Vec amplitudes);

  std::size_t dim() const { return static_cast<std::size_t>(amplitudes.size()); }
  double norm() const { return amplitudes.norm(); }
  PureState normalized() const;
};

/// Density matrix of an n-qubit register (Hermitian, trace 1 when normalized).
struct DensityMatrix {
  int n_qubits = 0;
  Mat elements;

  static DensityMatrix from_pure(const PureState& psi);
  static DensityMatrix maximally_mixed(int n_qubits);
  static DensityMatrix from_matrix(Mat m);

  std::size_t dim() const { return static_cast<std::size_t>(elements.rows()); }
  double trace_real() const { return elements.trace().real(); }
  double min_eigenvalue() const;
  bool is_hermitian(double tol = kTol) const;
  DensityMatrix normalized() const;
};

/// A k-qubit unitary (k = 1 or 2 for the named constants).
struct GateMatrix {
  int arity = 1;
  Mat unitary;

  static GateMatrix from_unitary(Mat u);
  bool is_unitary(double tol = kTol) const;
};

namespace gates {
GateMatrix identity1();
GateMatrix pauli_x();
GateMatrix pauli_y();
GateMatrix pauli_z();
GateMatrix hadamard();
GateMatrix t_gate();
GateMatrix cnot();
GateMatrix cz();
GateMatrix swap2();
/// Quarter waveplate, fast axis horizontal: diag{1, e^{i pi/2}}.
GateMatrix qwp();
/// Half waveplate at 45 degrees, modeled as the polarization exchange
/// |H> <-> |V| (= sigma_x, global phase dropped).
GateMatrix hwp45();
}  // namespace gates

/// Single-qubit basis kets in the computational (|H>=|0>, |V>=|1>) encoding.
namespace kets {
Vec h();
Vec v();
Vec plus();
Vec minus();
/// |R> = (|H> - i|V>)/sqrt(2), the -1 eigenstate of sigma_y.
Vec r();
/// |L> = (|H> + i|V>)/sqrt(2), the +1 eigenstate of sigma_y.
Vec l();
}  // namespace kets

PureState tensor(const PureState& a, const PureState& b);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

/// Embeds a k-qubit gate into an n-qubit register; targets[0] becomes the
/// gate's most significant qubit.
Mat embed_gate(const GateMatrix& gate, int n_qubits, const std::vector<int>& targets);

PureState apply_gate(const PureState& state, const GateMatrix& gate,
                     const std::vector<int>& targets);
DensityMatrix apply_gate(const DensityMatrix& state, const GateMatrix& gate,
                         const std::vector<int>& targets);

/// Traces out every qubit not listed in `keep`; kept qubits stay in their
/// original relative order.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep);

/// Relabels qubits: new qubit k is the old qubit perm[k].
PureState permute_qubits(const PureState& state, const std::vector<int>& perm);
DensityMatrix permute_qubits(const DensityMatrix& state, const std::vector<int>& perm);
Mat permutation_matrix(int n_qubits, const std::vector<int>& perm);

/// <psi| rho |psi>.
double state_fidelity(const PureState& psi, const DensityMatrix& rho);

/// Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2 between density matrices.
double fidelity(const DensityMatrix& a, const DensityMatrix& b);

/// 2^k x 2^k matrix of a Pauli string over labels I, X, Y, Z.
Mat pauli_string_matrix(std::string_view labels);

/// Tr(rho * sigma_s) for a Pauli string s; the string length must match the
/// register size.
double pauli_expectation(const DensityMatrix& rho, std::string_view labels);

}  // namespace owqc
