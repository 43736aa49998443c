#pragma once

#include <string>
#include <vector>

#include "owqc/qstate.hpp"

namespace owqc::channels {

/// Process matrix of a channel rho -> sum_{m,n} chi_mn E_m rho E_n^dag over
/// the Pauli Kraus basis {I, sigma_x, sigma_y, sigma_z}^{tensor n}. Basis
/// index m is read base 4 per qubit (qubit 0 = most significant digit,
/// digits I=0, X=1, Y=2, Z=3). A unitary channel has trace 1 in this
/// convention; trace preservation forces trace 1 in general.
struct ChiMatrix {
  int n_qubits = 1;
  Mat elements;

  std::size_t basis_size() const { return static_cast<std::size_t>(elements.rows()); }
};

/// The same channel as a d^2 x d^2 matrix acting on column-stacked density
/// matrices; composition is plain matrix multiplication.
struct SuperOperator {
  int n_qubits = 1;
  Mat elements;
};

std::size_t pauli_count(int n_qubits);
std::string pauli_label(int n_qubits, std::size_t index);
Mat pauli_basis_op(int n_qubits, std::size_t index);

DensityMatrix apply_chi(const ChiMatrix& chi, const DensityMatrix& rho);

/// Rank-1 chi of a unitary: expand U = sum_m c_m E_m, chi_mn = c_m c_n^*.
ChiMatrix chi_of_unitary(const Mat& u);

/// chi of rho -> q U rho U^dag + (1-q) I/d.
ChiMatrix depolarizing_chi(const Mat& u, double q);

SuperOperator to_superoperator(const ChiMatrix& chi);
ChiMatrix from_superoperator(const SuperOperator& s);

/// chi of (second after first).
ChiMatrix compose(const ChiMatrix& first, const ChiMatrix& second);

/// Conjugates the channel by the qubit permutation (new qubit k = old
/// qubit perm[k]).
ChiMatrix permute_channel_qubits(const ChiMatrix& chi, const std::vector<int>& perm);

/// Tr(a b) / (Tr a Tr b). Reaches 1 only against rank-1 (unitary) channels;
/// against a mixed channel it saturates at the channel purity.
double process_fidelity(const ChiMatrix& a, const ChiMatrix& b);

/// Normalized overlap Tr(a b) / sqrt(Tr(a^2) Tr(b^2)): 1 iff the channels
/// are proportional. The equality-grade metric for reconstruction checks.
double channel_similarity(const ChiMatrix& a, const ChiMatrix& b);

/// Max-abs entry of sum_{m,n} chi_mn E_n^dag E_m - I.
double tp_residual(const ChiMatrix& chi);

double min_eigenvalue(const ChiMatrix& chi);

/// Lower bound on the error probability per gate: 1 - F.
double error_bound(double fidelity);

struct SwapSimulation {
  ChiMatrix chi;
  double fidelity_vs_ideal = 0.0;
  double epsilon_bound = 0.0;
  std::vector<double> stage_tp_residuals;
  double composed_tp_residual = 0.0;
};

/// Three concatenated CNOT channels (the middle one with control and target
/// exchanged) against the ideal SWAP.
SwapSimulation swap_simulation(const ChiMatrix& chi_cnot);

}  // namespace owqc::channels
