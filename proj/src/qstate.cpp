#include "owqc/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unsupported/Eigen/KroneckerProduct>

namespace owqc {

namespace {

int qubits_for_dim(std::size_t dim) {
  int n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  if ((std::size_t{1} << n) != dim) {
    throw std::invalid_argument("dimension is not a power of two");
  }
  return n;
}

void check_targets(int n_qubits, const std::vector<int>& targets, int arity) {
  if (static_cast<int>(targets.size()) != arity) {
    throw std::invalid_argument("gate arity does not match target count");
  }
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] < 0 || targets[i] >= n_qubits) {
      throw std::invalid_argument("gate target out of range");
    }
    for (std::size_t j = i + 1; j < targets.size(); ++j) {
      if (targets[i] == targets[j]) {
        throw std::invalid_argument("duplicate gate target");
      }
    }
  }
}

}  // namespace

std::size_t insert_bit(std::size_t reduced, int qubit, int bit, int n_qubits) {
  const int pos = n_qubits - 1 - qubit;  // bit position from the LSB
  const std::size_t low_mask = (std::size_t{1} << pos) - 1;
  return ((reduced >> pos) << (pos + 1)) |
         (static_cast<std::size_t>(bit) << pos) | (reduced & low_mask);
}

PureState PureState::zero(int n_qubits) {
  if (n_qubits < 1) throw std::invalid_argument("need at least one qubit");
  Vec amp = Vec::Zero(std::int64_t{1} << n_qubits);
  amp(0) = 1.0;
  return PureState{n_qubits, std::move(amp)};
}

PureState PureState::from_amplitudes(Vec amplitudes) {
  const int n = qubits_for_dim(static_cast<std::size_t>(amplitudes.size()));
  if (n < 1) throw std::invalid_argument("need at least one qubit");
  return PureState{n, std::move(amplitudes)};
}

PureState PureState::normalized() const {
  const double nrm = norm();
  if (nrm < 1e-15) throw std::runtime_error("cannot normalize a null state");
  return PureState{n_qubits, amplitudes / nrm};
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
  return DensityMatrix{psi.n_qubits, psi.amplitudes * psi.amplitudes.adjoint()};
}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
  const std::int64_t d = std::int64_t{1} << n_qubits;
  return DensityMatrix{n_qubits, Mat::Identity(d, d) / static_cast<double>(d)};
}

DensityMatrix DensityMatrix::from_matrix(Mat m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("density matrix must be square");
  const int n = qubits_for_dim(static_cast<std::size_t>(m.rows()));
  return DensityMatrix{n, std::move(m)};
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Mat> es(elements);
  return es.eigenvalues().minCoeff();
}

bool DensityMatrix::is_hermitian(double tol) const {
  return (elements - elements.adjoint()).cwiseAbs().maxCoeff() < tol;
}

DensityMatrix DensityMatrix::normalized() const {
  const double tr = trace_real();
  if (std::abs(tr) < 1e-15) throw std::runtime_error("cannot normalize a traceless matrix");
  return DensityMatrix{n_qubits, elements / tr};
}

GateMatrix GateMatrix::from_unitary(Mat u) {
  if (u.rows() != u.cols()) throw std::invalid_argument("gate must be square");
  const int k = qubits_for_dim(static_cast<std::size_t>(u.rows()));
  GateMatrix g{k, std::move(u)};
  if (!g.is_unitary(1e-9)) throw std::invalid_argument("matrix is not unitary");
  return g;
}

bool GateMatrix::is_unitary(double tol) const {
  const Mat delta = unitary.adjoint() * unitary - Mat::Identity(unitary.rows(), unitary.cols());
  return delta.cwiseAbs().maxCoeff() < tol;
}

namespace gates {

namespace {
GateMatrix make1(cplx a, cplx b, cplx c, cplx d) {
  Mat m(2, 2);
  m << a, b, c, d;
  return GateMatrix{1, std::move(m)};
}
}  // namespace

GateMatrix identity1() { return make1(1, 0, 0, 1); }
GateMatrix pauli_x() { return make1(0, 1, 1, 0); }
GateMatrix pauli_y() { return make1(0, cplx(0, -1), cplx(0, 1), 0); }
GateMatrix pauli_z() { return make1(1, 0, 0, -1); }
GateMatrix hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  return make1(s, s, s, -s);
}
GateMatrix t_gate() { return make1(1, 0, 0, std::polar(1.0, M_PI / 4)); }
GateMatrix qwp() { return make1(1, 0, 0, std::polar(1.0, M_PI / 2)); }
GateMatrix hwp45() { return pauli_x(); }

GateMatrix cnot() {
  Mat m = Mat::Zero(4, 4);
  m(0, 0) = 1;
  m(1, 1) = 1;
  m(2, 3) = 1;
  m(3, 2) = 1;
  return GateMatrix{2, std::move(m)};
}

GateMatrix cz() {
  Mat m = Mat::Identity(4, 4);
  m(3, 3) = -1;
  return GateMatrix{2, std::move(m)};
}

GateMatrix swap2() {
  Mat m = Mat::Zero(4, 4);
  m(0, 0) = 1;
  m(1, 2) = 1;
  m(2, 1) = 1;
  m(3, 3) = 1;
  return GateMatrix{2, std::move(m)};
}

}  // namespace gates

namespace kets {

namespace {
Vec make(cplx a, cplx b) {
  Vec v(2);
  v << a, b;
  return v;
}
}  // namespace

Vec h() { return make(1, 0); }
Vec v() { return make(0, 1); }
Vec plus() { return make(M_SQRT1_2, M_SQRT1_2); }
Vec minus() { return make(M_SQRT1_2, -M_SQRT1_2); }
Vec r() { return make(M_SQRT1_2, cplx(0, -M_SQRT1_2)); }
Vec l() { return make(M_SQRT1_2, cplx(0, M_SQRT1_2)); }

}  // namespace kets

PureState tensor(const PureState& a, const PureState& b) {
  Vec amp = Eigen::kroneckerProduct(a.amplitudes, b.amplitudes);
  return PureState{a.n_qubits + b.n_qubits, std::move(amp)};
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  Mat m = Eigen::kroneckerProduct(a.elements, b.elements);
  return DensityMatrix{a.n_qubits + b.n_qubits, std::move(m)};
}

Mat embed_gate(const GateMatrix& gate, int n_qubits, const std::vector<int>& targets) {
  check_targets(n_qubits, targets, gate.arity);
  const std::size_t dim = std::size_t{1} << n_qubits;
  const std::size_t gdim = std::size_t{1} << gate.arity;
  const std::size_t rest = dim >> gate.arity;

  // index of the full register given gate bits t and the remaining bits r
  auto compose = [&](std::size_t t, std::size_t r) {
    std::size_t idx = 0;
    std::size_t r_left = r;
    for (int q = n_qubits - 1; q >= 0; --q) {
      auto it = std::find(targets.begin(), targets.end(), q);
      int bit;
      if (it != targets.end()) {
        const int k = static_cast<int>(it - targets.begin());
        bit = static_cast<int>((t >> (gate.arity - 1 - k)) & 1u);
      } else {
        bit = static_cast<int>(r_left & 1u);
        r_left >>= 1;
      }
      idx |= static_cast<std::size_t>(bit) << (n_qubits - 1 - q);
    }
    return idx;
  };

  Mat full = Mat::Zero(dim, dim);
  for (std::size_t r = 0; r < rest; ++r) {
    for (std::size_t t = 0; t < gdim; ++t) {
      const std::size_t row = compose(t, r);
      for (std::size_t u = 0; u < gdim; ++u) {
        full(row, compose(u, r)) = gate.unitary(t, u);
      }
    }
  }
  return full;
}

PureState apply_gate(const PureState& state, const GateMatrix& gate,
                     const std::vector<int>& targets) {
  const Mat full = embed_gate(gate, state.n_qubits, targets);
  return PureState{state.n_qubits, full * state.amplitudes};
}

DensityMatrix apply_gate(const DensityMatrix& state, const GateMatrix& gate,
                         const std::vector<int>& targets) {
  const Mat full = embed_gate(gate, state.n_qubits, targets);
  return DensityMatrix{state.n_qubits, full * state.elements * full.adjoint()};
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
  if (keep.empty()) throw std::invalid_argument("keep set must be nonempty");
  std::vector<int> kept = keep;
  std::sort(kept.begin(), kept.end());
  if (std::adjacent_find(kept.begin(), kept.end()) != kept.end()) {
    throw std::invalid_argument("duplicate qubit in keep set");
  }
  if (kept.front() < 0 || kept.back() >= rho.n_qubits) {
    throw std::invalid_argument("keep qubit out of range");
  }

  const int n = rho.n_qubits;
  const int nk = static_cast<int>(kept.size());
  const int nt = n - nk;
  std::vector<int> traced;
  for (int q = 0; q < n; ++q) {
    if (!std::binary_search(kept.begin(), kept.end(), q)) traced.push_back(q);
  }

  auto compose = [&](std::size_t a, std::size_t b) {
    std::size_t idx = 0;
    for (int i = 0; i < nk; ++i) {
      idx |= static_cast<std::size_t>((a >> (nk - 1 - i)) & 1u) << (n - 1 - kept[i]);
    }
    for (int i = 0; i < nt; ++i) {
      idx |= static_cast<std::size_t>((b >> (nt - 1 - i)) & 1u) << (n - 1 - traced[i]);
    }
    return idx;
  };

  const std::size_t dk = std::size_t{1} << nk;
  const std::size_t dt = std::size_t{1} << nt;
  Mat out = Mat::Zero(dk, dk);
  for (std::size_t a = 0; a < dk; ++a) {
    for (std::size_t a2 = 0; a2 < dk; ++a2) {
      cplx sum = 0;
      for (std::size_t b = 0; b < dt; ++b) {
        sum += rho.elements(compose(a, b), compose(a2, b));
      }
      out(a, a2) = sum;
    }
  }
  return DensityMatrix{nk, std::move(out)};
}

Mat permutation_matrix(int n_qubits, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != n_qubits) {
    throw std::invalid_argument("permutation size mismatch");
  }
  std::vector<bool> seen(n_qubits, false);
  for (int p : perm) {
    if (p < 0 || p >= n_qubits || seen[p]) throw std::invalid_argument("invalid permutation");
    seen[p] = true;
  }
  const std::size_t dim = std::size_t{1} << n_qubits;
  Mat m = Mat::Zero(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    std::size_t j = 0;
    for (int k = 0; k < n_qubits; ++k) {
      j |= static_cast<std::size_t>(bit_of(i, perm[k], n_qubits)) << (n_qubits - 1 - k);
    }
    m(j, i) = 1.0;
  }
  return m;
}

PureState permute_qubits(const PureState& state, const std::vector<int>& perm) {
  return PureState{state.n_qubits, permutation_matrix(state.n_qubits, perm) * state.amplitudes};
}

DensityMatrix permute_qubits(const DensityMatrix& state, const std::vector<int>& perm) {
  const Mat p = permutation_matrix(state.n_qubits, perm);
  return DensityMatrix{state.n_qubits, p * state.elements * p.adjoint()};
}

double state_fidelity(const PureState& psi, const DensityMatrix& rho) {
  if (psi.dim() != rho.dim()) throw std::invalid_argument("dimension mismatch");
  const cplx f = psi.amplitudes.adjoint() * rho.elements * psi.amplitudes;
  return f.real();
}

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("dimension mismatch");
  Eigen::SelfAdjointEigenSolver<Mat> ea(a.elements);
  Eigen::VectorXd ev = ea.eigenvalues().cwiseMax(0.0);
  const Mat sqrt_a =
      ea.eigenvectors() * ev.cwiseSqrt().asDiagonal() * ea.eigenvectors().adjoint();
  Eigen::SelfAdjointEigenSolver<Mat> em(sqrt_a * b.elements * sqrt_a);
  const double tr = em.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return tr * tr;
}

Mat pauli_string_matrix(std::string_view labels) {
  Mat out = Mat::Identity(1, 1);
  for (char c : labels) {
    Mat p(2, 2);
    switch (c) {
      case 'I': p = gates::identity1().unitary; break;
      case 'X': p = gates::pauli_x().unitary; break;
      case 'Y': p = gates::pauli_y().unitary; break;
      case 'Z': p = gates::pauli_z().unitary; break;
      default: throw std::invalid_argument("invalid Pauli label");
    }
    out = Eigen::kroneckerProduct(out, p).eval();
  }
  return out;
}

double pauli_expectation(const DensityMatrix& rho, std::string_view labels) {
  if (static_cast<int>(labels.size()) != rho.n_qubits) {
    throw std::invalid_argument("Pauli string length must match register size");
  }
  return (rho.elements * pauli_string_matrix(labels)).trace().real();
}

}  // namespace owqc
