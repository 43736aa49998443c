#include "owqc/cluster.hpp"

#include <cmath>
#include <stdexcept>

namespace owqc::cluster {

namespace {

constexpr double kAnnihilated = 1e-12;

// Diagonal of the even-parity projector on modes (a, b) of an n-qubit register.
Eigen::VectorXd parity_mask(int n, int mode_a, int mode_b) {
  const std::size_t dim = std::size_t{1} << n;
  Eigen::VectorXd mask(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    mask(i) = bit_of(i, mode_a, n) == bit_of(i, mode_b, n) ? 1.0 : 0.0;
  }
  return mask;
}

void check_fuse_modes(int n, int mode_a, int mode_b) {
  if (n < 2 || mode_a == mode_b || mode_a < 0 || mode_b < 0 || mode_a >= n || mode_b >= n) {
    throw std::invalid_argument("fuse needs two distinct in-range modes");
  }
}

}  // namespace

void GraphSpec::validate() const {
  if (n_vertices < 1) throw std::invalid_argument("graph needs at least one vertex");
  for (const auto& [a, b] : edges) {
    if (a == b) throw std::invalid_argument("graph edges may not be self-loops");
    if (a < 0 || b < 0 || a >= n_vertices || b >= n_vertices) {
      throw std::invalid_argument("graph edge vertex out of range");
    }
  }
}

void NoiseModel::validate() const {
  if (visibility < 0.0 || visibility > 1.0) throw std::invalid_argument("visibility outside [0,1]");
  if (white_noise < 0.0 || white_noise > 1.0) {
    throw std::invalid_argument("white-noise fraction outside [0,1]");
  }
}

PureState bell_pair(double theta) {
  Vec amp = Vec::Zero(4);
  amp(0) = M_SQRT1_2;
  amp(3) = std::polar(M_SQRT1_2, theta);
  return PureState{2, std::move(amp)};
}

PostselectedPure fuse(const PureState& four_photon, int mode_a, int mode_b) {
  check_fuse_modes(four_photon.n_qubits, mode_a, mode_b);
  const Eigen::VectorXd mask = parity_mask(four_photon.n_qubits, mode_a, mode_b);
  Vec projected = mask.cast<cplx>().asDiagonal() * four_photon.amplitudes;
  const double p = projected.squaredNorm();
  if (p < kAnnihilated) throw std::runtime_error("fusion projector annihilates the state");
  return PostselectedPure{PureState{four_photon.n_qubits, projected / std::sqrt(p)}, p};
}

PostselectedState fuse(const DensityMatrix& four_photon, int mode_a, int mode_b) {
  check_fuse_modes(four_photon.n_qubits, mode_a, mode_b);
  const Eigen::VectorXd mask = parity_mask(four_photon.n_qubits, mode_a, mode_b);
  const auto diag = mask.cast<cplx>().asDiagonal();
  Mat projected = diag * four_photon.elements * diag;
  const double p = projected.trace().real();
  if (p < kAnnihilated) throw std::runtime_error("fusion projector annihilates the state");
  return PostselectedState{DensityMatrix{four_photon.n_qubits, projected / p}, p};
}

namespace {

// Hadamard rotations on modes i1, s1, i2 followed by the (i1,s1,s2,i2) ->
// (0,1,2,3) relabeling. The mode order coming out of fusion is (s1,i1,s2,i2).
template <typename StateT>
StateT star_rotation(const StateT& ghz) {
  if (ghz.n_qubits != 4) throw std::invalid_argument("star rotation expects four modes");
  StateT st = apply_gate(ghz, gates::hadamard(), {0});   // s1
  st = apply_gate(st, gates::hadamard(), {1});           // i1
  st = apply_gate(st, gates::hadamard(), {3});           // i2
  return permute_qubits(st, {1, 0, 2, 3});
}

}  // namespace

PureState to_star(const PureState& ghz) { return star_rotation(ghz); }
DensityMatrix to_star(const DensityMatrix& ghz) { return star_rotation(ghz); }

PureState graph_state(const GraphSpec& spec) {
  spec.validate();
  PureState st = PureState::from_amplitudes(
      Vec::Constant(std::int64_t{1} << spec.n_vertices,
                    std::pow(2.0, -0.5 * spec.n_vertices)));
  for (const auto& [a, b] : spec.edges) {
    st = apply_gate(st, gates::cz(), {a, b});
  }
  return st;
}

GraphSpec star_graph() { return GraphSpec{4, {{0, 2}, {1, 2}, {2, 3}}}; }

PureState star_state_ideal() {
  const Vec plus = kets::plus();
  const Vec minus = kets::minus();
  PureState b0 = PureState::from_amplitudes(plus);
  b0 = tensor(b0, PureState::from_amplitudes(plus));
  b0 = tensor(b0, PureState::from_amplitudes(kets::h()));
  b0 = tensor(b0, PureState::from_amplitudes(plus));
  PureState b1 = PureState::from_amplitudes(minus);
  b1 = tensor(b1, PureState::from_amplitudes(minus));
  b1 = tensor(b1, PureState::from_amplitudes(kets::v()));
  b1 = tensor(b1, PureState::from_amplitudes(minus));
  return PureState{4, (b0.amplitudes + b1.amplitudes) * M_SQRT1_2};
}

DensityMatrix apply_noise(const DensityMatrix& state, const NoiseModel& model) {
  model.validate();
  DensityMatrix rho = state;
  if (model.visibility < 1.0) {
    if (rho.n_qubits != 4) {
      throw std::invalid_argument("branch dephasing is defined on the 4-qubit star register");
    }
    const DensityMatrix flipped = apply_gate(rho, gates::pauli_z(), {2});
    rho.elements = 0.5 * (1.0 + model.visibility) * rho.elements +
                   0.5 * (1.0 - model.visibility) * flipped.elements;
  }
  if (model.white_noise > 0.0) {
    const double d = static_cast<double>(rho.dim());
    rho.elements = (1.0 - model.white_noise) * rho.elements +
                   model.white_noise / d * Mat::Identity(rho.dim(), rho.dim());
  }
  return rho;
}

NoiseModel preset(const std::string& name) {
  if (name == "ideal") return NoiseModel{};
  if (name == "paper-2013") {
    // Visibility from the ~90% |+/-> interference; white noise solves
    // (1-p)(1+V)/2 + p/16 = 0.66 for V = 0.90.
    NoiseModel m;
    m.visibility = 0.90;
    m.white_noise = 116.0 / 355.0;
    return m;
  }
  throw std::invalid_argument("unknown noise preset: " + name);
}

PostselectedState make_star(const NoiseModel& model) {
  model.validate();
  const PureState pairs = tensor(bell_pair(model.theta1), bell_pair(model.theta2));
  const PostselectedPure fused = fuse(pairs, 0, 2);  // signal modes s1, s2
  const PureState star = to_star(fused.state);
  DensityMatrix rho = apply_noise(DensityMatrix::from_pure(star), model);
  return PostselectedState{std::move(rho), fused.acceptance_probability};
}

std::vector<std::string> star_stabilizer_generators() {
  return {"ZZXZ", "XIZI", "IXZI", "IIZX"};
}

namespace {

// Single-qubit Pauli product with phase, e.g. X*Z = -iY.
std::pair<cplx, char> pauli_product(char a, char b) {
  if (a == 'I') return {1.0, b};
  if (b == 'I') return {1.0, a};
  if (a == b) return {1.0, 'I'};
  static const std::string order = "XYZ";
  const int ia = static_cast<int>(order.find(a));
  const int ib = static_cast<int>(order.find(b));
  const char c = order[3 - ia - ib];
  // cyclic (X->Y->Z) gives +i, anticyclic -i
  const bool cyclic = (ib - ia + 3) % 3 == 1;
  return {cyclic ? cplx(0, 1) : cplx(0, -1), c};
}

}  // namespace

std::vector<SignedPauli> star_stabilizer_group() {
  const auto gens = star_stabilizer_generators();
  auto multiply = [](const SignedPauli& a, const std::string& b) {
    SignedPauli out{a.sign, std::string(a.labels.size(), 'I')};
    cplx phase = 1.0;
    for (std::size_t i = 0; i < b.size(); ++i) {
      auto [ph, c] = pauli_product(a.labels[i], b[i]);
      phase *= ph;
      out.labels[i] = c;
    }
    if (std::abs(phase.imag()) > 1e-12) throw std::logic_error("non-real stabilizer phase");
    out.sign *= phase.real() > 0 ? 1 : -1;
    return out;
  };
  std::vector<SignedPauli> group;
  for (int mask = 0; mask < 16; ++mask) {
    SignedPauli acc{1, "IIII"};
    for (int g = 0; g < 4; ++g) {
      if (mask & (1 << g)) acc = multiply(acc, gens[g]);
    }
    group.push_back(acc);
  }
  return group;
}

}  // namespace owqc::cluster
