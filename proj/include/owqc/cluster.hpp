#pragma once

#include <string>
#include <utility>
#include <vector>

#include "owqc/qstate.hpp"

namespace owqc::cluster {

/// Vertices and CZ edges of a graph state.
struct GraphSpec {
  int n_vertices = 0;
  std::vector<std::pair<int, int>> edges;

  void validate() const;
};

/// Calibrated noise acting on the fused resource: a single visibility scalar
/// for the coherence between the two GHZ branches, an isotropic white-noise
/// admixture, and the residual Bell-pair phases of the two sources.
struct NoiseModel {
  double visibility = 1.0;
  double white_noise = 0.0;
  double theta1 = 0.0;
  double theta2 = 0.0;

  void validate() const;
};

/// A normalized state together with the postselection acceptance probability.
struct PostselectedState {
  DensityMatrix state;
  double acceptance_probability = 1.0;
};

struct PostselectedPure {
  PureState state;
  double acceptance_probability = 1.0;
};

/// (|HH> + e^{i theta}|VV>)/sqrt(2).
PureState bell_pair(double theta);

/// Parity projection [|HH><HH| + |VV><VV|] on the two named modes, followed
/// by renormalization. Throws if the projector annihilates the state.
PostselectedPure fuse(const PureState& four_photon, int mode_a, int mode_b);
PostselectedState fuse(const DensityMatrix& four_photon, int mode_a, int mode_b);

/// Local rotations plus mode reordering taking the fused GHZ state (mode
/// order s1, i1, s2, i2) to the star cluster state on logical qubits 0-3.
/// The mode -> logical mapping is (i1, s1, s2, i2) -> (0, 1, 2, 3), so the
/// star center (qubit 2) is carried by the second signal photon.
PureState to_star(const PureState& ghz);
DensityMatrix to_star(const DensityMatrix& ghz);

/// prod_edges CZ |+>^n.
PureState graph_state(const GraphSpec& spec);

/// The four-qubit star graph: center 2 linked to 0, 1 and 3.
GraphSpec star_graph();

/// Star cluster state (|++H+> + |--V->)/sqrt(2) built directly.
PureState star_state_ideal();

/// Scales the coherence between the two GHZ branches by the visibility
/// (phase flips on the star center), then admixes white noise:
/// rho <- (1-p) rho + p I/2^n.
DensityMatrix apply_noise(const DensityMatrix& state, const NoiseModel& model);

/// Named calibrations: "ideal" and "paper-2013" (visibility 0.90, white
/// noise fitted so the star-state fidelity is exactly 0.66).
NoiseModel preset(const std::string& name);

/// Full resource pipeline: two Bell pairs -> fusion -> star rotation ->
/// calibrated noise. The acceptance probability reports the fusion success.
PostselectedState make_star(const NoiseModel& model);

/// Stabilizer generators of the star state, as Pauli strings over qubits 0-3.
std::vector<std::string> star_stabilizer_generators();

/// A Pauli string together with a +/-1 prefactor.
struct SignedPauli {
  int sign = 1;
  std::string labels;
};

/// All 16 products of the generators (including the identity string). Some
/// products pick up a -1 prefactor when X and Z factors meet on a qubit.
std::vector<SignedPauli> star_stabilizer_group();

}  // namespace owqc::cluster
