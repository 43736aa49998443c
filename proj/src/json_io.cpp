#include "owqc/json_io.hpp"

#include <cmath>
#include <stdexcept>

namespace owqc {

namespace {

int qubits_for_dim(std::size_t dim) {
  int n = 0;
  while ((std::size_t{1} << n) < dim) ++n;
  if ((std::size_t{1} << n) != dim) throw std::invalid_argument("dimension is not a power of two");
  return n;
}

}  // namespace

nlohmann::json complex_matrix_to_json(const Mat& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back({m(r, c).real(), m(r, c).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat complex_matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix json must be a 2d array");
  const auto rows = j.size();
  const auto cols = j.at(0).size();
  Mat m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    if (j.at(r).size() != cols) throw std::invalid_argument("ragged matrix json");
    for (std::size_t c = 0; c < cols; ++c) {
      const auto& pair = j.at(r).at(c);
      if (!pair.is_array() || pair.size() != 2) {
        throw std::invalid_argument("matrix entries must be [re, im] pairs");
      }
      m(r, c) = cplx(pair.at(0).get<double>(), pair.at(1).get<double>());
    }
  }
  return m;
}

nlohmann::json complex_vector_to_json(const Vec& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v(i).real(), v(i).imag()});
  return out;
}

Vec complex_vector_from_json(const nlohmann::json& j) {
  Vec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& pair = j.at(i);
    if (!pair.is_array() || pair.size() != 2) {
      throw std::invalid_argument("vector entries must be [re, im] pairs");
    }
    v(i) = cplx(pair.at(0).get<double>(), pair.at(1).get<double>());
  }
  return v;
}

void to_json(nlohmann::json& j, const DensityMatrix& rho) {
  j = nlohmann::json{{"n_qubits", rho.n_qubits}, {"data", complex_matrix_to_json(rho.elements)}};
}

void from_json(const nlohmann::json& j, DensityMatrix& rho) {
  Mat m = complex_matrix_from_json(j.at("data"));
  const int n = j.at("n_qubits").get<int>();
  if (m.rows() != m.cols() || qubits_for_dim(m.rows()) != n) {
    throw std::invalid_argument("density matrix size does not match n_qubits");
  }
  rho = DensityMatrix{n, std::move(m)};
}

void to_json(nlohmann::json& j, const PureState& psi) {
  j = nlohmann::json{{"n_qubits", psi.n_qubits}, {"data", complex_vector_to_json(psi.amplitudes)}};
}

void from_json(const nlohmann::json& j, PureState& psi) {
  Vec v = complex_vector_from_json(j.at("data"));
  const int n = j.at("n_qubits").get<int>();
  if (qubits_for_dim(v.size()) != n) {
    throw std::invalid_argument("state size does not match n_qubits");
  }
  psi = PureState{n, std::move(v)};
}

}  // namespace owqc

namespace owqc::cluster {

void to_json(nlohmann::json& j, const GraphSpec& g) {
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [a, b] : g.edges) edges.push_back({a, b});
  j = nlohmann::json{{"n", g.n_vertices}, {"edges", std::move(edges)}};
}

void from_json(const nlohmann::json& j, GraphSpec& g) {
  g.n_vertices = j.at("n").get<int>();
  g.edges.clear();
  for (const auto& e : j.at("edges")) {
    g.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  }
  g.validate();
}

void to_json(nlohmann::json& j, const NoiseModel& m) {
  j = nlohmann::json{{"visibility", m.visibility},
                     {"white_noise", m.white_noise},
                     {"theta1", m.theta1},
                     {"theta2", m.theta2}};
}

void from_json(const nlohmann::json& j, NoiseModel& m) {
  m.visibility = j.value("visibility", 1.0);
  m.white_noise = j.value("white_noise", 0.0);
  m.theta1 = j.value("theta1", 0.0);
  m.theta2 = j.value("theta2", 0.0);
  m.validate();
}

}  // namespace owqc::cluster

namespace owqc::mbqc {

void to_json(nlohmann::json& j, const MeasurementPattern& p) {
  nlohmann::json instructions = nlohmann::json::array();
  for (const auto& ins : p.instructions) {
    nlohmann::json basis;
    if (ins.basis.kind == Basis::Kind::ZRemoval) {
      basis = "Z";
    } else {
      basis = nlohmann::json{{"B", ins.basis.alpha}};
    }
    instructions.push_back(nlohmann::json{
        {"qubit", ins.qubit}, {"basis", std::move(basis)}, {"adapt_on", ins.adapt_on}});
  }
  nlohmann::json byproducts = nlohmann::json::array();
  for (const auto& rule : p.byproducts) {
    byproducts.push_back(nlohmann::json{
        {"output", rule.output_qubit}, {"x_from", rule.x_from}, {"z_from", rule.z_from}});
  }
  j = nlohmann::json{{"gate", gate_name(p.gate)},
                     {"resource", p.resource},
                     {"inputs", p.input_qubits},
                     {"outputs", p.output_qubits},
                     {"instructions", std::move(instructions)},
                     {"byproducts", std::move(byproducts)}};
}

void from_json(const nlohmann::json& j, MeasurementPattern& p) {
  p.gate = gate_from_name(j.at("gate").get<std::string>());
  p.resource = j.at("resource").get<cluster::GraphSpec>();
  p.input_qubits = j.at("inputs").get<std::vector<int>>();
  p.output_qubits = j.at("outputs").get<std::vector<int>>();
  p.instructions.clear();
  for (const auto& ins : j.at("instructions")) {
    MeasurementInstruction mi;
    mi.qubit = ins.at("qubit").get<int>();
    const auto& basis = ins.at("basis");
    if (basis.is_string() && basis.get<std::string>() == "Z") {
      mi.basis = Basis::z();
    } else {
      mi.basis = Basis::b(basis.at("B").get<double>());
    }
    mi.adapt_on = ins.value("adapt_on", std::vector<int>{});
    p.instructions.push_back(std::move(mi));
  }
  p.byproducts.clear();
  for (const auto& rule : j.at("byproducts")) {
    p.byproducts.push_back(ByproductRule{rule.at("output").get<int>(),
                                         rule.at("x_from").get<std::vector<int>>(),
                                         rule.at("z_from").get<std::vector<int>>()});
  }
  p.validate();
}

nlohmann::json run_result_to_json(const RunResult& r) {
  return nlohmann::json{{"qubits", r.record.qubits},
                        {"outcomes", r.record.outcomes},
                        {"probabilities", r.record.probabilities},
                        {"branch_probability", r.record.branch_probability},
                        {"acceptance_probability", r.acceptance_probability},
                        {"output", r.output}};
}

}  // namespace owqc::mbqc

namespace owqc::channels {

void to_json(nlohmann::json& j, const ChiMatrix& chi) {
  j = nlohmann::json{{"n_qubits", chi.n_qubits},
                     {"basis", "pauli"},
                     {"data", complex_matrix_to_json(chi.elements)},
                     {"tp_residual", tp_residual(chi)},
                     {"psd_min_eig", min_eigenvalue(chi)}};
}

void from_json(const nlohmann::json& j, ChiMatrix& chi) {
  if (j.value("basis", "pauli") != std::string("pauli")) {
    throw std::invalid_argument("unsupported chi basis");
  }
  Mat m = complex_matrix_from_json(j.at("data"));
  const int n = j.at("n_qubits").get<int>();
  if (static_cast<std::size_t>(m.rows()) != pauli_count(n)) {
    throw std::invalid_argument("chi size does not match n_qubits");
  }
  chi = ChiMatrix{n, std::move(m)};
}

}  // namespace owqc::channels
