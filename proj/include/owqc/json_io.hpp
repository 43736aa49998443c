#pragma once

#include <json.hpp>

#include "owqc/channels.hpp"
#include "owqc/cluster.hpp"
#include "owqc/mbqc.hpp"
#include "owqc/qstate.hpp"

namespace owqc {

/// Complex matrices serialize as nested arrays of [re, im] pairs.
nlohmann::json complex_matrix_to_json(const Mat& m);
Mat complex_matrix_from_json(const nlohmann::json& j);
nlohmann::json complex_vector_to_json(const Vec& v);
Vec complex_vector_from_json(const nlohmann::json& j);

void to_json(nlohmann::json& j, const DensityMatrix& rho);
void from_json(const nlohmann::json& j, DensityMatrix& rho);
void to_json(nlohmann::json& j, const PureState& psi);
void from_json(const nlohmann::json& j, PureState& psi);

}  // namespace owqc

namespace owqc::cluster {

void to_json(nlohmann::json& j, const GraphSpec& g);
void from_json(const nlohmann::json& j, GraphSpec& g);
void to_json(nlohmann::json& j, const NoiseModel& m);
void from_json(const nlohmann::json& j, NoiseModel& m);

}  // namespace owqc::cluster

namespace owqc::mbqc {

void to_json(nlohmann::json& j, const MeasurementPattern& p);
void from_json(const nlohmann::json& j, MeasurementPattern& p);

/// Execution report: outcome record plus branch/acceptance probabilities.
nlohmann::json run_result_to_json(const RunResult& r);

}  // namespace owqc::mbqc

namespace owqc::channels {

/// chi JSON carries the matrix plus basis and diagnostic fields
/// ("basis": "pauli", "tp_residual", "psd_min_eig").
void to_json(nlohmann::json& j, const ChiMatrix& chi);
void from_json(const nlohmann::json& j, ChiMatrix& chi);

}  // namespace owqc::channels
