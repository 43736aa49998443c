#include "owqc/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "owqc/kernels.hpp"
#include "owqc/optim.hpp"
#include "owqc/rng.hpp"

namespace owqc::tomo {

namespace {

constexpr double kPsdTol = 1e-9;

Vec label_ket(char label, int bit) {
  switch (label) {
    case 'X': return bit == 0 ? kets::plus() : kets::minus();
    case 'Y': return bit == 0 ? kets::l() : kets::r();  // |L> is the +1 eigenstate
    case 'Z': return bit == 0 ? kets::h() : kets::v();
    default: throw std::invalid_argument("invalid basis label");
  }
}

Vec vec_of(const Mat& a) { return Eigen::Map<const Vec>(a.data(), a.size()); }

Mat unvec(const Vec& v, Eigen::Index d) { return Eigen::Map<const Mat>(v.data(), d, d); }

// Lower-triangular T with real diagonal packs into d^2 reals:
// row i holds re(T(i,0)), im(T(i,0)), ..., re(T(i,i)).
std::vector<double> pack_tri(const Mat& t) {
  const Eigen::Index d = t.rows();
  std::vector<double> x;
  x.reserve(static_cast<std::size_t>(d * d));
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      x.push_back(t(i, j).real());
      x.push_back(t(i, j).imag());
    }
    x.push_back(t(i, i).real());
  }
  return x;
}

Mat unpack_tri(const std::vector<double>& x, Eigen::Index d) {
  Mat t = Mat::Zero(d, d);
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      t(i, j) = cplx(x[k], x[k + 1]);
      k += 2;
    }
    t(i, i) = x[k++];
  }
  return t;
}

void pack_tri_gradient(const Mat& g, std::vector<double>& grad) {
  const Eigen::Index d = g.rows();
  std::size_t k = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      grad[k++] = 2.0 * g(i, j).real();
      grad[k++] = 2.0 * g(i, j).imag();
    }
    grad[k++] = 2.0 * g(i, i).real();
  }
}

// Eigenvalue clip to the PSD cone, renormalized to unit trace.
Mat psd_project_unit_trace(const Mat& h) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (h + h.adjoint()));
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  const double sum = ev.sum();
  if (sum < 1e-12) {
    return Mat::Identity(h.rows(), h.cols()) / static_cast<double>(h.rows());
  }
  ev /= sum;
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
}

Mat cholesky_factor(const Mat& rho) {
  const Eigen::Index d = rho.rows();
  const Mat blended = 0.999999 * rho + 1e-6 / static_cast<double>(d) * Mat::Identity(d, d);
  Eigen::LLT<Mat> llt(blended);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("Cholesky factorization of the initializer failed");
  }
  return llt.matrixL();
}

// Cost and d(cost)/d(rho) as coefficients for the projector sum.
double state_cost_terms(const detail::StateCostData& data, const Eigen::MatrixXd& probs,
                        Eigen::MatrixXd* coef) {
  double cost = 0.0;
  const auto rows = data.counts.rows();
  const auto cols = data.counts.cols();
  if (coef) coef->setZero(rows, cols);
  for (Eigen::Index s = 0; s < rows; ++s) {
    const double n_s = data.totals(s);
    if (n_s <= 0.0) continue;
    for (Eigen::Index o = 0; o < cols; ++o) {
      const double c = data.counts(s, o);
      if (!data.poisson) {
        const double r = n_s * probs(s, o) - c;
        const double w = data.weights(s, o);
        cost += w * r * r;
        if (coef) (*coef)(s, o) = 2.0 * w * r * n_s;
      } else {
        const double p = std::max(probs(s, o), 1e-12);
        cost += n_s * probs(s, o) - c * std::log(n_s * p);
        if (coef) (*coef)(s, o) = n_s - c / p;
      }
    }
  }
  return cost;
}

double evaluate_state_cost(const Mat& rho, const detail::StateCostData& data) {
  const Eigen::MatrixXd probs = kernels::born_probabilities(rho, data.kets);
  return state_cost_terms(data, probs, nullptr);
}

}  // namespace

namespace detail {

StateCostData make_state_cost_data(const MeasurementRecord& record, bool poisson) {
  StateCostData data;
  data.kets = settings_kets(record.settings);
  data.counts = record.counts;
  data.weights = record.counts.cwiseMax(1.0).cwiseInverse();
  data.totals = record.counts.rowwise().sum();
  data.poisson = poisson;
  data.dim = static_cast<Eigen::Index>(record.n_outcomes());
  return data;
}

double state_cost_and_gradient(const StateCostData& data, const std::vector<double>& x,
                               std::vector<double>& grad) {
  const Mat t = unpack_tri(x, data.dim);
  const Mat a = t * t.adjoint();
  const double tr_a = std::max(a.trace().real(), 1e-300);
  const Eigen::MatrixXd probs = kernels::born_probabilities(a, data.kets) / tr_a;
  Eigen::MatrixXd coef;
  const double cost = state_cost_terms(data, probs, &coef);
  const Mat m_rho = kernels::weighted_projector_sum(data.kets, coef);
  const double rho_m = (a * m_rho).trace().real() / tr_a;
  const Mat m_a = (m_rho - rho_m * Mat::Identity(data.dim, data.dim)) / tr_a;
  pack_tri_gradient(m_a * t, grad);
  return cost;
}

void state_residuals_and_jacobian(const StateCostData& data, const Eigen::VectorXd& x,
                                  Eigen::VectorXd& r, Eigen::MatrixXd* jacobian) {
  const Eigen::Index d = data.dim;
  const auto n_settings = static_cast<Eigen::Index>(data.kets.size());
  const std::vector<double> xv(x.data(), x.data() + x.size());
  const Mat t = unpack_tri(xv, d);
  const double tr_a = std::max(t.squaredNorm(), 1e-300);

  r.resize(n_settings * d);
  if (jacobian) jacobian->setZero(n_settings * d, d * d);

  // scatter a d x d complex sensitivity matrix into the packed order
  auto scatter = [&](Eigen::Index row, const Mat& sens) {
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < i; ++j) {
        (*jacobian)(row, k++) = sens(i, j).real();
        (*jacobian)(row, k++) = sens(i, j).imag();
      }
      (*jacobian)(row, k++) = sens(i, i).real();
    }
  };

  for (Eigen::Index s = 0; s < n_settings; ++s) {
    const double n_s = data.totals(s);
    const Mat y = data.kets[s].adjoint() * t;
    for (Eigen::Index o = 0; o < d; ++o) {
      const Eigen::Index row = s * d + o;
      const double p = y.row(o).squaredNorm() / tr_a;
      const double sw = std::sqrt(data.weights(s, o));
      r(row) = sw * (n_s * p - data.counts(s, o));
      if (jacobian && n_s > 0.0) {
        // d(numer) = 2 Re[conj(ket_o Y_o) dT], d(trA) = 2 Re[conj(T) dT]
        const Mat sens = (2.0 * sw * n_s / tr_a) *
                         (data.kets[s].col(o) * y.row(o) - p * t);
        scatter(row, sens);
      }
    }
  }
}

ChiFitContext make_chi_fit_context(int arity,
                                   const std::map<std::string, DensityMatrix>& probe_outputs) {
  const auto combos = probe_combinations(arity);
  const Eigen::Index d = Eigen::Index{1} << arity;
  const auto nb = static_cast<Eigen::Index>(channels::pauli_count(arity));
  const Eigen::Index n_param = nb * nb;

  std::vector<Mat> paulis(nb);
  for (Eigen::Index m = 0; m < nb; ++m) paulis[m] = channels::pauli_basis_op(arity, m);

  ChiFitContext ctx;
  ctx.arity = arity;
  ctx.basis_size = nb;
  ctx.gram = Mat::Zero(n_param, n_param);
  ctx.linear = Vec::Zero(n_param);
  ctx.offset = 0.0;
  ctx.stacked.resize(static_cast<Eigen::Index>(combos.size()) * d * d, n_param);
  ctx.stacked_rhs.resize(ctx.stacked.rows());

  // Predicted outputs are linear in chi: column q = n*nb + m holds
  // vec(E_m rho_j E_n^dag), matching the column-stacked vec(chi).
  for (std::size_t j = 0; j < combos.size(); ++j) {
    const auto it = probe_outputs.find(combos[j]);
    if (it == probe_outputs.end()) {
      throw std::invalid_argument("missing probe combination: " + combos[j]);
    }
    if (it->second.dim() != static_cast<std::size_t>(d)) {
      throw std::invalid_argument("probe output dimension mismatch");
    }
    const Mat rho_j = probe_input(combos[j]).elements;
    Mat a_j(d * d, n_param);
    for (Eigen::Index m = 0; m < nb; ++m) {
      const Mat left = paulis[m] * rho_j;
      for (Eigen::Index n = 0; n < nb; ++n) {
        a_j.col(n * nb + m) = vec_of(left * paulis[n]);
      }
    }
    const Vec data_j = vec_of(it->second.elements);
    ctx.gram += a_j.adjoint() * a_j;
    ctx.linear += a_j.adjoint() * data_j;
    ctx.offset += data_j.squaredNorm();
    ctx.stacked.middleRows(static_cast<Eigen::Index>(j) * d * d, d * d) = a_j;
    ctx.stacked_rhs.segment(static_cast<Eigen::Index>(j) * d * d, d * d) = data_j;
  }

  ctx.tp_map.resize(d * d, n_param);
  for (Eigen::Index m = 0; m < nb; ++m) {
    for (Eigen::Index n = 0; n < nb; ++n) {
      ctx.tp_map.col(n * nb + m) = vec_of(paulis[n] * paulis[m]);
    }
  }
  ctx.tp_target = vec_of(Mat::Identity(d, d));
  return ctx;
}

double chi_cost_and_gradient(const ChiFitContext& ctx, double penalty,
                             const std::vector<double>& x, std::vector<double>& grad) {
  const Mat t = unpack_tri(x, ctx.basis_size);
  const Mat chi = t * t.adjoint();
  const Vec v = Eigen::Map<const Vec>(chi.data(), chi.size());
  const Vec gv = ctx.gram * v;
  const Vec kv = ctx.tp_map * v - ctx.tp_target;
  const double cost = (v.dot(gv)).real() - 2.0 * (ctx.linear.dot(v)).real() + ctx.offset +
                      penalty * kv.squaredNorm();
  const Vec h = gv - ctx.linear + penalty * (ctx.tp_map.adjoint() * kv);
  const Mat hm = Eigen::Map<const Mat>(h.data(), ctx.basis_size, ctx.basis_size);
  const Mat m = hm + hm.adjoint();
  pack_tri_gradient(m * t, grad);
  return cost;
}

}  // namespace detail

std::vector<BasisSetting> all_settings(int n_qubits) {
  if (n_qubits < 1) throw std::invalid_argument("need at least one qubit");
  std::vector<BasisSetting> out{""};
  for (int q = 0; q < n_qubits; ++q) {
    std::vector<BasisSetting> next;
    next.reserve(out.size() * 3);
    for (const auto& prefix : out) {
      for (char c : {'X', 'Y', 'Z'}) next.push_back(prefix + c);
    }
    out = std::move(next);
  }
  return out;
}

Mat setting_kets(const BasisSetting& setting) {
  const int n = static_cast<int>(setting.size());
  const std::size_t dim = std::size_t{1} << n;
  Mat kets(dim, dim);
  for (std::size_t o = 0; o < dim; ++o) {
    Vec col = Vec::Ones(1);
    for (int q = 0; q < n; ++q) {
      const Vec k = label_ket(setting[q], bit_of(o, q, n));
      Vec next(col.size() * 2);
      for (Eigen::Index i = 0; i < col.size(); ++i) {
        next(2 * i) = col(i) * k(0);
        next(2 * i + 1) = col(i) * k(1);
      }
      col = std::move(next);
    }
    kets.col(o) = col;
  }
  return kets;
}

std::vector<Mat> settings_kets(const std::vector<BasisSetting>& settings) {
  std::vector<Mat> out;
  out.reserve(settings.size());
  for (const auto& s : settings) out.push_back(setting_kets(s));
  return out;
}

void MeasurementRecord::validate() const {
  if (n_qubits < 1) throw std::invalid_argument("record needs at least one qubit");
  if (settings.empty()) throw std::invalid_argument("record has no settings");
  if (counts.rows() != static_cast<Eigen::Index>(settings.size()) ||
      counts.cols() != static_cast<Eigen::Index>(n_outcomes())) {
    throw std::invalid_argument("count matrix shape mismatch");
  }
  if ((counts.array() < 0.0).any()) throw std::invalid_argument("negative count");
  for (const auto& s : settings) {
    if (static_cast<int>(s.size()) != n_qubits) {
      throw std::invalid_argument("setting length mismatch");
    }
    for (char c : s) {
      if (c != 'X' && c != 'Y' && c != 'Z') throw std::invalid_argument("invalid setting label");
    }
  }
}

namespace {

void require_complete(const MeasurementRecord& record) {
  record.validate();
  const auto want = all_settings(record.n_qubits);
  for (const auto& w : want) {
    if (std::find(record.settings.begin(), record.settings.end(), w) == record.settings.end()) {
      throw std::invalid_argument("record is not tomographically complete (missing " + w + ")");
    }
  }
}

}  // namespace

MeasurementRecord simulate_counts(const DensityMatrix& rho,
                                  const std::vector<BasisSetting>& settings, double shots,
                                  std::uint64_t seed) {
  if (shots <= 0.0) throw std::invalid_argument("shots must be positive");
  MeasurementRecord record;
  record.n_qubits = rho.n_qubits;
  record.settings = settings;
  record.shots_per_setting = shots;
  const Eigen::MatrixXd probs =
      kernels::born_probabilities(rho.elements, settings_kets(settings));
  record.counts.resize(probs.rows(), probs.cols());
  std::mt19937_64 rng(seed);
  for (Eigen::Index s = 0; s < probs.rows(); ++s) {
    for (Eigen::Index o = 0; o < probs.cols(); ++o) {
      const double mean = shots * std::clamp(probs(s, o), 0.0, 1.0);
      if (mean <= 0.0) {
        record.counts(s, o) = 0.0;
      } else {
        std::poisson_distribution<long long> poisson(mean);
        record.counts(s, o) = static_cast<double>(poisson(rng));
      }
    }
  }
  record.validate();
  return record;
}

MeasurementRecord exact_record(const DensityMatrix& rho,
                               const std::vector<BasisSetting>& settings, double shots) {
  if (shots <= 0.0) throw std::invalid_argument("shots must be positive");
  MeasurementRecord record;
  record.n_qubits = rho.n_qubits;
  record.settings = settings;
  record.shots_per_setting = shots;
  record.counts =
      shots * kernels::born_probabilities(rho.elements, settings_kets(settings)).cwiseMax(0.0);
  record.validate();
  return record;
}

MeasurementRecord resample_poisson(const MeasurementRecord& record, std::uint64_t seed) {
  MeasurementRecord out = record;
  std::mt19937_64 rng(seed);
  for (Eigen::Index s = 0; s < out.counts.rows(); ++s) {
    for (Eigen::Index o = 0; o < out.counts.cols(); ++o) {
      const double mean = record.counts(s, o);
      if (mean <= 0.0) {
        out.counts(s, o) = 0.0;
      } else {
        std::poisson_distribution<long long> poisson(mean);
        out.counts(s, o) = static_cast<double>(poisson(rng));
      }
    }
  }
  return out;
}

DensityEstimate linear_reconstruct(const MeasurementRecord& record) {
  require_complete(record);
  const int n = record.n_qubits;
  const std::size_t dim = record.n_outcomes();
  const std::size_t n_pauli = std::size_t{1} << (2 * n);
  const Eigen::VectorXd totals = record.counts.rowwise().sum();

  Mat rho = Mat::Zero(dim, dim);
  for (std::size_t p = 0; p < n_pauli; ++p) {
    const std::string labels = channels::pauli_label(n, p);
    double est = 1.0;  // the identity string
    if (p != 0) {
      double acc = 0.0;
      int used = 0;
      for (std::size_t s = 0; s < record.settings.size(); ++s) {
        if (totals(s) <= 0.0) continue;
        bool compatible = true;
        for (int q = 0; q < n; ++q) {
          if (labels[q] != 'I' && labels[q] != record.settings[s][q]) {
            compatible = false;
            break;
          }
        }
        if (!compatible) continue;
        double e = 0.0;
        for (std::size_t o = 0; o < dim; ++o) {
          int sign = 1;
          for (int q = 0; q < n; ++q) {
            if (labels[q] != 'I' && bit_of(o, q, n) == 1) sign = -sign;
          }
          e += sign * record.counts(s, o);
        }
        acc += e / totals(s);
        ++used;
      }
      est = used > 0 ? acc / used : 0.0;
    }
    if (est != 0.0) rho += est * pauli_string_matrix(labels);
  }
  rho /= static_cast<double>(dim);

  DensityEstimate out;
  out.rho = DensityMatrix{n, std::move(rho)};
  out.min_eigenvalue = out.rho.min_eigenvalue();
  out.psd = out.min_eigenvalue >= -kPsdTol;
  out.cost = evaluate_state_cost(out.rho.elements, detail::make_state_cost_data(record, false));
  return out;
}

DensityEstimate mle_state(const MeasurementRecord& record, const MleOptions& options) {
  require_complete(record);
  const Eigen::Index d = static_cast<Eigen::Index>(record.n_outcomes());
  const detail::StateCostData data =
      detail::make_state_cost_data(record, options.poisson_likelihood);

  Mat start;
  if (options.initializer) {
    if (options.initializer->dim() != static_cast<std::size_t>(d)) {
      throw std::invalid_argument("initializer dimension mismatch");
    }
    start = options.initializer->elements;
  } else {
    start = linear_reconstruct(record).rho.elements;
  }
  const Mat t0 = cholesky_factor(psd_project_unit_trace(start));

  optim::Result res;
  if (options.poisson_likelihood) {
    auto cost_fn = [&](const std::vector<double>& x, std::vector<double>& grad) {
      return detail::state_cost_and_gradient(data, x, grad);
    };
    optim::Options opt;
    opt.max_iterations = options.max_iterations;
    opt.cost_tolerance = options.cost_tolerance;
    res = optim::minimize_bfgs(cost_fn, pack_tri(t0), opt);
  } else {
    // least squares in the Cholesky factor: Levenberg-Marquardt
    auto residuals_fn = [&](const Eigen::VectorXd& x, Eigen::VectorXd& r,
                            Eigen::MatrixXd* jac) {
      detail::state_residuals_and_jacobian(data, x, r, jac);
    };
    optim::LmOptions opt;
    opt.max_iterations = options.max_iterations;
    opt.cost_tolerance = options.cost_tolerance;
    // packing is an isometry, so this pins Tr(T T^dag) = 1 (a flat
    // direction of the normalized cost)
    opt.project = [](Eigen::VectorXd& x) { x /= std::max(x.norm(), 1e-150); };
    res = optim::minimize_lm(residuals_fn, pack_tri(t0), opt);
  }

  const Mat t = unpack_tri(res.x, d);
  Mat a = t * t.adjoint();
  a /= a.trace().real();

  DensityEstimate out;
  out.rho = DensityMatrix{record.n_qubits, 0.5 * (a + a.adjoint())};
  out.cost = res.value;
  out.min_eigenvalue = out.rho.min_eigenvalue();
  out.psd = out.min_eigenvalue >= -kPsdTol;
  out.iterations = res.iterations;
  out.converged = res.converged;
  return out;
}

std::vector<std::string> probe_combinations(int arity) {
  if (arity < 1) throw std::invalid_argument("arity must be positive");
  std::vector<std::string> out{""};
  for (int q = 0; q < arity; ++q) {
    std::vector<std::string> next;
    for (const auto& prefix : out) {
      for (char c : {'H', 'V', '+', 'L'}) next.push_back(prefix + c);
    }
    out = std::move(next);
  }
  return out;
}

DensityMatrix probe_input(const std::string& combination) {
  Vec amp = Vec::Ones(1);
  for (char c : combination) {
    Vec k;
    switch (c) {
      case 'H': k = kets::h(); break;
      case 'V': k = kets::v(); break;
      case '+': k = kets::plus(); break;
      case 'L': k = kets::l(); break;
      default: throw std::invalid_argument("invalid probe label");
    }
    Vec next(amp.size() * 2);
    for (Eigen::Index i = 0; i < amp.size(); ++i) {
      next(2 * i) = amp(i) * k(0);
      next(2 * i + 1) = amp(i) * k(1);
    }
    amp = std::move(next);
  }
  return DensityMatrix::from_pure(PureState::from_amplitudes(amp));
}

ProcessEstimate process_tomography(int arity,
                                   const std::map<std::string, DensityMatrix>& probe_outputs,
                                   const ProcessOptions& options) {
  const detail::ChiFitContext ctx = detail::make_chi_fit_context(arity, probe_outputs);
  const Eigen::Index nb = ctx.basis_size;

  // Warm start from the unconstrained least squares solution (or the
  // caller's channel), eigenvalue-clipped onto the PSD trace-1 set.
  bool degenerate = false;
  Mat chi0;
  if (options.initializer) {
    if (options.initializer->basis_size() != static_cast<std::size_t>(nb)) {
      throw std::invalid_argument("initializer dimension mismatch");
    }
    chi0 = options.initializer->elements;
  } else {
    Eigen::ColPivHouseholderQR<Mat> qr(ctx.stacked);
    degenerate = qr.rank() < nb * nb;
    chi0 = unvec(qr.solve(ctx.stacked_rhs), nb);
  }
  chi0 = 0.5 * (chi0 + chi0.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(chi0);
  Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
  if (ev.sum() < 1e-9) ev.setConstant(1.0 / static_cast<double>(nb));
  ev /= ev.sum();
  chi0 = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();

  optim::Options opt;
  opt.max_iterations = options.mle.max_iterations;
  opt.cost_tolerance = options.mle.cost_tolerance;

  double lambda = options.initial_penalty;
  std::vector<double> x = pack_tri(cholesky_factor(chi0));
  ProcessEstimate out;
  out.degenerate = degenerate;
  double data_cost = 0.0;
  int total_iterations = 0;
  bool converged = false;

  for (int esc = 0; esc < options.max_escalations; ++esc) {
    auto cost_fn = [&](const std::vector<double>& params, std::vector<double>& grad) {
      return detail::chi_cost_and_gradient(ctx, lambda, params, grad);
    };
    const optim::Result res = optim::minimize_bfgs(cost_fn, x, opt);
    x = res.x;
    total_iterations += res.iterations;

    const Mat tt = unpack_tri(x, nb);
    const Mat chi = tt * tt.adjoint();
    out.chi = channels::ChiMatrix{arity, 0.5 * (chi + chi.adjoint())};
    out.tp_residual = channels::tp_residual(out.chi);
    const Vec v = vec_of(out.chi.elements);
    data_cost = (v.dot(ctx.gram * v)).real() - 2.0 * (ctx.linear.dot(v)).real() + ctx.offset;
    if (out.tp_residual < options.tp_tolerance) {
      converged = true;
      break;
    }
    lambda *= options.penalty_growth;
  }

  out.cost = data_cost;
  out.min_eigenvalue = channels::min_eigenvalue(out.chi);
  out.iterations = total_iterations;
  out.converged = converged && out.tp_residual < options.tp_tolerance;
  return out;
}

MonteCarloStats monte_carlo_errors(const MeasurementRecord& record,
                                   const std::function<double(const MeasurementRecord&)>& estimator,
                                   int n_samples, std::uint64_t seed) {
  if (n_samples < 2) throw std::invalid_argument("need at least two Monte Carlo samples");
  const std::vector<double> values = kernels::map_indexed(n_samples, [&](int i) {
    return estimator(resample_poisson(record, split_seed(seed, static_cast<std::uint64_t>(i))));
  });
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n_samples;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= (n_samples - 1);
  return MonteCarloStats{mean, std::sqrt(var)};
}

std::string outcome_bits(int n_qubits, std::size_t outcome) {
  std::string bits(n_qubits, '0');
  for (int q = 0; q < n_qubits; ++q) {
    bits[q] = bit_of(outcome, q, n_qubits) ? '1' : '0';
  }
  return bits;
}

void write_counts_csv(std::ostream& out, const MeasurementRecord& record) {
  record.validate();
  out << "setting,outcome,count\n";
  char buf[64];
  for (std::size_t s = 0; s < record.settings.size(); ++s) {
    for (std::size_t o = 0; o < record.n_outcomes(); ++o) {
      const double c = record.counts(s, o);
      if (c == std::floor(c) && std::abs(c) < 1e15) {
        std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(c));
      } else {
        std::snprintf(buf, sizeof buf, "%.17g", c);
      }
      out << record.settings[s] << ',' << outcome_bits(record.n_qubits, o) << ',' << buf << '\n';
    }
  }
}

MeasurementRecord read_counts_csv(std::istream& in) {
  std::string line;
  std::vector<std::string> settings;
  std::vector<std::vector<double>> rows;
  int n_qubits = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "setting,outcome,count") continue;
    std::stringstream ss(line);
    std::string setting, outcome, count;
    if (!std::getline(ss, setting, ',') || !std::getline(ss, outcome, ',') ||
        !std::getline(ss, count)) {
      throw std::invalid_argument("malformed counts row: " + line);
    }
    if (n_qubits == 0) n_qubits = static_cast<int>(setting.size());
    std::size_t idx = 0;
    for (char c : outcome) {
      if (c != '0' && c != '1') throw std::invalid_argument("malformed outcome: " + outcome);
      idx = idx * 2 + (c == '1');
    }
    if (settings.empty() || settings.back() != setting) {
      settings.push_back(setting);
      rows.emplace_back(std::size_t{1} << n_qubits, 0.0);
    }
    rows.back().at(idx) = std::stod(count);
  }
  if (settings.empty()) throw std::invalid_argument("empty counts file");
  MeasurementRecord record;
  record.n_qubits = n_qubits;
  record.settings = settings;
  record.counts.resize(settings.size(), std::size_t{1} << n_qubits);
  for (std::size_t s = 0; s < rows.size(); ++s) {
    for (std::size_t o = 0; o < rows[s].size(); ++o) record.counts(s, o) = rows[s][o];
  }
  record.shots_per_setting = record.counts.rowwise().sum().mean();
  record.validate();
  return record;
}

}  // namespace owqc::tomo
