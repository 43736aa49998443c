#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "owqc/cluster.hpp"
#include "owqc/tomography.hpp"
#include "test_util.hpp"

using namespace owqc;
using namespace owqc::tomo;
using owqc_test::max_abs_diff;

namespace {

DensityMatrix pure_dm(const Vec& ket) {
  return DensityMatrix::from_pure(PureState::from_amplitudes(ket));
}

std::map<std::string, DensityMatrix> exact_probe_outputs(const channels::ChiMatrix& chi) {
  std::map<std::string, DensityMatrix> outputs;
  for (const auto& combo : probe_combinations(chi.n_qubits)) {
    outputs.emplace(combo, channels::apply_chi(chi, probe_input(combo)));
  }
  return outputs;
}

void check_gradient(const std::function<double(const std::vector<double>&,
                                               std::vector<double>&)>& fn,
                    std::vector<double> x) {
  std::vector<double> grad(x.size());
  const double f0 = fn(x, grad);
  CHECK(std::isfinite(f0));
  std::mt19937_64 rng(321);
  std::uniform_int_distribution<std::size_t> pick(0, x.size() - 1);
  const double h = 1e-6;
  std::vector<double> dummy(x.size());
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t k = pick(rng);
    std::vector<double> xp = x, xm = x;
    xp[k] += h;
    xm[k] -= h;
    const double fd = (fn(xp, dummy) - fn(xm, dummy)) / (2 * h);
    CHECK(grad[k] == doctest::Approx(fd).epsilon(1e-4).scale(1.0));
  }
}

}  // namespace

TEST_CASE("setting enumeration and kets") {
  CHECK(all_settings(4).size() == 81);
  CHECK(all_settings(1) == std::vector<BasisSetting>{"X", "Y", "Z"});
  const Mat kets = setting_kets("Y");
  CHECK((kets.col(0) - owqc::kets::l()).norm() < kTol);  // outcome 0 = +1 eigenstate
  CHECK((kets.col(1) - owqc::kets::r()).norm() < kTol);
  // columns of any setting form an orthonormal basis
  const Mat two = setting_kets("XZ");
  CHECK(max_abs_diff(two.adjoint() * two, Mat::Identity(4, 4)) < kTol);
}

TEST_CASE("simulate_counts") {
  SUBCASE("deterministic outcomes produce Poisson(0) zeros") {
    const auto rec = simulate_counts(pure_dm(kets::h()), {"Z"}, 1000, 7);
    CHECK(rec.counts(0, 1) == 0.0);
    CHECK(rec.counts(0, 0) > 800);
    CHECK(rec.counts(0, 0) < 1200);
  }
  SUBCASE("maximally mixed is unbiased at large shots") {
    const auto rec = simulate_counts(DensityMatrix::maximally_mixed(1), {"X"}, 2e5, 11);
    const double ratio = rec.counts(0, 0) / rec.counts(0, 1);
    CHECK(std::abs(ratio - 1.0) < 0.02);
  }
  SUBCASE("same seed, same record") {
    const DensityMatrix rho = owqc_test::random_density(2, 5);
    const auto a = simulate_counts(rho, all_settings(2), 500, 42);
    const auto b = simulate_counts(rho, all_settings(2), 500, 42);
    CHECK((a.counts - b.counts).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("shots must be positive") {
    CHECK_THROWS_AS(simulate_counts(pure_dm(kets::h()), {"Z"}, 0, 1), std::invalid_argument);
  }
}

TEST_CASE("linear_reconstruct") {
  SUBCASE("exact record of the maximally mixed state") {
    const auto rec = exact_record(DensityMatrix::maximally_mixed(2), all_settings(2), 1600);
    const auto est = linear_reconstruct(rec);
    CHECK(max_abs_diff(est.rho.elements, DensityMatrix::maximally_mixed(2).elements) < kTol);
    CHECK(est.psd);
  }
  SUBCASE("exact record of |+><+|") {
    const auto est = linear_reconstruct(exact_record(pure_dm(kets::plus()), all_settings(1), 900));
    CHECK(max_abs_diff(est.rho.elements, pure_dm(kets::plus()).elements) < kTol);
  }
  SUBCASE("exact record of |L><L| pins the Y sign convention") {
    const auto est = linear_reconstruct(exact_record(pure_dm(kets::l()), all_settings(1), 900));
    CHECK(max_abs_diff(est.rho.elements, pure_dm(kets::l()).elements) < kTol);
  }
  SUBCASE("finite counts stay Hermitian with unit trace; negatives get flagged") {
    const DensityMatrix star = DensityMatrix::from_pure(cluster::star_state_ideal());
    const auto est = linear_reconstruct(simulate_counts(star, all_settings(4), 600, 3));
    CHECK(est.rho.is_hermitian());
    CHECK(est.rho.trace_real() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(est.psd == (est.min_eigenvalue >= -1e-9));
  }
  SUBCASE("incomplete basis set throws") {
    auto rec = exact_record(pure_dm(kets::plus()), {"X", "Y"}, 100);
    CHECK_THROWS_AS(linear_reconstruct(rec), std::invalid_argument);
  }
}

TEST_CASE("state cost gradients match finite differences") {
  // a 2-qubit slice of the noisy star keeps the finite differences fast
  const DensityMatrix star = cluster::make_star(cluster::preset("paper-2013")).state;
  const DensityMatrix red = partial_trace(star, {0, 3});
  const auto rec2 = simulate_counts(red, all_settings(2), 400, 9);
  std::mt19937_64 rng(77);
  std::normal_distribution<double> dist(0.0, 0.4);
  std::vector<double> x(16);
  for (auto& v : x) v = dist(rng);
  for (bool poisson : {false, true}) {
    const auto data = detail::make_state_cost_data(rec2, poisson);
    check_gradient(
        [&](const std::vector<double>& p, std::vector<double>& g) {
          return detail::state_cost_and_gradient(data, p, g);
        },
        x);
  }
}

TEST_CASE("chi cost gradients match finite differences") {
  const auto outputs = exact_probe_outputs(
      channels::depolarizing_chi(gates::hadamard().unitary, 0.85));
  const auto ctx = detail::make_chi_fit_context(1, outputs);
  std::mt19937_64 rng(78);
  std::normal_distribution<double> dist(0.0, 0.4);
  std::vector<double> x(16);
  for (auto& v : x) v = dist(rng);
  for (double penalty : {0.0, 1e3}) {
    check_gradient(
        [&](const std::vector<double>& p, std::vector<double>& g) {
          return detail::chi_cost_and_gradient(ctx, penalty, p, g);
        },
        x);
  }
}

TEST_CASE("mle_state") {
  SUBCASE("round trip at 1e5 shots recovers the star state") {
    const DensityMatrix star = DensityMatrix::from_pure(cluster::star_state_ideal());
    const auto rec = simulate_counts(star, all_settings(4), 1e5, 21);
    const auto est = mle_state(rec);
    CHECK(est.converged);
    CHECK(state_fidelity(cluster::star_state_ideal(), est.rho) > 0.999);
    CHECK(est.min_eigenvalue >= -1e-9);
    CHECK(est.rho.trace_real() == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("noisy preset at 1e4 shots lands near the calibrated fidelity") {
    const DensityMatrix star = cluster::make_star(cluster::preset("paper-2013")).state;
    const auto rec = simulate_counts(star, all_settings(4), 1e4, 22);
    const auto est = mle_state(rec);
    CHECK(state_fidelity(cluster::star_state_ideal(), est.rho) ==
          doctest::Approx(0.66).epsilon(0.02 / 0.66));
  }
  SUBCASE("exact record agrees with linear inversion when the latter is PSD") {
    const DensityMatrix rho = owqc_test::random_density(1, 55);
    const auto rec = exact_record(rho, all_settings(1), 1e6);
    const auto lin = linear_reconstruct(rec);
    REQUIRE(lin.psd);
    const auto est = mle_state(rec);
    CHECK(max_abs_diff(est.rho.elements, lin.rho.elements) < 1e-6);
  }
  SUBCASE("adversarial counts still give a PSD unit-trace state") {
    MeasurementRecord rec;
    rec.n_qubits = 1;
    rec.settings = all_settings(1);
    rec.counts.resize(3, 2);
    rec.counts << 997, 3, 0, 0, 550, 450;
    rec.shots_per_setting = 1000;
    const auto est = mle_state(rec);
    CHECK(est.min_eigenvalue >= -1e-9);
    CHECK(est.rho.trace_real() == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("iteration cap reports non-convergence with the best iterate") {
    const DensityMatrix star = DensityMatrix::from_pure(cluster::star_state_ideal());
    const auto rec = simulate_counts(star, all_settings(4), 600, 1);
    MleOptions opt;
    opt.max_iterations = 1;
    const auto est = mle_state(rec, opt);
    CHECK_FALSE(est.converged);
    CHECK(est.rho.trace_real() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(est.min_eigenvalue >= -1e-9);
  }
  SUBCASE("poisson likelihood variant also recovers the state") {
    const DensityMatrix rho = owqc_test::random_density(1, 60);
    const auto rec = simulate_counts(rho, all_settings(1), 5e4, 61);
    MleOptions opt;
    opt.poisson_likelihood = true;
    const auto est = mle_state(rec, opt);
    CHECK(fidelity(est.rho, rho) > 0.999);
  }
}

TEST_CASE("process_tomography") {
  SUBCASE("identity channel from exact data") {
    const auto est =
        process_tomography(1, exact_probe_outputs(channels::chi_of_unitary(
                                  gates::identity1().unitary)));
    CHECK(est.converged);
    Mat expect = Mat::Zero(4, 4);
    expect(0, 0) = 1.0;
    CHECK(max_abs_diff(est.chi.elements, expect) < 1e-5);
  }
  SUBCASE("hadamard structure from exact data") {
    const auto est = process_tomography(
        1, exact_probe_outputs(channels::chi_of_unitary(gates::hadamard().unitary)));
    CHECK(est.chi.elements(1, 1).real() == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(est.chi.elements(3, 3).real() == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(est.chi.elements(1, 3).real() == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(est.tp_residual < 1e-6);
    CHECK(est.min_eigenvalue > -1e-7);
  }
  SUBCASE("round trip across the named channels") {
    // the overlap formula saturates at the purity for mixed channels, so
    // recovery is judged by the normalized similarity (1 iff proportional)
    const std::vector<channels::ChiMatrix> targets = {
        channels::chi_of_unitary(gates::t_gate().unitary),
        channels::depolarizing_chi(gates::hadamard().unitary, 0.8),
    };
    for (const auto& target : targets) {
      const auto est = process_tomography(target.n_qubits, exact_probe_outputs(target));
      CHECK(channels::channel_similarity(est.chi, target) > 0.999);
      CHECK(owqc_test::max_abs_diff(est.chi.elements, target.elements) < 1e-4);
      CHECK(est.tp_residual < 1e-6);
      CHECK(est.min_eigenvalue > -1e-7);
      CHECK_FALSE(est.degenerate);
    }
  }
  SUBCASE("missing probe combination throws") {
    auto outputs = exact_probe_outputs(channels::chi_of_unitary(gates::hadamard().unitary));
    outputs.erase("L");
    CHECK_THROWS_AS(process_tomography(1, outputs), std::invalid_argument);
  }
}

TEST_CASE("monte_carlo_errors") {
  const DensityMatrix star = cluster::make_star(cluster::preset("paper-2013")).state;
  SUBCASE("trace functional of the linear estimate is pinned") {
    const auto rec = simulate_counts(star, all_settings(4), 600, 31);
    const auto stats = monte_carlo_errors(
        rec, [](const MeasurementRecord& r) { return linear_reconstruct(r).rho.trace_real(); },
        20, 5);
    CHECK(stats.mean == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(stats.stddev < 1e-9);
  }
  SUBCASE("error bars shrink roughly as 1/sqrt(shots)") {
    const PureState target = cluster::star_state_ideal();
    auto fidelity_of = [&](const MeasurementRecord& r) {
      return state_fidelity(target, linear_reconstruct(r).rho);
    };
    const auto rec1 = simulate_counts(star, all_settings(4), 500, 41);
    const auto rec4 = simulate_counts(star, all_settings(4), 2000, 42);
    const auto s1 = monte_carlo_errors(rec1, fidelity_of, 100, 7);
    const auto s4 = monte_carlo_errors(rec4, fidelity_of, 100, 8);
    const double ratio = s1.stddev / s4.stddev;
    CHECK(ratio > 2.0 / 1.3);
    CHECK(ratio < 2.0 * 1.3);
  }
  SUBCASE("deterministic given the seed") {
    const auto rec = simulate_counts(star, all_settings(4), 300, 51);
    auto estimator = [](const MeasurementRecord& r) { return r.counts.sum(); };
    const auto a = monte_carlo_errors(rec, estimator, 10, 99);
    const auto b = monte_carlo_errors(rec, estimator, 10, 99);
    CHECK(a.mean == b.mean);
    CHECK(a.stddev == b.stddev);
  }
  SUBCASE("needs at least two samples") {
    const auto rec = simulate_counts(star, all_settings(4), 300, 52);
    CHECK_THROWS_AS(monte_carlo_errors(
                        rec, [](const MeasurementRecord&) { return 0.0; }, 1, 1),
                    std::invalid_argument);
  }
}

TEST_CASE("counts csv round trip") {
  const DensityMatrix rho = owqc_test::random_density(2, 71);
  const auto rec = simulate_counts(rho, all_settings(2), 700, 72);
  std::stringstream ss;
  write_counts_csv(ss, rec);
  // header + settings x outcomes data rows
  std::string line;
  int lines = 0;
  while (std::getline(ss, line)) ++lines;
  CHECK(lines == 1 + 9 * 4);
  ss.clear();
  ss.seekg(0);
  const auto back = read_counts_csv(ss);
  CHECK(back.n_qubits == rec.n_qubits);
  CHECK(back.settings == rec.settings);
  CHECK((back.counts - rec.counts).cwiseAbs().maxCoeff() == 0.0);
}
