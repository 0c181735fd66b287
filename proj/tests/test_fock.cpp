#include "qsc/app/checks.hpp"
#include "qsc/fock/oracle.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace qsc;
using namespace qsc::fock;

namespace {

double lower_block_max(const DenseOperator& m, std::size_t keep) {
  const auto n = static_cast<Eigen::Index>(keep);
  return m.topLeftCorner(n, n).cwiseAbs().maxCoeff();
}

OracleConfig small_mc(double alpha, HomodynePhase phase, std::uint64_t seed) {
  OracleConfig c;
  c.alpha = alpha;
  c.dt = 2e-3;
  c.t = 1.0;
  c.d_at = 20;
  c.n_traj = 400;
  c.seed = seed;
  c.phase = phase;
  c.record_every = 250;
  c.workers = 1;
  return c;
}

}  // namespace

TEST(Operators, TruncatedCcr) {
  const std::size_t d = 12;
  const DenseOperator x = position(d);
  const DenseOperator p = momentum(d);
  const DenseOperator defect = x * p - p * x - cplx(0.0, 1.0) * DenseOperator::Identity(d, d);
  EXPECT_LT(lower_block_max(defect, d - 2), 1e-14);
  EXPECT_GT(defect.cwiseAbs().maxCoeff(), 1.0);  // the corner is where truncation shows
  EXPECT_LT((x - x.adjoint()).norm(), 1e-15);
  EXPECT_LT((p - p.adjoint()).norm(), 1e-15);
}

TEST(StepUnitaries, UnitaryAndOrdered) {
  const auto u = step_unitaries(0.8, 1e-3, 10, 3);
  EXPECT_LT(lower_block_unitarity_defect(u.composite, 10, 3), 1e-10);
  EXPECT_LT((u.composite - u.pass2 * u.pass1).norm(), 1e-15);
  EXPECT_GT((u.composite - u.pass1 * u.pass2).norm(), 1e-6);
}

TEST(StepUnitaries, GeneratorMatchesDoublePass) {
  // K_0 = 1 + dt(-L*L/2 - iH) + O(dt^2), K_1 = sqrt(dt) L + O(dt^{3/2}) on
  // the lower block.
  const double alpha = 0.7;
  const std::size_t d = 20;
  const DenseOperator x = position(d);
  const DenseOperator p = momentum(d);
  const DenseOperator L = alpha * (p - cplx(0.0, 1.0) * x) / std::sqrt(2.0);
  const DenseOperator H = 0.25 * alpha * alpha * (p * x + x * p);
  const DenseOperator K = -0.5 * L.adjoint() * L - cplx(0.0, 1.0) * H;
  auto errors = [&](double dt) {
    const auto k = kraus_operators(step_unitaries(alpha, dt, d, 3).composite, d, 3);
    const DenseOperator e0 = (k[0] - DenseOperator::Identity(d, d)) / dt - K;
    const DenseOperator e1 = k[1] / std::sqrt(dt) - L;
    return std::make_pair(lower_block_max(e0, d - 4), lower_block_max(e1, d - 4));
  };
  const auto coarse = errors(1e-3);
  const auto fine = errors(2.5e-4);
  EXPECT_LT(coarse.first, 1e-2);
  EXPECT_LT(coarse.second, 1e-2);
  EXPECT_NEAR(coarse.first / fine.first, 4.0, 0.4);
  EXPECT_NEAR(coarse.second / fine.second, 4.0, 0.4);
  // swapping the passes flips the sign of H
  const auto swapped = step_unitaries(alpha, 1e-3, d, 3);
  const auto ks = kraus_operators(swapped.pass1 * swapped.pass2, d, 3);
  const DenseOperator Ks = -0.5 * L.adjoint() * L + cplx(0.0, 1.0) * H;
  EXPECT_LT(lower_block_max((ks[0] - DenseOperator::Identity(d, d)) / 1e-3 - Ks, d - 4), 1e-2);
}

TEST(StepUnitaries, Validation) {
  EXPECT_THROW(step_unitaries(1.0, 1e-3, 1, 3), ConfigError);
  EXPECT_THROW(step_unitaries(1.0, 1e-3, 10, 1), ConfigError);
  EXPECT_THROW(step_unitaries(2.0, 1e-2, 10, 3), ConfigError);
}

TEST(AtomMoments, Uncoupled) {
  OracleConfig c;
  c.alpha = 0.0;
  c.dt = 1e-2;
  c.d_at = 10;
  for (const auto& m : simulate_atom_moments(c)) {
    EXPECT_NEAR(m.var_x, 0.5, 1e-14);
    EXPECT_NEAR(m.var_p, 0.5, 1e-14);
  }
}

TEST(AtomMoments, ClosedFormsAndFirstOrder) {
  OracleConfig c;
  c.alpha = 0.3;
  c.t = 1.0;
  c.d_at = 40;
  c.dt = 1e-3;
  const auto coarse = simulate_atom_moments(c).back();
  c.dt = 5e-4;
  const auto fine = simulate_atom_moments(c).back();
  const double var_p = 0.25 * (1.0 + std::exp(-0.18));
  const double var_x = 0.5 * 1.09;
  EXPECT_LT(std::abs(coarse.var_p - var_p) / var_p, 0.02);
  EXPECT_LT(std::abs(coarse.var_x - var_x) / var_x, 0.02);
  const double order = std::log2(std::abs(coarse.var_p - var_p) / std::abs(fine.var_p - var_p));
  EXPECT_GT(order, 0.7);
  EXPECT_LT(order, 1.3);
  EXPECT_NEAR(coarse.mean_x, 0.0, 1e-12);
  EXPECT_NEAR(coarse.mean_p, 0.0, 1e-12);
}

TEST(AtomMoments, TruncationConverged) {
  OracleConfig c;
  c.alpha = 0.3;
  c.dt = 1e-3;
  c.d_at = 30;
  const auto m30 = simulate_atom_moments(c).back();
  c.d_at = 40;
  const auto m40 = simulate_atom_moments(c).back();
  EXPECT_LT(std::abs(m30.var_p - m40.var_p) / m40.var_p, 1e-3);
  EXPECT_LT(std::abs(m30.var_x - m40.var_x) / m40.var_x, 1e-3);
}

TEST(AtomMoments, LeakageReported) {
  OracleConfig c;
  c.alpha = 2.0;
  c.dt = 2e-3;
  c.t = 1.0;
  c.d_at = 5;
  EXPECT_THROW(simulate_atom_moments(c), NumericalError);
}

TEST(Homodyne, ConfigValidation) {
  OracleConfig c = small_mc(0.5, HomodynePhase::x, 1);
  c.seed.reset();
  EXPECT_THROW(homodyne_monte_carlo(c), ConfigError);
  c = small_mc(0.5, HomodynePhase::x, 1);
  c.n_traj = 50;
  EXPECT_THROW(homodyne_monte_carlo(c), ConfigError);
}

TEST(Homodyne, VacuumShotNoise) {
  for (auto phase : {HomodynePhase::x, HomodynePhase::p}) {
    const auto s = homodyne_monte_carlo(small_mc(0.0, phase, 3)).back();
    EXPECT_DOUBLE_EQ(s.t, 1.0);
    EXPECT_LT(std::abs(s.variance - 1.0) / s.stderr_variance, 5.0);
    EXPECT_LT(std::abs(s.mean) / s.stderr_mean, 5.0);
  }
}

TEST(Homodyne, MatchesClosedForm) {
  const auto exact = gaussian::closed_form_covariances(0.5, 1.0);
  const auto sx = homodyne_monte_carlo(small_mc(0.5, HomodynePhase::x, 5)).back();
  const auto sp = homodyne_monte_carlo(small_mc(0.5, HomodynePhase::p, 6)).back();
  EXPECT_LT(app::sigma_distance(sx, exact.var_x_ph()), 5.0);
  EXPECT_LT(app::sigma_distance(sp, exact.var_p_ph()), 5.0);
}

TEST(Homodyne, DeterministicAndWorkerIndependent) {
  OracleConfig c = small_mc(0.5, HomodynePhase::x, 42);
  c.n_traj = 120;
  const auto a = homodyne_monte_carlo(c);
  const auto b = homodyne_monte_carlo(c);
  c.workers = 3;
  const auto threaded = homodyne_monte_carlo(c);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t n = 0; n < a.size(); ++n) {
    EXPECT_EQ(a[n].mean, b[n].mean);
    EXPECT_EQ(a[n].variance, b[n].variance);
    EXPECT_EQ(a[n].stderr_variance, b[n].stderr_variance);
    EXPECT_EQ(a[n].variance, threaded[n].variance);
    EXPECT_EQ(a[n].mean, threaded[n].mean);
  }
  c.seed = 43;
  EXPECT_NE(homodyne_monte_carlo(c).back().variance, a.back().variance);
}

TEST(Homodyne, DisjointSeedBatchesAgree) {
  const auto a = homodyne_monte_carlo(small_mc(0.5, HomodynePhase::p, 100)).back();
  const auto b = homodyne_monte_carlo(small_mc(0.5, HomodynePhase::p, 200)).back();
  const double combined = std::hypot(a.stderr_variance, b.stderr_variance);
  EXPECT_LT(std::abs(a.variance - b.variance) / combined, 5.0);
}

TEST(Homodyne, StderrIsSdOverRootN) {
  const auto s = homodyne_monte_carlo(small_mc(0.5, HomodynePhase::x, 9)).back();
  EXPECT_DOUBLE_EQ(s.stderr_mean, std::sqrt(s.variance / static_cast<double>(s.n)));
  EXPECT_EQ(s.n, 400u);
}

TEST(OracleCsv, Columns) {
  OracleConfig c = small_mc(0.5, HomodynePhase::x, 7);
  c.n_traj = 100;
  const auto atoms = simulate_atom_moments(c);
  const auto fx = homodyne_monte_carlo(c);
  c.phase = HomodynePhase::p;
  const auto fp = homodyne_monte_carlo(c);
  std::ostringstream os;
  write_oracle_csv(os, oracle_rows(atoms, fx, fp));
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, kOracleCsvHeader);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 14) << line;
    ++rows;
  }
  EXPECT_EQ(rows, atoms.size());
  EXPECT_THROW(oracle_rows(atoms, fx, {}), InvalidInput);
}
