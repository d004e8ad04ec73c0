#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "specpert/error.hpp"
#include "specpert/perturb.hpp"
#include "specpert/zoo.hpp"

using namespace specpert;
using namespace specpert::perturb;

namespace {

ComplexVector vec(std::initializer_list<Complex> values) {
  ComplexVector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (auto x : values) v(i++) = x;
  return v;
}

ComplexMatrix diag(std::initializer_list<Complex> values) { return vec(values).asDiagonal(); }

double set_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double worst = 0.0;
  for (auto x : a) {
    double best = 1e300;
    for (auto y : b) best = std::min(best, std::abs(x - y));
    worst = std::max(worst, best);
  }
  return worst;
}

const std::vector<Complex> kUnitRoots64 = zoo::roots_of_unity(64);

}  // namespace

TEST(Criterion, ZeroPerturbation) {
  const auto r = criterion(diag({1.0, 2.0}), ComplexMatrix::Zero(2, 2), Complex(0.5, 0.5), 1e-8);
  EXPECT_FALSE(r.lhs);
  EXPECT_FALSE(r.rhs);
}

TEST(Criterion, NilpotentResolventProduct) {
  ComplexMatrix y = ComplexMatrix::Zero(2, 2);
  y(0, 1) = 1.0;
  const auto r = criterion(diag({0.0, 2.0}), y, 1.0, 1e-8);
  EXPECT_FALSE(r.lhs);
  EXPECT_FALSE(r.rhs);
}

TEST(Criterion, IdentityPerturbationOfZero) {
  const auto r = criterion(ComplexMatrix::Zero(2, 2), ComplexMatrix::Identity(2, 2), 1.0, 1e-8);
  EXPECT_TRUE(r.lhs);
  EXPECT_TRUE(r.rhs);
}

TEST(Criterion, RejectsLambdaNearSpectrum) {
  EXPECT_THROW(criterion(diag({1.0, 2.0}), ComplexMatrix::Identity(2, 2), 1.0 + 1e-9, 1e-8), PreconditionError);
}

TEST(ResolventScalar, ZeroOperator) {
  const RankOneOperator p(vec({1.0, 2.0}), vec({0.5, Complex(0, 1)}));
  const Complex lambda(0.3, -0.7);
  EXPECT_NEAR(std::abs(resolvent_scalar(ComplexMatrix::Zero(2, 2), p, lambda) - p.trace() / lambda), 0.0, 1e-14);
}

TEST(ResolventScalar, LeadingLaurentTerm) {
  std::mt19937_64 rng(41);
  const ComplexMatrix x = oracle::gaussian(5, 5, rng);
  const RankOneOperator p(oracle::gaussian(5, 1, rng), oracle::gaussian(5, 1, rng));
  const Complex lambda(1e4, 0.0);
  const Complex f = resolvent_scalar(x, p, lambda);
  const double second_order = 2.0 * x.operatorNorm() * p.u().norm() * p.phi().norm() / std::norm(lambda);
  EXPECT_LE(std::abs(f - p.trace() / lambda), second_order);
}

TEST(ResolventScalar, PartialFractionOracle) {
  const std::vector<oracle::Rational> a{{1, 3}, {-5, 2}};
  const std::vector<oracle::Rational> u{{2, 1}, {-1, 7}};
  const std::vector<oracle::Rational> w{{3, 4}, {5, 9}};
  const oracle::Rational lambda{7, 5};
  auto d = [](oracle::Rational r) { return static_cast<double>(r.num) / static_cast<double>(r.den); };
  const RankOneOperator p(vec({d(u[0]), d(u[1])}), vec({d(w[0]), d(w[1])}));
  const ComplexMatrix x = diag({d(a[0]), d(a[1])});
  const double exact = oracle::partial_fraction(a, u, w, lambda);
  EXPECT_NEAR(resolvent_scalar(x, p, d(lambda)).real(), exact, 1e-15 * std::abs(exact) * 4);
  const ResolventFunction f(x, p);
  EXPECT_NEAR(f(d(lambda)).real(), exact, 1e-15 * std::abs(exact) * 4);
}

TEST(ResolventScalar, LevelSetMembership) {
  std::mt19937_64 rng(42);
  const ComplexMatrix x = oracle::gaussian(6, 6, rng);
  const RankOneOperator p(oracle::gaussian(6, 1, rng), oracle::gaussian(6, 1, rng));
  const Complex beta(0.7, -0.2);
  const ResolventFunction f(x, p);
  ComplexMatrix z = x + p.matrix() / beta;
  for (auto lambda : kernel::eig(z)) {
    if (f.distance_to_spectrum(lambda) < 1e-6) continue;
    EXPECT_LE(std::abs(resolvent_scalar(x, p, lambda) - beta), 1e-7 * (1 + std::abs(beta)));
  }
}

TEST(ResolventFunction, DerivativeMatchesFiniteDifference) {
  std::mt19937_64 rng(43);
  const ComplexMatrix x = oracle::gaussian(8, 8, rng);
  const RankOneOperator p(oracle::gaussian(8, 1, rng), oracle::gaussian(8, 1, rng));
  const ResolventFunction f(x, p);
  const Complex lambda(5.0, 2.0);
  const double h = 1e-6;
  const Complex fd = (f(lambda + h) - f(lambda - h)) / (2 * h);
  EXPECT_LE(std::abs(f.derivative(lambda) - fd), 1e-6 * std::abs(fd) + 1e-9);
}

TEST(Laurent, LeadingCoefficientIsTrace) {
  std::mt19937_64 rng(44);
  const ComplexMatrix x = oracle::gaussian(4, 4, rng);
  const RankOneOperator p(oracle::gaussian(4, 1, rng), oracle::gaussian(4, 1, rng));
  const auto c = laurent_coeffs(x, p, 5);
  ASSERT_EQ(c.coeffs.size(), 6u);
  EXPECT_NEAR(std::abs(c.coeffs[0] - p.trace()), 0.0, 1e-13);
  EXPECT_EQ(c.fingerprint, laurent_coeffs(x, p, 2).fingerprint);
  EXPECT_NE(c.fingerprint, laurent_coeffs(2.0 * x, p, 2).fingerprint);
}

TEST(Laurent, NilpotentCoefficientsVanish) {
  ComplexMatrix j = ComplexMatrix::Zero(3, 3);
  j(0, 1) = j(1, 2) = 1.0;
  const RankOneOperator p(vec({1.0, 2.0, 3.0}), vec({4.0, 5.0, 6.0}));
  const auto c = laurent_coeffs(j, p, 6);
  for (std::size_t k = 3; k < c.coeffs.size(); ++k) EXPECT_EQ(c.coeffs[k], Complex(0.0));
  EXPECT_FALSE(c.essential_singularity_witness);
  EXPECT_THROW(laurent_coeffs(j, p, -1), InputError);
}

TEST(Laurent, SeriesTruncationBound) {
  std::mt19937_64 rng(45);
  const ComplexMatrix x = oracle::gaussian(6, 6, rng);
  const RankOneOperator p(oracle::gaussian(6, 1, rng), oracle::gaussian(6, 1, rng));
  const int n = 12;
  const auto c = laurent_coeffs(x, p, n);
  const double norm = x.operatorNorm();
  for (double scale : {2.5, 4.0}) {
    const Complex lambda = std::polar(scale * norm, 0.7);
    Complex partial = 0.0;
    for (int k = 0; k <= n; ++k) partial += c.coeffs[static_cast<std::size_t>(k)] / std::pow(lambda, k + 1);
    const double bound = std::pow(norm / std::abs(lambda), n + 1) * p.u().norm() * p.phi().norm() * 2.0;
    EXPECT_LE(std::abs(resolvent_scalar(x, p, lambda) - partial), bound);
  }
}

TEST(Laurent, VolterraMomentsAtModerateSize) {
  const auto pair = zoo::volterra_pair(512);
  const auto c = laurent_coeffs(pair.v, pair.q, 4);
  const auto exact = oracle::volterra_moments(4);
  EXPECT_NEAR(exact[1], 2 * std::numbers::pi, 1e-14);
  EXPECT_NEAR(exact[2], 2 * std::numbers::pi * std::numbers::pi, 1e-13);
  for (int k = 1; k <= 4; ++k) EXPECT_NEAR(c.coeffs[k].real() / exact[k], 1.0, 1e-3);
}

TEST(LevelSet, ReciprocalFunction) {
  const RankOneOperator p(vec({1.0}), vec({1.0}));
  const auto r = level_set_roots(ComplexMatrix::Zero(1, 1), p, 2.0, spectra::Window{-1, 1, -1, 1});
  ASSERT_EQ(r.roots.size(), 1u);
  EXPECT_NEAR(std::abs(r.roots[0] - 0.5), 0.0, 1e-14);
  EXPECT_TRUE(r.diverged.empty());
}

TEST(LevelSet, SecularEquationOracle) {
  const ComplexMatrix x = diag({1.0, -1.0});
  const RankOneOperator p(vec({1.0, 1.0}), vec({-0.5, 0.5}));
  const auto r = level_set_roots(x, p, 1.0, spectra::Window{-0.5, 0.5, -0.5, 0.5});
  const auto expected = oracle::secular_roots({1.0, -1.0}, {1.0, 1.0}, {-0.5, 0.5}, 1.0);
  ASSERT_FALSE(r.roots.empty());
  EXPECT_LE(set_distance(r.roots, expected), 1e-6);
  for (auto z : r.roots) EXPECT_LE(std::abs(resolvent_scalar(x, p, z) - 1.0), 2e-8);
}

TEST(LevelSet, DisjointWindowIsEmpty) {
  const RankOneOperator p(vec({1.0}), vec({1.0}));
  const auto r = level_set_roots(ComplexMatrix::Zero(1, 1), p, 2.0, spectra::Window{3, 4, 3, 4});
  EXPECT_TRUE(r.roots.empty());
  EXPECT_THROW(level_set_roots(ComplexMatrix::Zero(1, 1), p, 0.0, spectra::Window{}), InputError);
}

TEST(LevelSet, MatchesPerturbedSpectrumOnRandomInstances) {
  std::mt19937_64 rng(46);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 3 + trial % 5;
    const ComplexMatrix x = oracle::gaussian(n, n, rng);
    const RankOneOperator p(oracle::gaussian(n, 1, rng), oracle::gaussian(n, 1, rng));
    const Complex beta(0.5 + 0.1 * trial, 0.3);
    const auto r = level_set_roots(x, p, beta, spectra::Window{-40, 40, -40, 40});
    std::vector<Complex> direct;
    const kernel::ShiftedSolver sx(x);
    for (auto z : kernel::eig(x + p.matrix() / beta)) {
      if (sx.distance_to_spectrum(z) > 1e-8) direct.push_back(z);
    }
    EXPECT_LE(set_distance(r.roots, direct), 1e-6);
    EXPECT_LE(set_distance(direct, r.roots), 1e-6);
  }
}

TEST(HoleFilling, MinimumNormTwoPointExample) {
  const std::vector<Complex> a{1.0, -1.0};
  const auto h = hole_filling_functional(a, 1, MomentClosure::minimum_norm);
  EXPECT_NEAR(std::abs(h.functional.weights()(0) + 0.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(h.functional.weights()(1) - 0.5), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(h.functional.value(0.0) - 1.0), 0.0, 1e-15);
}

TEST(HoleFilling, CircleModelCreatesSmallEigenvalues) {
  const auto h = hole_filling_functional(kUnitRoots64, 8);
  EXPECT_LE(h.functional.max_residual(), 1e-10);
  ComplexMatrix z = Eigen::Map<const ComplexVector>(kUnitRoots64.data(), 64).asDiagonal();
  z += h.perturbation;
  std::size_t small = 0;
  for (auto v : kernel::eig(z)) small += std::abs(v) < 0.1;
  EXPECT_GE(small, 8u);
}

TEST(HoleFilling, OrderSlope) {
  const auto h = hole_filling_functional(kUnitRoots64, 8);
  std::vector<Complex> lambdas;
  for (int k = 0; k <= 8; ++k) lambdas.push_back(std::polar(std::pow(10.0, -1.0 - 0.25 * k), 0.3 * k));
  EXPECT_NEAR(moment_order_slope(h.functional, lambdas), 8.0, 0.5);
}

TEST(HoleFilling, Errors) {
  const std::vector<Complex> with_zero{1.0, 0.0, -1.0};
  EXPECT_THROW(hole_filling_functional(with_zero, 1), InputError);
  const std::vector<Complex> two{1.0, -1.0};
  EXPECT_THROW(hole_filling_functional(two, 3, MomentClosure::minimum_norm), InputError);
  EXPECT_THROW(hole_filling_functional(two, 2, MomentClosure::exact_order), InputError);
  EXPECT_THROW(hole_filling_functional(two, 0), InputError);
}

TEST(DiscontinuityProbe, UnperturbedCircleDistance) {
  const auto model = zoo::circle_model(kUnitRoots64, 8);
  const double betas[] = {0.0, 1.0};
  const double step = 0.01;
  const auto report = discontinuity_probe(model.l, model.filling.perturbation, betas, Disk{0.0, 0.25}, step);
  ASSERT_EQ(report.rows.size(), 2u);
  EXPECT_GE(report.rows[0].min_smin, 0.75 - 1e-12);
  EXPECT_LE(report.rows[0].min_smin, 0.75 + step);
  EXPECT_EQ(report.rows[0].eig_in_disk, 0u);
  EXPECT_GE(report.rows[1].eig_in_disk, 8u);
}

TEST(DiscontinuityProbe, RootRadiusNearSecularPrediction) {
  const auto model = zoo::circle_model(kUnitRoots64, 8);
  const auto& w = model.filling.functional.weights();
  // Taylor coefficient of f at 0 of order K: -sum w_i a_i^{-(K+1)}.
  Complex c_k = 0.0;
  for (int i = 0; i < 64; ++i) c_k -= w(i) * std::pow(kUnitRoots64[static_cast<std::size_t>(i)], -9);
  const double beta = 0.9;
  const double predicted = std::pow((1 - beta) / (beta * std::abs(c_k)), 1.0 / 8);
  const ComplexMatrix z = model.l + beta * model.filling.perturbation;
  std::vector<double> moduli;
  for (auto v : kernel::eig(z)) moduli.push_back(std::abs(v));
  std::sort(moduli.begin(), moduli.end());
  for (int k = 0; k < 8; ++k) EXPECT_NEAR(moduli[static_cast<std::size_t>(k)], predicted, 0.05 * predicted);
}

TEST(DiscontinuityProbe, SortsBetasAndValidatesInputs) {
  const auto model = zoo::circle_model(kUnitRoots64, 8);
  const double betas[] = {1.0, 0.5};
  const auto report = discontinuity_probe(model.l, model.filling.perturbation, betas, Disk{0.0, 0.1}, 0.02);
  EXPECT_EQ(report.rows[0].beta, 0.5);
  EXPECT_EQ(report.rows[1].beta, 1.0);
  EXPECT_EQ(report.rows[1].hausdorff, 0.0);
  const double no_one[] = {0.5};
  EXPECT_THROW(discontinuity_probe(model.l, model.filling.perturbation, no_one, Disk{0.0, 0.1}, 0.02), InputError);
  EXPECT_THROW(discontinuity_probe(model.l, model.filling.perturbation, betas, Disk{0.9, 0.3}, 0.02),
               PreconditionError);
}

TEST(PerturbationScan, ZeroRowAndBilinearity) {
  std::mt19937_64 rng(47);
  const ComplexMatrix x = oracle::gaussian(6, 6, rng);
  const RankOneOperator q(oracle::gaussian(6, 1, rng), oracle::gaussian(6, 1, rng));
  const Complex c(2.0, -0.5);
  const std::vector<Complex> alphas{0.0, 0.3, Complex(0, 1)};
  std::vector<Complex> scaled;
  for (auto a : alphas) scaled.push_back(c * a);
  const auto rows = perturbation_scan(x, q.scaled(c), alphas, 1e-3);
  const auto reference = perturbation_scan(x, q, scaled, 1e-3);
  EXPECT_LE(spectra::hausdorff(rows[0].spectrum, spectra::spectrum(x, 1e-9)), 1e-12);
  EXPECT_EQ(rows[0].hausdorff_to_alpha0, 0.0);
  for (std::size_t k = 0; k < alphas.size(); ++k) {
    EXPECT_EQ(rows[k].alpha, alphas[k]);
    EXPECT_LE(spectra::hausdorff(rows[k].spectrum, reference[k].spectrum), 1e-10);
  }
}
