#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "specpert/error.hpp"
#include "specpert/parallel.hpp"
#include "specpert/spectra.hpp"

using namespace specpert;
using namespace specpert::spectra;

namespace {

const Window kSquare2{-2.0, 2.0, -2.0, 2.0};

ComplexMatrix diag(std::initializer_list<Complex> values) {
  ComplexVector d(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (auto v : values) d(i++) = v;
  return d.asDiagonal();
}

SpectrumSet set_of(const std::vector<Complex>& values, double tol = 1e-12) {
  return SpectrumSet::from_values(values, tol);
}

double step_of(const Window& w, std::size_t n) { return (w.re_max - w.re_min) / static_cast<double>(n - 1); }

}  // namespace

TEST(Spectrum, MergesNearlyEqualEigenvalues) {
  const auto s = spectrum(diag({1.0, 1.0 + 1e-12}), 1e-9);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s.points()[0].multiplicity, 2u);
  EXPECT_NEAR(std::abs(s.points()[0].value - 1.0), 0.0, 1e-11);
}

TEST(Spectrum, NilpotentJordanBlock) {
  ComplexMatrix j = ComplexMatrix::Zero(3, 3);
  j(0, 1) = j(1, 2) = 1.0;
  const auto s = spectrum(j, 1e-8);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s.points()[0].value, Complex(0.0));
  EXPECT_EQ(s.points()[0].multiplicity, 3u);
}

TEST(Spectrum, DistinctSimplePoints) {
  const auto s = spectrum(diag({1.0, 2.0, 3.0}), 1e-9);
  EXPECT_EQ(s.size(), 3u);
  EXPECT_EQ(s.total_multiplicity(), 3u);
}

TEST(Spectrum, DistinctPointsAreFartherThanTolerance) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Complex> values;
  for (int k = 0; k < 300; ++k) values.emplace_back(u(rng), u(rng));
  const double tol = 0.05;
  const auto s = SpectrumSet::from_values(values, tol);
  EXPECT_EQ(s.total_multiplicity(), values.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      EXPECT_GT(std::abs(s.points()[i].value - s.points()[j].value), tol);
    }
  }
}

TEST(SpectralRadius, Examples) {
  EXPECT_EQ(spectral_radius(set_of({0.0})), 0.0);
  EXPECT_NEAR(spectral_radius(set_of({2.0, Complex(0, -3)})), 3.0, 1e-15);
  EXPECT_NEAR(spectral_radius(set_of(oracle::circle(4, 1.0))), 1.0, 1e-15);
  EXPECT_THROW(spectral_radius(SpectrumSet{}), InputError);
}

TEST(SpectralRadius, BoundedByFrobeniusNorm) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 20; ++trial) {
    const ComplexMatrix m = oracle::gaussian(6, 6, rng);
    EXPECT_LE(spectral_radius(spectrum(m, 1e-9)), m.norm() * (1 + 1e-12));
  }
}

TEST(Hausdorff, Examples) {
  const auto s = set_of({1.0, Complex(0, 2)});
  EXPECT_EQ(hausdorff(s, s), 0.0);
  EXPECT_NEAR(hausdorff(set_of({0.0}), set_of({1.0})), 1.0, 1e-15);
  EXPECT_NEAR(hausdorff(set_of(oracle::circle(256, 1.0)), set_of({0.0})), 1.0, 1e-15);
  EXPECT_THROW(hausdorff(SpectrumSet{}, s), InputError);
}

TEST(Hausdorff, MetricAxiomsOnRandomSets) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_int_distribution<int> count(1, 12);
  auto random_set = [&] {
    std::vector<Complex> v(static_cast<std::size_t>(count(rng)));
    for (auto& z : v) z = Complex(u(rng), u(rng));
    return set_of(v);
  };
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = random_set();
    const auto b = random_set();
    const auto c = random_set();
    EXPECT_EQ(hausdorff(a, a), 0.0);
    EXPECT_EQ(hausdorff(a, b), hausdorff(b, a));
    EXPECT_LE(hausdorff(a, c), hausdorff(a, b) + hausdorff(b, c) + 1e-12);
  }
}

TEST(DetectHoles, UnitCircleHasOneHoleAtOrigin) {
  const auto points = oracle::circle(256, 1.0);
  const std::size_t n = 400;
  const double t = 3.0 * step_of(kSquare2, n);
  const auto report = detect_holes(set_of(points), kSquare2, {n, n}, t);
  const auto expected = oracle::raster_components(points, -2, 2, -2, 2, n, n, t);
  ASSERT_EQ(expected.holes, 1u);
  ASSERT_EQ(report.holes.size(), 1u);
  EXPECT_EQ(report.holes[0].cell_count, expected.sizes[0]);
  EXPECT_LT(std::abs(report.holes[0].representative), 0.02);
}

TEST(DetectHoles, FilledDiskHasNoHoles) {
  std::mt19937_64 rng(24);
  ComplexMatrix m = oracle::gaussian(40, 40, rng);
  m /= 1.01 * Eigen::JacobiSVD<ComplexMatrix>(m).singularValues()(0);
  std::vector<Complex> points = kernel::eig(m);
  for (double r = 0.0; r <= 1.0; r += 0.02) {
    const auto ring = oracle::circle(static_cast<std::size_t>(8 + 400 * r), r);
    points.insert(points.end(), ring.begin(), ring.end());
  }
  const double t = 3.0 * step_of(kSquare2, 400);
  EXPECT_EQ(detect_holes(set_of(points), kSquare2, {400, 400}, t).holes.size(), 0u);
}

TEST(DetectHoles, ConcentricCirclesHaveTwoHoles) {
  auto points = oracle::circle(256, 1.0);
  const auto outer = oracle::circle(512, 2.0);
  points.insert(points.end(), outer.begin(), outer.end());
  const Window w{-3, 3, -3, 3};
  const std::size_t n = 400;
  const double t = 3.0 * step_of(w, n);
  const auto expected = oracle::raster_components(points, -3, 3, -3, 3, n, n, t);
  EXPECT_EQ(expected.holes, 2u);
  EXPECT_EQ(detect_holes(set_of(points), w, {n, n}, t).holes.size(), 2u);
}

TEST(DetectHoles, CountStableUnderResolutionDoubling) {
  auto annulus = oracle::circle(256, 1.0);
  const auto outer = oracle::circle(512, 2.0);
  annulus.insert(annulus.end(), outer.begin(), outer.end());
  const Window w{-3, 3, -3, 3};
  for (std::size_t n : {300u, 600u}) {
    const double t = 0.045;
    EXPECT_EQ(detect_holes(set_of(annulus), w, {n, n}, t).holes.size(), 2u);
    EXPECT_EQ(detect_holes(set_of(oracle::circle(256, 1.0)), w, {n, n}, t).holes.size(), 1u);
  }
}

TEST(DetectHoles, Preconditions) {
  const auto s = set_of(oracle::circle(64, 1.0));
  EXPECT_THROW(detect_holes(s, kSquare2, {400, 400}, 0.5 * step_of(kSquare2, 400)), InputError);
  EXPECT_THROW(detect_holes(s, Window{-1.05, 1.05, -1.05, 1.05}, {400, 400}, 0.03), InputError);
}

TEST(PolynomialHull, UnitCircleFillsToDiskArea) {
  const std::size_t n = 801;
  const double step = step_of(kSquare2, n);
  const auto hull = polynomial_hull(set_of(oracle::circle(256, 1.0)), kSquare2, {n, n}, 3.0 * step);
  const double area = static_cast<double>(hull.member_count()) * step * step;
  EXPECT_NEAR(area, M_PI, 0.05 * M_PI);
}

TEST(PolynomialHull, NoHolesMeansThickenedSet) {
  const auto s = set_of({0.0, 0.5, Complex(0, 0.7)});
  const double t = 0.05;
  const auto hull = polynomial_hull(s, Window{-1, 1, -1, 1}, {201, 201}, t);
  const auto expected = oracle::raster_components({0.0, 0.5, Complex(0, 0.7)}, -1, 1, -1, 1, 201, 201, t);
  EXPECT_EQ(hull.member_count(), expected.spectrum_cells);
}

TEST(PolynomialHull, IdempotentAndContainsSpectrum) {
  auto points = oracle::circle(256, 1.0);
  const auto outer = oracle::circle(512, 2.0);
  points.insert(points.end(), outer.begin(), outer.end());
  const Window w{-3, 3, -3, 3};
  const auto hull = polynomial_hull(set_of(points), w, {300, 300}, 0.05);
  const auto again = polynomial_hull(hull);
  EXPECT_EQ(hull.field(), again.field());
  const auto labels = label_components(set_of(points), w, {300, 300}, 0.05);
  for (std::size_t k = 0; k < labels.labels.size(); ++k) {
    if (labels.labels[k] == ComponentLabels::kSpectrum) EXPECT_EQ(hull.field()[k], 1.0);
  }
}

TEST(Pseudospectrum, ZeroMatrixIsMinusLogModulus) {
  const auto grid = pseudospectrum(ComplexMatrix::Zero(3, 3), kSquare2, {41, 41});
  for (std::size_t j = 0; j < grid.ny(); ++j) {
    for (std::size_t i = 0; i < grid.nx(); ++i) {
      const Complex z = grid.node(i, j);
      if (z == Complex(0.0)) {
        EXPECT_EQ(grid.at(i, j), 16.0);
        continue;
      }
      EXPECT_NEAR(grid.at(i, j), -std::log10(std::abs(z)), 1e-12);
    }
  }
  EXPECT_EQ(grid.flagged_count(), 1u);
}

TEST(Pseudospectrum, PeaksAtEigenvalue) {
  const auto grid = pseudospectrum(diag({1.0}), kSquare2, {41, 41});
  const auto it = std::max_element(grid.field().begin(), grid.field().end());
  const auto k = static_cast<std::size_t>(it - grid.field().begin());
  EXPECT_EQ(grid.node(k % grid.nx(), k / grid.nx()), Complex(1.0));
}

TEST(Pseudospectrum, TruncatedShiftIsLargeInsideDisk) {
  ComplexMatrix shift = ComplexMatrix::Zero(64, 64);
  for (Eigen::Index i = 1; i < 64; ++i) shift(i, i - 1) = 1.0;
  const Window w{-1, 1, -1, 1};
  const auto grid = pseudospectrum(shift, w, {41, 41});
  std::size_t checked = 0;
  for (std::size_t j = 0; j < grid.ny(); ++j) {
    for (std::size_t i = 0; i < grid.nx(); ++i) {
      const Complex z = grid.node(i, j);
      if (std::abs(z) > 0.8) continue;
      EXPECT_GE(grid.at(i, j), 2.0);
      if ((i + j) % 17 == 0) {
        ComplexMatrix shifted = -shift;
        shifted.diagonal().array() += z;
        const double dense = kernel::smin(shifted);
        if (dense > 1e-10) {
          EXPECT_NEAR(grid.at(i, j), -std::log10(dense), 1e-6);
        } else {
          EXPECT_GE(grid.at(i, j), 10.0 - 1e-3);
        }
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 0u);
}

TEST(Pseudospectrum, IndependentOfWorkerCount) {
  std::mt19937_64 rng(25);
  const ComplexMatrix m = oracle::gaussian(20, 20, rng);
  set_worker_limit(1);
  const auto one = pseudospectrum(m, Window{-6, 6, -6, 6}, {30, 30});
  set_worker_limit(4);
  const auto four = pseudospectrum(m, Window{-6, 6, -6, 6}, {30, 30});
  set_worker_limit(0);
  EXPECT_EQ(one.field(), four.field());
}
