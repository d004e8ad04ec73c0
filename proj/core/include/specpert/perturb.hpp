#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "specpert/numkernel.hpp"
#include "specpert/socle.hpp"
#include "specpert/spectra.hpp"

namespace specpert::perturb {

using socle::RankOneOperator;

// ---------------------------------------------------------------------------
// Resolvent criterion: for lambda outside sigma(x),
//   lambda in sigma(x + y)  <=>  1 in sigma((lambda - x)^{-1} y).

struct CriterionResult {
  bool lhs = false;  ///< dist(lambda, sigma(x + y)) <= tol
  bool rhs = false;  ///< dist(1, sigma((lambda - x)^{-1} y)) <= tol
};

/// Evaluates both sides independently. Throws PreconditionError when
/// dist(lambda, sigma(x)) <= 10 * tol.
CriterionResult criterion(const ComplexMatrix& x, const ComplexMatrix& y, Complex lambda, double tol);

// ---------------------------------------------------------------------------
// Scalar resolvent f(lambda) = tau_P((lambda - x)^{-1}) = phi^T (lambda - x)^{-1} u.

/// f(lambda) through a dense LU solve. Throws PreconditionError when
/// dist(lambda, sigma(x)) <= 10 * tol.
Complex resolvent_scalar(const ComplexMatrix& x, const RankOneOperator& p, Complex lambda, double tol = 1e-10);

/// f and f' for repeated evaluation: x is reduced to Schur form once and every
/// call costs two triangular solves.
class ResolventFunction {
 public:
  ResolventFunction(const ComplexMatrix& x, const RankOneOperator& p);

  Complex operator()(Complex lambda) const;
  Complex derivative(Complex lambda) const;
  double distance_to_spectrum(Complex lambda) const { return solver_.distance_to_spectrum(lambda); }

 private:
  kernel::ShiftedSolver solver_;
  ComplexVector u_schur_;
  ComplexVector phi_schur_;
};

// ---------------------------------------------------------------------------
// Laurent coefficients at infinity: f(lambda) = sum_j c_j / lambda^{j+1},
// c_j = tau_P(x^j) = phi^T x^j u.

struct LaurentCoefficients {
  std::vector<Complex> coeffs;
  /// FNV-1a hash of (x, u, phi), hex encoded.
  std::string fingerprint;
  /// Every c_j (1 <= j <= N) exceeds tol * ||x||_inf^j * ||u||_inf * ||phi||_1.
  bool essential_singularity_witness = false;
};

LaurentCoefficients laurent_coeffs(const ComplexMatrix& x, const RankOneOperator& p, int n_max, double tol = 1e-12);

// ---------------------------------------------------------------------------
// Level sets {lambda : f(lambda) = beta} = sigma(x + P / beta) \ sigma(x).

struct DivergedRoot {
  Complex start;
  Complex last;
  double residual = 0.0;
};

struct LevelSetResult {
  /// Distinct roots in the window, each with |f - beta| <= 1e-8 (1 + |beta|).
  std::vector<Complex> roots;
  /// Candidates whose Newton refinement did not reach the residual target.
  std::vector<DivergedRoot> diverged;
};

inline constexpr int kNewtonIterationCap = 50;

/// Throws InputError for beta == 0.
LevelSetResult level_set_roots(const ComplexMatrix& x, const RankOneOperator& p, Complex beta,
                               const spectra::Window& window, double tol = 1e-8);

// ---------------------------------------------------------------------------
// Hole-filling functional for a diagonal (circle) model L = diag(a).

enum class MomentClosure {
  /// Minimum-norm w for phi(a^{-1}) = -1 and phi(a^{-k}) = 0, 2 <= k <= K.
  minimum_norm,
  /// Same conditions plus phi(a^{-(K+1)}) = -1, which pins the order of
  /// contact of f with 1 at exactly K. Needs K < m.
  exact_order,
};

/// phi(v) = w^T v together with the samples it was built for.
///
/// The weights are solved in 50-digit arithmetic and rounded; the extended
/// copy is kept so that |f - 1| can be measured far below double precision.
class MomentFunctional {
 public:
  const ComplexVector& weights() const { return weights_; }
  const ComplexVector& samples() const { return samples_; }
  int order() const { return order_; }
  MomentClosure closure() const { return closure_; }
  /// |phi(a^{-1}) + 1| followed by |phi(a^{-k})| for k = 2..K, in double.
  const std::vector<double>& residuals() const { return residuals_; }
  double max_residual() const;

  /// f(lambda) = sum w_i / (lambda - a_i) in double precision.
  Complex value(Complex lambda) const;
  /// |f(lambda) - 1| evaluated with the extended weights.
  double deviation_from_one(Complex lambda) const;

  /// P = 1 w^T as a rank-one operator.
  RankOneOperator as_rank_one() const;

  struct Extended;

 private:
  friend MomentFunctional make_moment_functional(std::span<const Complex>, int, MomentClosure);

  ComplexVector weights_;
  ComplexVector samples_;
  int order_ = 0;
  MomentClosure closure_ = MomentClosure::exact_order;
  std::vector<double> residuals_;
  std::shared_ptr<const Extended> extended_;
};

MomentFunctional make_moment_functional(std::span<const Complex> samples, int order, MomentClosure closure);

struct HoleFilling {
  MomentFunctional functional;
  /// 1 w^T
  ComplexMatrix perturbation;
};

/// Builds phi with phi(a^{-1}) = -1 and phi(a^{-k}) = 0 for 2 <= k <= K.
/// Throws InputError when a sample is within 1e-8 * max(1, max|a|) of 0,
/// K < 1, K > m, or the conditions are degenerate for the samples.
HoleFilling hole_filling_functional(std::span<const Complex> samples, int order,
                                    MomentClosure closure = MomentClosure::exact_order);

/// Least-squares slope of log|f - 1| against log|lambda| over the given points.
double moment_order_slope(const MomentFunctional& functional, std::span<const Complex> lambdas);

// ---------------------------------------------------------------------------
// Discontinuity probe along z(beta) = x + beta * a.

struct Disk {
  Complex center;
  double radius = 0.0;
  bool contains(Complex z) const { return std::abs(z - center) <= radius; }
};

struct ProbeRow {
  double beta = 0.0;
  std::size_t eig_in_disk = 0;
  double min_smin = 0.0;
  double hausdorff = 0.0;
};

struct DiscontinuityReport {
  Disk disk;
  std::vector<ProbeRow> rows;
};

struct ProbeOptions {
  double cluster_tol = 1e-9;
  std::size_t raster_cells = 200;
};

/// For each beta (sorted ascending): eigenvalues of x + beta a in the open
/// disk, the minimum of smin(lambda - (x + beta a)) over grid nodes of the
/// closed disk, and hausdorff(sigma(x + beta a), sigma(x + a)).
///
/// Throws InputError unless betas lie in [0, 1] and contain 1, and
/// PreconditionError unless the disk lies inside one hole of sigma(x).
DiscontinuityReport discontinuity_probe(const ComplexMatrix& x, const ComplexMatrix& a, std::span<const double> betas,
                                        const Disk& disk, double grid_step, const ProbeOptions& options = {});

// ---------------------------------------------------------------------------
// Spectra of x + alpha Q along a list of alphas.

struct ScanRow {
  Complex alpha;
  spectra::SpectrumSet spectrum;
  std::size_t count_above_threshold = 0;
  double hausdorff_to_alpha0 = 0.0;
};

/// Rows follow the input order of alphas. count_above_threshold counts
/// distinct points with |lambda| > threshold; hausdorff_to_alpha0 compares
/// with sigma(x).
std::vector<ScanRow> perturbation_scan(const ComplexMatrix& x, const RankOneOperator& q, std::span<const Complex> alphas,
                                       double threshold, double cluster_tol = 1e-9);

}  // namespace specpert::perturb
