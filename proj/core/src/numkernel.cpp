#include "specpert/numkernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "specpert/error.hpp"

namespace specpert::kernel {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
// Above this inverse norm the smallest singular value is reported as 0.
constexpr double kInverseNormCeiling = 1e150;
constexpr Eigen::Index kMaxLanczosSteps = 48;

bool is_upper_triangular(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = j + 1; i < m.rows(); ++i) {
      if (m(i, j) != Complex{}) return false;
    }
  }
  return true;
}

bool is_lower_triangular(const ComplexMatrix& m) {
  for (Eigen::Index j = 1; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      if (m(i, j) != Complex{}) return false;
    }
  }
  return true;
}

bool is_real(const ComplexMatrix& m) {
  return (m.imag().array() == 0.0).all();
}

// Solves (T - shift) x = b in place for upper-triangular T.
// Returns false when a diagonal entry of T - shift is exactly zero.
bool upper_solve_in_place(const ComplexMatrix& t, Complex shift, ComplexVector& b) {
  for (Eigen::Index j = t.rows() - 1; j >= 0; --j) {
    const Complex d = t(j, j) - shift;
    if (d == Complex{}) return false;
    b(j) /= d;
    if (j > 0) b.head(j).noalias() -= t.col(j).head(j) * b(j);
  }
  return true;
}

// Solves (T - shift)^H y = b in place for upper-triangular T.
bool upper_adjoint_solve_in_place(const ComplexMatrix& t, Complex shift, ComplexVector& b) {
  for (Eigen::Index i = 0; i < t.rows(); ++i) {
    const Complex d = std::conj(t(i, i) - shift);
    if (d == Complex{}) return false;
    if (i > 0) b(i) -= t.col(i).head(i).dot(b.head(i));
    b(i) /= d;
  }
  return true;
}

struct SchurForm {
  ComplexMatrix t;
  ComplexMatrix z;
};

// Eigen's complex QR can produce NaN shifts on some highly structured inputs
// (rank-one products with exact zeros). On failure the input is rotated by a
// seeded unitary similarity and reduced again; the seeds are fixed so the
// result stays deterministic.
SchurForm complex_schur(const ComplexMatrix& m, bool with_vectors, const char* what) {
  const Eigen::Index n = m.rows();
  Eigen::ComplexSchur<ComplexMatrix> schur(n);
  schur.compute(m, with_vectors);
  if (schur.info() == Eigen::Success && all_finite(schur.matrixT())) {
    return {schur.matrixT().triangularView<Eigen::Upper>(), with_vectors ? schur.matrixU() : ComplexMatrix()};
  }
  for (std::uint64_t attempt = 1; attempt <= 3; ++attempt) {
    std::mt19937_64 rng(attempt);
    std::normal_distribution<double> normal;
    ComplexMatrix g(n, n);
    for (Eigen::Index k = 0; k < g.size(); ++k) g(k) = Complex(normal(rng), normal(rng));
    const ComplexMatrix q = Eigen::HouseholderQR<ComplexMatrix>(g).householderQ();
    schur.compute(q.adjoint() * m * q, with_vectors);
    if (schur.info() == Eigen::Success && all_finite(schur.matrixT())) {
      return {schur.matrixT().triangularView<Eigen::Upper>(), with_vectors ? ComplexMatrix(q * schur.matrixU()) : ComplexMatrix()};
    }
  }
  throw NumericalError(std::string(what) + ": Schur iteration did not converge");
}

}  // namespace

double eig_backward_kappa(std::size_t n) { return 32.0 * static_cast<double>(std::max<std::size_t>(n, 1)); }

bool all_finite(const ComplexMatrix& m) {
  return m.real().allFinite() && m.imag().allFinite();
}

bool all_finite(const ComplexVector& v) {
  return v.real().allFinite() && v.imag().allFinite();
}

void require_valid(const ComplexMatrix& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw InputError(std::string(what) + ": matrix must be square and non-empty (got " +
                     std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ")");
  }
  if (!all_finite(m)) throw InputError(std::string(what) + ": matrix has non-finite entries");
}

std::vector<Complex> eig(const ComplexMatrix& m) {
  require_valid(m, "eig");
  const Eigen::Index n = m.rows();
  std::vector<Complex> out(static_cast<std::size_t>(n));

  if (is_upper_triangular(m) || is_lower_triangular(m)) {
    for (Eigen::Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = m(i, i);
    return out;
  }

  if (is_real(m)) {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(m.real(), /*computeEigenvectors=*/false);
    if (solver.info() == Eigen::Success && solver.eigenvalues().allFinite()) {
      const auto& values = solver.eigenvalues();
      for (Eigen::Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = values(i);
      return out;
    }
  }

  const auto form = complex_schur(m, false, "eig");
  for (Eigen::Index i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = form.t(i, i);
  return out;
}

double norm_inf(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

namespace {

Eigen::PartialPivLU<ComplexMatrix> checked_lu(const ComplexMatrix& m) {
  Eigen::PartialPivLU<ComplexMatrix> lu(m);
  const double threshold = static_cast<double>(m.rows()) * kEps * norm_inf(m);
  const double min_pivot = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
  if (min_pivot <= threshold) {
    throw SingularityError("solve: matrix is numerically singular (pivot " + std::to_string(min_pivot) +
                           " <= " + std::to_string(threshold) + ")");
  }
  return lu;
}

}  // namespace

ComplexVector solve(const ComplexMatrix& m, const ComplexVector& b) {
  require_valid(m, "solve");
  if (b.size() != m.rows()) {
    throw InputError("solve: right-hand side has length " + std::to_string(b.size()) +
                     ", expected " + std::to_string(m.rows()));
  }
  if (!all_finite(b)) throw InputError("solve: right-hand side has non-finite entries");
  return checked_lu(m).solve(b);
}

ComplexMatrix solve(const ComplexMatrix& m, const ComplexMatrix& b) {
  require_valid(m, "solve");
  if (b.rows() != m.rows()) throw InputError("solve: right-hand side row count does not match");
  if (!all_finite(b)) throw InputError("solve: right-hand side has non-finite entries");
  return checked_lu(m).solve(b);
}

double smin(const ComplexMatrix& m) {
  require_valid(m, "smin");
  const Eigen::BDCSVD<ComplexMatrix> svd(m);
  return svd.singularValues().minCoeff();
}

std::vector<ComplexMatrix> monomials(const ComplexMatrix& m, int n_max) {
  require_valid(m, "monomials");
  if (n_max < 0) throw InputError("monomials: power bound must be >= 0");
  std::vector<ComplexMatrix> powers;
  powers.reserve(static_cast<std::size_t>(n_max) + 1);
  powers.push_back(ComplexMatrix::Identity(m.rows(), m.cols()));
  for (int k = 1; k <= n_max; ++k) powers.push_back(powers.back() * m);
  return powers;
}

ShiftedSmin::ShiftedSmin(const ComplexMatrix& m) {
  require_valid(m, "ShiftedSmin");
  if (is_upper_triangular(m)) {
    t_ = m;
  } else if (is_lower_triangular(m)) {
    // smin(lambda - M) = smin(lambda - M^T).
    t_ = m.transpose();
  } else {
    t_ = complex_schur(m, false, "ShiftedSmin").t;
  }

  const Eigen::Index n = t_.rows();
  start_.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double s = static_cast<double>(k);
    start_(k) = Complex(1.0 + 0.5 * std::sin(1.3 * s + 0.2), 0.5 * std::cos(0.7 * s + 0.1));
  }
  start_.normalize();
}

double ShiftedSmin::operator()(Complex lambda) const {
  const Eigen::Index n = t_.rows();
  if (n == 1) return std::abs(t_(0, 0) - lambda);

  const Eigen::Index steps = std::min<Eigen::Index>(n, kMaxLanczosSteps);
  ComplexMatrix basis(n, steps);
  Eigen::VectorXd alpha(steps);
  Eigen::VectorXd beta(steps);

  ComplexVector q = start_;
  double theta = 0.0;
  Eigen::Index used = 0;

  for (Eigen::Index k = 0; k < steps; ++k) {
    basis.col(k) = q;
    ComplexVector w = q;
    if (!upper_adjoint_solve_in_place(t_, lambda, w)) return 0.0;
    const double partial = w.norm();
    if (!std::isfinite(partial) || partial > kInverseNormCeiling) return 0.0;
    if (!upper_solve_in_place(t_, lambda, w)) return 0.0;
    if (!all_finite(w)) return 0.0;

    alpha(k) = q.dot(w).real();
    // Two passes of classical Gram-Schmidt against the whole basis.
    for (int pass = 0; pass < 2; ++pass) {
      const ComplexVector coeffs = basis.leftCols(k + 1).adjoint() * w;
      w.noalias() -= basis.leftCols(k + 1) * coeffs;
    }
    beta(k) = w.norm();
    used = k + 1;

    double next_theta = alpha(0);
    if (used > 1) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
      Eigen::VectorXd diag = alpha.head(used);
      Eigen::VectorXd sub = beta.head(used - 1);
      tri.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
      next_theta = tri.eigenvalues().maxCoeff();
    }
    const bool stalled = k > 0 && std::abs(next_theta - theta) <= 1e-13 * next_theta;
    theta = next_theta;
    if (stalled || beta(k) <= 1e-14 * theta) break;
    q = w / beta(k);
  }
  if (!(theta > 0.0) || !std::isfinite(theta)) return 0.0;
  return 1.0 / std::sqrt(theta);
}

ShiftedSolver::ShiftedSolver(const ComplexMatrix& m) {
  require_valid(m, "ShiftedSolver");
  if (is_upper_triangular(m)) {
    t_ = m;
    z_ = ComplexMatrix::Identity(m.rows(), m.cols());
    return;
  }
  auto form = complex_schur(m, true, "ShiftedSolver");
  t_ = std::move(form.t);
  z_ = std::move(form.z);
}

std::vector<Complex> ShiftedSolver::eigenvalues() const {
  std::vector<Complex> out(static_cast<std::size_t>(t_.rows()));
  for (Eigen::Index i = 0; i < t_.rows(); ++i) out[static_cast<std::size_t>(i)] = t_(i, i);
  return out;
}

double ShiftedSolver::distance_to_spectrum(Complex lambda) const {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < t_.rows(); ++i) best = std::min(best, std::abs(lambda - t_(i, i)));
  return best;
}

ComplexVector ShiftedSolver::to_schur(const ComplexVector& v) const { return z_.adjoint() * v; }

ComplexVector ShiftedSolver::from_schur(const ComplexVector& v) const { return z_ * v; }

ComplexVector ShiftedSolver::covector_to_schur(const ComplexVector& phi) const { return z_.transpose() * phi; }

ComplexVector ShiftedSolver::solve_schur(Complex lambda, const ComplexVector& b) const {
  // (lambda - T) y = b  <=>  (T - lambda) y = -b.
  ComplexVector y = -b;
  if (!upper_solve_in_place(t_, lambda, y)) {
    throw SingularityError("ShiftedSolver: shift coincides with an eigenvalue");
  }
  return y;
}

ComplexVector ShiftedSolver::apply(Complex lambda, const ComplexVector& b) const {
  return from_schur(solve_schur(lambda, to_schur(b)));
}

}  // namespace specpert::kernel
