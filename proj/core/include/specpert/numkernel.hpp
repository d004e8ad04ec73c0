#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace specpert {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

namespace kernel {

/// Backward-error constant of eig(): every returned eigenvalue satisfies
/// smin(lambda*I - M) <= eig_backward_kappa(n) * eps * ||M||_F.
double eig_backward_kappa(std::size_t n);

/// True when every entry is finite.
bool all_finite(const ComplexMatrix& m);
bool all_finite(const ComplexVector& v);

/// Throws InputError unless m is square, non-empty and finite.
void require_valid(const ComplexMatrix& m, const char* what);

/// Eigenvalues with algebraic multiplicity, in no particular order.
///
/// Triangular input returns its diagonal (exact). Real input goes through the
/// real Hessenberg/Francis solver, everything else through the complex Schur
/// solver. When QR iteration breaks down the input is rotated by up to three
/// fixed seeded unitary similarities and reduced again. Throws InputError on
/// non-finite entries and NumericalError if every attempt fails.
std::vector<Complex> eig(const ComplexMatrix& m);

/// Solves m * x = b with partial pivoting. Throws SingularityError when a
/// pivot has magnitude <= n * eps * ||m||_inf.
ComplexVector solve(const ComplexMatrix& m, const ComplexVector& b);
ComplexMatrix solve(const ComplexMatrix& m, const ComplexMatrix& b);

/// Smallest singular value (full SVD).
double smin(const ComplexMatrix& m);

/// [M^0, M^1, ..., M^N].
std::vector<ComplexMatrix> monomials(const ComplexMatrix& m, int n_max);

/// Induced infinity norm (max absolute row sum).
double norm_inf(const ComplexMatrix& m);

/// Evaluates lambda -> smin(lambda*I - M) for many shifts.
///
/// M is reduced once to upper-triangular Schur form T (triangular input is
/// used as is); each evaluation then runs Lanczos with full
/// reorthogonalization on (T - lambda)^{-1} (T - lambda)^{-H}, which costs
/// O(n^2) per step instead of the O(n^3) of a dense SVD.
class ShiftedSmin {
 public:
  explicit ShiftedSmin(const ComplexMatrix& m);

  /// Returns 0 when lambda is an exact eigenvalue of T or the inverse is too
  /// large to represent (smin below ~1e-150).
  double operator()(Complex lambda) const;

  std::size_t dim() const { return static_cast<std::size_t>(t_.rows()); }

 private:
  ComplexMatrix t_;
  ComplexVector start_;
};

/// Schur-based shifted solves x = (lambda*I - M)^{-1} b.
class ShiftedSolver {
 public:
  explicit ShiftedSolver(const ComplexMatrix& m);

  /// Eigenvalues read from the Schur diagonal.
  std::vector<Complex> eigenvalues() const;

  /// Distance from lambda to the Schur diagonal.
  double distance_to_spectrum(Complex lambda) const;

  /// Applies (lambda - M)^{-1} to b.
  ComplexVector apply(Complex lambda, const ComplexVector& b) const;

  /// Coordinates of v in the Schur basis (Z^H v) and back (Z v).
  ComplexVector to_schur(const ComplexVector& v) const;
  ComplexVector from_schur(const ComplexVector& v) const;
  /// Covector phi expressed in the Schur basis: Z^T phi.
  ComplexVector covector_to_schur(const ComplexVector& phi) const;

  /// Solves (lambda - T) y = b in Schur coordinates.
  ComplexVector solve_schur(Complex lambda, const ComplexVector& b) const;

 private:
  ComplexMatrix t_;
  ComplexMatrix z_;
};

}  // namespace kernel
}  // namespace specpert
