#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "specpert/numkernel.hpp"

namespace specpert::socle {

/// Rank-one element a = u * phi^T of the matrix algebra.
///
/// phi is a covector: it acts by the bilinear pairing phi^T v, no conjugation.
class RankOneOperator {
 public:
  /// Throws InputError if either vector is zero, non-finite, or the lengths
  /// differ.
  RankOneOperator(ComplexVector u, ComplexVector phi);

  const ComplexVector& u() const { return u_; }
  const ComplexVector& phi() const { return phi_; }
  std::size_t dim() const { return static_cast<std::size_t>(u_.size()); }

  ComplexMatrix matrix() const { return u_ * phi_.transpose(); }

  /// Characteristic functional tau_a(x) = phi^T x u, so that a x a = tau_a(x) a.
  Complex tau(const ComplexMatrix& x) const;

  /// phi^T u, the nonzero spectral point of a (when it is nonzero).
  Complex trace() const { return phi_.transpose() * u_; }

  RankOneOperator scaled(Complex c) const;
  /// a * x = u (x^T phi)^T.
  RankOneOperator right_multiplied(const ComplexMatrix& x) const;
  /// x * a = (x u) phi^T.
  RankOneOperator left_multiplied(const ComplexMatrix& x) const;

 private:
  ComplexVector u_;
  ComplexVector phi_;
};

/// tau_a(x); see RankOneOperator::tau.
Complex char_functional(const RankOneOperator& a, const ComplexMatrix& x);

struct SpectralRankOptions {
  std::size_t probes = 64;
  /// Relative threshold: eigenvalues of x*a with |lambda| <= tol * ||x*a||_F
  /// count as zero, and distinct values must be more than that far apart.
  double tol = 1e-8;
  std::uint64_t seed = 20240613;
};

/// Randomized spectral rank: max over Gaussian probes x of #sigma'(x * a).
///
/// Probe k draws its entries from a generator seeded with (seed, k), so the
/// answer does not depend on how probes are scheduled across workers.
std::size_t spectral_rank(const ComplexMatrix& a, const SpectralRankOptions& options = {});

/// Mutually orthogonal minimal idempotents p_j with nonzero weights lambda_j.
struct IdempotentFamily {
  std::vector<Complex> weights;
  std::vector<ComplexMatrix> idempotents;

  std::size_t size() const { return idempotents.size(); }

  /// Checks p_j^2 = p_j, p_i p_j = 0 (i != j), algebraic rank one, nonzero
  /// weights and consistent dimensions, relative to `tol`. Throws
  /// ValidationError on the first violation.
  void validate(double tol = 1e-9) const;

  /// sum_j lambda_j p_j.
  ComplexMatrix combination() const;
};

/// a = sum lambda_j p_j together with y = sum (alpha_j / lambda_j) p_j, so
/// that y a = a y = sum alpha_j p_j.
struct CommutingWitness {
  ComplexMatrix a;
  ComplexMatrix y;
};

/// Throws ValidationError for an invalid family and InputError when alphas
/// has the wrong length, repeats a value or contains zero.
CommutingWitness construct_commuting_witness(const IdempotentFamily& family, std::span<const Complex> alphas);

struct CommutingDiff {
  std::size_t new_count = 0;
  std::size_t lost_count = 0;
  std::size_t rank = 0;

  /// Both one-sided counts stay within rank(a).
  bool within_bound() const { return new_count <= rank && lost_count <= rank; }
};

/// Compares sigma(x + a) with sigma(x) for commuting x and a.
///
/// new_count counts distinct points of sigma(x + a) farther than tol from
/// sigma(x); lost_count the converse. Both spectra are clustered at tol.
/// Throws PreconditionError unless ||x a - a x||_F <= tol ||x||_F ||a||_F.
CommutingDiff commuting_diff_check(const ComplexMatrix& x, const ComplexMatrix& a, double tol,
                                   const SpectralRankOptions& rank_options = {});

}  // namespace specpert::socle
