#include "specpert/socle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "specpert/error.hpp"
#include "specpert/parallel.hpp"
#include "specpert/spectra.hpp"

namespace specpert::socle {
namespace {

ComplexMatrix gaussian_probe(std::size_t n, std::uint64_t seed, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal;
  const auto dim = static_cast<Eigen::Index>(n);
  ComplexMatrix x(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < dim; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      x(i, j) = Complex(re, im);
    }
  }
  return x;
}

std::size_t algebraic_rank(const ComplexMatrix& p, double tol) {
  const Eigen::BDCSVD<ComplexMatrix> svd(p);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  return static_cast<std::size_t>((s.array() > tol * s(0)).count());
}

}  // namespace

RankOneOperator::RankOneOperator(ComplexVector u, ComplexVector phi) : u_(std::move(u)), phi_(std::move(phi)) {
  if (u_.size() == 0 || u_.size() != phi_.size()) {
    throw InputError("rank-one operator: u and phi must be non-empty and of equal length");
  }
  if (!kernel::all_finite(u_) || !kernel::all_finite(phi_)) {
    throw InputError("rank-one operator: u and phi must be finite");
  }
  if (u_.squaredNorm() == 0.0 || phi_.squaredNorm() == 0.0) {
    throw InputError("rank-one operator: u and phi must be nonzero");
  }
}

Complex RankOneOperator::tau(const ComplexMatrix& x) const {
  if (x.rows() != u_.size() || x.cols() != u_.size()) {
    throw InputError("characteristic functional: dimension mismatch");
  }
  return phi_.transpose() * (x * u_);
}

RankOneOperator RankOneOperator::scaled(Complex c) const { return {c * u_, phi_}; }

RankOneOperator RankOneOperator::right_multiplied(const ComplexMatrix& x) const {
  return {u_, x.transpose() * phi_};
}

RankOneOperator RankOneOperator::left_multiplied(const ComplexMatrix& x) const { return {x * u_, phi_}; }

Complex char_functional(const RankOneOperator& a, const ComplexMatrix& x) { return a.tau(x); }

std::size_t spectral_rank(const ComplexMatrix& a, const SpectralRankOptions& options) {
  kernel::require_valid(a, "spectral_rank");
  if (options.probes == 0) throw InputError("spectral_rank: need at least one probe");
  if (!(options.tol > 0.0)) throw InputError("spectral_rank: tolerance must be positive");
  if (a.squaredNorm() == 0.0) return 0;

  const auto n = static_cast<std::size_t>(a.rows());
  std::vector<std::size_t> counts(options.probes, 0);
  parallel_for(options.probes, [&](std::size_t k) {
    const ComplexMatrix xa = gaussian_probe(n, options.seed, k) * a;
    const double scale = options.tol * xa.norm();
    if (scale == 0.0) return;
    const auto s = spectra::spectrum(xa, scale);
    counts[k] = s.count_nonzero(scale);
  });
  return *std::max_element(counts.begin(), counts.end());
}

void IdempotentFamily::validate(double tol) const {
  if (idempotents.empty()) throw ValidationError("idempotent family is empty");
  if (weights.size() != idempotents.size()) {
    throw ValidationError("idempotent family: weights and idempotents differ in count");
  }
  const Eigen::Index n = idempotents.front().rows();
  for (std::size_t j = 0; j < idempotents.size(); ++j) {
    const auto& p = idempotents[j];
    if (p.rows() != n || p.cols() != n) throw ValidationError("idempotent family: inconsistent dimensions");
    if (!kernel::all_finite(p)) throw ValidationError("idempotent family: non-finite entries");
    if (weights[j] == Complex{}) throw ValidationError("idempotent family: weights must be nonzero");
    const double scale = std::max(1.0, p.squaredNorm());
    if ((p * p - p).norm() > tol * scale) {
      throw ValidationError("idempotent family: p_" + std::to_string(j) + " is not idempotent");
    }
    if (algebraic_rank(p, std::sqrt(tol)) != 1) {
      throw ValidationError("idempotent family: p_" + std::to_string(j) + " is not rank one");
    }
    for (std::size_t i = 0; i < j; ++i) {
      const auto& q = idempotents[i];
      const double pair_scale = std::max(1.0, p.norm() * q.norm());
      if ((p * q).norm() > tol * pair_scale || (q * p).norm() > tol * pair_scale) {
        throw ValidationError("idempotent family: p_" + std::to_string(i) + " and p_" + std::to_string(j) +
                              " are not orthogonal");
      }
    }
  }
}

ComplexMatrix IdempotentFamily::combination() const {
  ComplexMatrix a = ComplexMatrix::Zero(idempotents.front().rows(), idempotents.front().cols());
  for (std::size_t j = 0; j < idempotents.size(); ++j) a += weights[j] * idempotents[j];
  return a;
}

CommutingWitness construct_commuting_witness(const IdempotentFamily& family, std::span<const Complex> alphas) {
  family.validate();
  if (alphas.size() != family.size()) {
    throw InputError("commuting witness: need one alpha per idempotent (got " + std::to_string(alphas.size()) +
                     ", expected " + std::to_string(family.size()) + ")");
  }
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (alphas[i] == Complex{}) throw InputError("commuting witness: alphas must be nonzero");
    for (std::size_t j = 0; j < i; ++j) {
      if (alphas[i] == alphas[j]) throw InputError("commuting witness: alphas must be distinct");
    }
  }

  CommutingWitness out;
  out.a = family.combination();
  out.y = ComplexMatrix::Zero(out.a.rows(), out.a.cols());
  for (std::size_t j = 0; j < family.size(); ++j) {
    out.y += (alphas[j] / family.weights[j]) * family.idempotents[j];
  }
  return out;
}

CommutingDiff commuting_diff_check(const ComplexMatrix& x, const ComplexMatrix& a, double tol,
                                   const SpectralRankOptions& rank_options) {
  kernel::require_valid(x, "commuting_diff_check");
  kernel::require_valid(a, "commuting_diff_check");
  if (x.rows() != a.rows()) throw InputError("commuting_diff_check: dimension mismatch");
  if (!(tol > 0.0)) throw InputError("commuting_diff_check: tolerance must be positive");

  const double commutator = (x * a - a * x).norm();
  if (commutator > tol * x.norm() * a.norm()) {
    throw PreconditionError("commuting_diff_check: x and a do not commute (||xa - ax|| = " +
                            std::to_string(commutator) + ")");
  }

  CommutingDiff out;
  out.rank = spectral_rank(a, rank_options);
  const auto before = spectra::spectrum(x, tol);
  const auto after = spectra::spectrum(x + a, tol);
  for (const auto& p : after.points()) {
    if (before.distance_to(p.value) > tol) ++out.new_count;
  }
  for (const auto& p : before.points()) {
    if (after.distance_to(p.value) > tol) ++out.lost_count;
  }
  return out;
}

}  // namespace specpert::socle
