#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include "specpert/error.hpp"
#include "specpert/perturb.hpp"

namespace specpert::perturb {

namespace mp = boost::multiprecision;
using ExtComplex = mp::cpp_complex_50;
using ExtReal = mp::cpp_bin_float_50;

struct MomentFunctional::Extended {
  std::vector<ExtComplex> weights;
  std::vector<ExtComplex> samples;
};

namespace {

ExtComplex widen(Complex z) { return {z.real(), z.imag()}; }

Complex narrow(const ExtComplex& z) {
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

// Solves the Hermitian positive definite system g z = b by Gaussian
// elimination with partial pivoting. Returns false on a zero pivot.
bool solve_dense(std::vector<std::vector<ExtComplex>> g, std::vector<ExtComplex>& b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    ExtReal best = abs(g[col][col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const ExtReal mag = abs(g[r][col]);
      if (mag > best) {
        best = mag;
        pivot = r;
      }
    }
    if (best == 0) return false;
    std::swap(g[col], g[pivot]);
    std::swap(b[col], b[pivot]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const ExtComplex factor = g[r][col] / g[col][col];
      for (std::size_t c = col; c < n; ++c) g[r][c] -= factor * g[col][c];
      b[r] -= factor * b[col];
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    for (std::size_t c = k + 1; c < n; ++c) b[k] -= g[k][c] * b[c];
    b[k] /= g[k][k];
  }
  return true;
}

}  // namespace

double MomentFunctional::max_residual() const {
  return residuals_.empty() ? 0.0 : *std::max_element(residuals_.begin(), residuals_.end());
}

Complex MomentFunctional::value(Complex lambda) const {
  Complex sum{};
  for (Eigen::Index i = 0; i < weights_.size(); ++i) sum += weights_(i) / (lambda - samples_(i));
  return sum;
}

double MomentFunctional::deviation_from_one(Complex lambda) const {
  const ExtComplex l = widen(lambda);
  ExtComplex sum{0};
  for (std::size_t i = 0; i < extended_->weights.size(); ++i) {
    sum += extended_->weights[i] / (l - extended_->samples[i]);
  }
  sum -= ExtComplex{1};
  return static_cast<double>(abs(sum));
}

RankOneOperator MomentFunctional::as_rank_one() const {
  return {ComplexVector::Ones(weights_.size()), weights_};
}

MomentFunctional make_moment_functional(std::span<const Complex> samples, int order, MomentClosure closure) {
  const auto m = samples.size();
  if (m == 0) throw InputError("hole_filling_functional: no samples");
  if (order < 1 || static_cast<std::size_t>(order) > m) {
    throw InputError("hole_filling_functional: order K must satisfy 1 <= K <= m (K = " + std::to_string(order) +
                     ", m = " + std::to_string(m) + ")");
  }
  if (closure == MomentClosure::exact_order && static_cast<std::size_t>(order) >= m) {
    throw InputError("hole_filling_functional: exact-order closure needs K < m");
  }
  double largest = 0.0;
  for (const auto& a : samples) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw InputError("hole_filling_functional: samples must be finite");
    }
    largest = std::max(largest, std::abs(a));
  }
  const double floor = 1e-8 * std::max(1.0, largest);
  for (const auto& a : samples) {
    if (std::abs(a) <= floor) throw InputError("hole_filling_functional: a sample lies too close to 0");
  }

  const auto conditions = static_cast<std::size_t>(order) + (closure == MomentClosure::exact_order ? 1 : 0);
  auto ext = std::make_shared<MomentFunctional::Extended>();
  ext->samples.reserve(m);
  for (const auto& a : samples) ext->samples.push_back(widen(a));

  // rows[k][i] = a_i^{-(k+1)}
  std::vector<std::vector<ExtComplex>> rows(conditions, std::vector<ExtComplex>(m));
  for (std::size_t i = 0; i < m; ++i) {
    const ExtComplex inv = ExtComplex{1} / ext->samples[i];
    ExtComplex power = inv;
    for (std::size_t k = 0; k < conditions; ++k) {
      rows[k][i] = power;
      power *= inv;
    }
  }
  std::vector<ExtComplex> rhs(conditions, ExtComplex{0});
  rhs[0] = ExtComplex{-1};
  if (closure == MomentClosure::exact_order) rhs[conditions - 1] = ExtComplex{-1};

  // Minimum-norm solution w = A^H (A A^H)^{-1} b.
  std::vector<std::vector<ExtComplex>> gram(conditions, std::vector<ExtComplex>(conditions));
  for (std::size_t r = 0; r < conditions; ++r) {
    for (std::size_t c = 0; c < conditions; ++c) {
      ExtComplex s{0};
      for (std::size_t i = 0; i < m; ++i) s += rows[r][i] * conj(rows[c][i]);
      gram[r][c] = s;
    }
  }
  if (!solve_dense(gram, rhs)) {
    throw InputError("hole_filling_functional: moment conditions are degenerate for these samples");
  }
  ext->weights.assign(m, ExtComplex{0});
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < conditions; ++k) ext->weights[i] += conj(rows[k][i]) * rhs[k];
  }

  MomentFunctional out;
  out.order_ = order;
  out.closure_ = closure;
  out.samples_.resize(static_cast<Eigen::Index>(m));
  out.weights_.resize(static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < m; ++i) {
    out.samples_(static_cast<Eigen::Index>(i)) = samples[i];
    out.weights_(static_cast<Eigen::Index>(i)) = narrow(ext->weights[i]);
  }
  if (!kernel::all_finite(out.weights_)) {
    throw InputError("hole_filling_functional: weights overflow double precision");
  }

  // Residuals of the imposed conditions, evaluated in double.
  out.residuals_.reserve(static_cast<std::size_t>(order));
  ComplexVector inverse_power = out.samples_.cwiseInverse();
  for (int k = 1; k <= order; ++k) {
    const Complex phi = out.weights_.transpose() * inverse_power;
    out.residuals_.push_back(k == 1 ? std::abs(phi + 1.0) : std::abs(phi));
    inverse_power = inverse_power.cwiseQuotient(out.samples_);
  }
  out.extended_ = std::move(ext);
  return out;
}

HoleFilling hole_filling_functional(std::span<const Complex> samples, int order, MomentClosure closure) {
  HoleFilling out{make_moment_functional(samples, order, closure), {}};
  const auto& w = out.functional.weights();
  out.perturbation = ComplexVector::Ones(w.size()) * w.transpose();
  return out;
}

}  // namespace specpert::perturb
