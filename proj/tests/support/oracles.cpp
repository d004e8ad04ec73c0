#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {
namespace mp = boost::multiprecision;

std::size_t algebraic_rank(const Matrix& m, double tol) {
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > tol * s(0)) ++r;
  }
  return r;
}

Matrix gaussian(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = Complex(n(rng), n(rng));
  }
  return m;
}

Matrix random_rank(std::size_t n, std::size_t r, std::mt19937_64& rng) {
  if (r == 0) return Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  return gaussian(n, r, rng) * gaussian(r, n, rng);
}

Matrix random_unitary(std::size_t n, std::mt19937_64& rng) {
  Eigen::HouseholderQR<Matrix> qr(gaussian(n, n, rng));
  return qr.householderQ() * Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
}

std::vector<double> volterra_moments(int k_max) {
  using Q = mp::cpp_rational;
  using F = mp::cpp_bin_float_50;
  const F two_pi = 2 * boost::math::constants::pi<F>();

  std::vector<Q> p;  // polynomial coefficients, p[m] t^m
  Q a = 1;           // coefficient of sin
  Q b = 0;           // coefficient of cos
  std::vector<double> out;
  for (int k = 0; k <= k_max; ++k) {
    F integral = 0;
    F power = two_pi;
    for (std::size_t m = 0; m < p.size(); ++m) {
      integral += F(p[m]) * power / F(static_cast<int>(m) + 1);
      power *= two_pi;
    }
    out.push_back(static_cast<double>(integral));

    // V t^m = t^{m+1}/(m+1); V sin = 1 - cos; V cos = sin.
    std::vector<Q> next(p.size() + 1, Q(0));
    for (std::size_t m = 0; m < p.size(); ++m) next[m + 1] = p[m] / Q(static_cast<int>(m) + 1);
    next[0] += a;
    const Q next_a = b;
    const Q next_b = -a;
    p = std::move(next);
    a = next_a;
    b = next_b;
  }
  return out;
}

double partial_fraction(const std::vector<Rational>& a, const std::vector<Rational>& u, const std::vector<Rational>& w,
                        Rational lambda) {
  using Q = mp::cpp_rational;
  auto q = [](Rational r) { return Q(r.num) / Q(r.den); };
  Q sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += q(w[i]) * q(u[i]) / (q(lambda) - q(a[i]));
  return static_cast<double>(sum);
}

std::vector<Complex> polynomial_roots(const std::vector<Complex>& coeffs) {
  const std::size_t n = coeffs.size();
  if (n == 0) return {};
  auto eval = [&](Complex z) {
    Complex v = 1.0;
    for (std::size_t k = n; k-- > 0;) v = v * z + coeffs[k];
    return v;
  };
  double bound = 0.0;
  for (const auto& c : coeffs) bound = std::max(bound, std::abs(c));
  const double radius = 1.0 + bound;
  std::vector<Complex> z(n);
  for (std::size_t k = 0; k < n; ++k) z[k] = std::polar(0.9 * radius, 0.4 + 2.0 * std::numbers::pi * k / n);
  for (int iter = 0; iter < 5000; ++iter) {
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      Complex denom = 1.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) denom *= z[i] - z[j];
      }
      const Complex step = eval(z[i]) / denom;
      z[i] -= step;
      change = std::max(change, std::abs(step));
    }
    if (change < 1e-15 * radius) break;
  }
  return z;
}

std::vector<Complex> secular_roots(const std::vector<Complex>& a, const std::vector<Complex>& u,
                                   const std::vector<Complex>& w, Complex beta) {
  const std::size_t n = a.size();
  // Coefficients lowest degree first.
  auto multiply = [](const std::vector<Complex>& p, Complex root) {
    std::vector<Complex> out(p.size() + 1, Complex{});
    for (std::size_t k = 0; k < p.size(); ++k) {
      out[k + 1] += p[k];
      out[k] -= root * p[k];
    }
    return out;
  };
  std::vector<Complex> full{1.0};
  for (const auto& ai : a) full = multiply(full, ai);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Complex> partial{1.0};
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) partial = multiply(partial, a[j]);
    }
    for (std::size_t k = 0; k < partial.size(); ++k) full[k] -= w[i] * u[i] / beta * partial[k];
  }
  full.pop_back();  // leading coefficient is 1
  return polynomial_roots(full);
}

RasterComponents raster_components(const std::vector<Complex>& points, double re_min, double re_max, double im_min,
                                   double im_max, std::size_t nx, std::size_t ny, double thickening) {
  const double sx = (re_max - re_min) / static_cast<double>(nx - 1);
  const double sy = (im_max - im_min) / static_cast<double>(ny - 1);
  std::vector<char> solid(nx * ny, 0);
  RasterComponents out;
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const Complex z(re_min + static_cast<double>(i) * sx, im_min + static_cast<double>(j) * sy);
      for (const auto& p : points) {
        if (std::abs(z - p) <= thickening) {
          solid[j * nx + i] = 1;
          ++out.spectrum_cells;
          break;
        }
      }
    }
  }
  std::vector<std::size_t> parent(nx * ny);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto unite = [&](std::size_t x, std::size_t y) { parent[find(x)] = find(y); };
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t id = j * nx + i;
      if (solid[id]) continue;
      if (i + 1 < nx && !solid[id + 1]) unite(id, id + 1);
      if (j + 1 < ny && !solid[id + nx]) unite(id, id + nx);
    }
  }
  std::vector<char> touches(nx * ny, 0);
  std::vector<std::size_t> size(nx * ny, 0);
  for (std::size_t j = 0; j < ny; ++j) {
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t id = j * nx + i;
      if (solid[id]) continue;
      const std::size_t root = find(id);
      ++size[root];
      if (i == 0 || j == 0 || i + 1 == nx || j + 1 == ny) touches[root] = 1;
    }
  }
  for (std::size_t id = 0; id < nx * ny; ++id) {
    if (!solid[id] && find(id) == id && !touches[id]) {
      ++out.holes;
      out.sizes.push_back(size[id]);
    }
  }
  return out;
}

std::vector<Complex> circle(std::size_t count, double radius, Complex center) {
  std::vector<Complex> out(count);
  for (std::size_t k = 0; k < count; ++k) {
    out[k] = center + std::polar(radius, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(count));
  }
  return out;
}

}  // namespace oracle
