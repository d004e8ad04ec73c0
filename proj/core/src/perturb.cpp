#include "specpert/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <string>

#include "specpert/error.hpp"
#include "specpert/parallel.hpp"

namespace specpert::perturb {
namespace {

double distance_to(std::span<const Complex> values, Complex z) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& v : values) best = std::min(best, std::abs(v - z));
  return best;
}

void require_resolvent_point(std::span<const Complex> spectrum, Complex lambda, double tol, const char* what) {
  const double d = distance_to(spectrum, lambda);
  if (!(d > 10.0 * tol)) {
    throw PreconditionError(std::string(what) + ": lambda is within 10*tol of sigma(x) (distance " +
                            std::to_string(d) + ")");
  }
}

void require_conformal(const ComplexMatrix& x, const RankOneOperator& p, const char* what) {
  kernel::require_valid(x, what);
  if (static_cast<std::size_t>(x.rows()) != p.dim()) {
    throw InputError(std::string(what) + ": operator and rank-one perturbation differ in dimension");
  }
}

class Fnv1a {
 public:
  void add(const void* data, std::size_t size) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < size; ++i) {
      hash_ ^= bytes[i];
      hash_ *= 0x100000001b3ULL;
    }
  }
  void add(const Complex* values, Eigen::Index count) {
    for (Eigen::Index i = 0; i < count; ++i) {
      const double parts[2] = {values[i].real(), values[i].imag()};
      add(parts, sizeof(parts));
    }
  }
  std::string hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out(16, '0');
    std::uint64_t h = hash_;
    for (int i = 15; i >= 0; --i) {
      out[static_cast<std::size_t>(i)] = kDigits[h & 0xF];
      h >>= 4;
    }
    return out;
  }

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

}  // namespace

CriterionResult criterion(const ComplexMatrix& x, const ComplexMatrix& y, Complex lambda, double tol) {
  kernel::require_valid(x, "criterion");
  kernel::require_valid(y, "criterion");
  if (x.rows() != y.rows()) throw InputError("criterion: x and y differ in dimension");
  if (!(tol > 0.0)) throw InputError("criterion: tolerance must be positive");

  const auto sigma_x = kernel::eig(x);
  require_resolvent_point(sigma_x, lambda, tol, "criterion");

  CriterionResult out;
  const auto sigma_sum = kernel::eig(x + y);
  out.lhs = distance_to(sigma_sum, lambda) <= tol;

  const ComplexMatrix shifted = lambda * ComplexMatrix::Identity(x.rows(), x.cols()) - x;
  const auto sigma_resolvent = kernel::eig(kernel::solve(shifted, y));
  out.rhs = distance_to(sigma_resolvent, Complex{1.0, 0.0}) <= tol;
  return out;
}

Complex resolvent_scalar(const ComplexMatrix& x, const RankOneOperator& p, Complex lambda, double tol) {
  require_conformal(x, p, "resolvent_scalar");
  const auto sigma_x = kernel::eig(x);
  require_resolvent_point(sigma_x, lambda, tol, "resolvent_scalar");
  const ComplexMatrix shifted = lambda * ComplexMatrix::Identity(x.rows(), x.cols()) - x;
  return p.phi().transpose() * kernel::solve(shifted, p.u());
}

ResolventFunction::ResolventFunction(const ComplexMatrix& x, const RankOneOperator& p)
    : solver_((require_conformal(x, p, "ResolventFunction"), x)),
      u_schur_(solver_.to_schur(p.u())),
      phi_schur_(solver_.covector_to_schur(p.phi())) {}

Complex ResolventFunction::operator()(Complex lambda) const {
  if (solver_.distance_to_spectrum(lambda) == 0.0) {
    throw PreconditionError("resolvent function: lambda is an eigenvalue of x");
  }
  return phi_schur_.transpose() * solver_.solve_schur(lambda, u_schur_);
}

Complex ResolventFunction::derivative(Complex lambda) const {
  if (solver_.distance_to_spectrum(lambda) == 0.0) {
    throw PreconditionError("resolvent function: lambda is an eigenvalue of x");
  }
  const ComplexVector once = solver_.solve_schur(lambda, u_schur_);
  return -Complex(phi_schur_.transpose() * solver_.solve_schur(lambda, once));
}

LaurentCoefficients laurent_coeffs(const ComplexMatrix& x, const RankOneOperator& p, int n_max, double tol) {
  require_conformal(x, p, "laurent_coeffs");
  if (n_max < 0) throw InputError("laurent_coeffs: N must be >= 0");

  LaurentCoefficients out;
  out.coeffs.reserve(static_cast<std::size_t>(n_max) + 1);
  ComplexVector v = p.u();
  for (int j = 0; j <= n_max; ++j) {
    out.coeffs.push_back(p.phi().transpose() * v);
    if (j < n_max) v = x * v;
  }

  const double x_norm = kernel::norm_inf(x);
  const double base = p.u().cwiseAbs().maxCoeff() * p.phi().cwiseAbs().sum();
  bool witness = n_max >= 1;
  double power = 1.0;
  for (int j = 1; j <= n_max; ++j) {
    power *= x_norm;
    if (!(std::abs(out.coeffs[static_cast<std::size_t>(j)]) > tol * power * base)) witness = false;
  }
  out.essential_singularity_witness = witness;

  Fnv1a hash;
  hash.add(x.data(), x.size());
  hash.add(p.u().data(), p.u().size());
  hash.add(p.phi().data(), p.phi().size());
  out.fingerprint = hash.hex();
  return out;
}

LevelSetResult level_set_roots(const ComplexMatrix& x, const RankOneOperator& p, Complex beta,
                               const spectra::Window& window, double tol) {
  require_conformal(x, p, "level_set_roots");
  if (beta == Complex{}) throw InputError("level_set_roots: beta must be nonzero");
  if (!(tol > 0.0)) throw InputError("level_set_roots: tolerance must be positive");

  const auto sigma_x = kernel::eig(x);
  const auto candidates = kernel::eig(x + p.matrix() / beta);
  const ResolventFunction f(x, p);
  const double target = 1e-8 * (1.0 + std::abs(beta));

  LevelSetResult out;
  std::vector<Complex> accepted;
  for (const auto& start : candidates) {
    if (!window.contains(start) || distance_to(sigma_x, start) <= tol) continue;
    Complex lambda = start;
    double residual = std::numeric_limits<double>::infinity();
    bool converged = false;
    for (int it = 0; it <= kNewtonIterationCap; ++it) {
      if (f.distance_to_spectrum(lambda) == 0.0) break;
      const Complex r = f(lambda) - beta;
      residual = std::abs(r);
      if (residual <= target) {
        converged = true;
        break;
      }
      if (it == kNewtonIterationCap) break;
      const Complex d = f.derivative(lambda);
      if (d == Complex{} || !std::isfinite(std::abs(d))) break;
      const Complex next = lambda - r / d;
      if (!std::isfinite(next.real()) || !std::isfinite(next.imag())) break;
      lambda = next;
    }
    if (converged && window.contains(lambda)) {
      accepted.push_back(lambda);
    } else if (!converged) {
      out.diverged.push_back({start, lambda, residual});
    }
  }

  const auto distinct = spectra::SpectrumSet::from_values(accepted, tol);
  out.roots.reserve(distinct.size());
  for (const auto& pt : distinct.points()) out.roots.push_back(pt.value);
  return out;
}

double moment_order_slope(const MomentFunctional& functional, std::span<const Complex> lambdas) {
  if (lambdas.size() < 2) throw InputError("moment_order_slope: need at least two points");
  double sx = 0.0;
  double sy = 0.0;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& lambda : lambdas) {
    const double lx = std::log(std::abs(lambda));
    const double ly = std::log(functional.deviation_from_one(lambda));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(lambdas.size());
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw InputError("moment_order_slope: points must have distinct moduli");
  return (n * sxy - sx * sy) / denom;
}

DiscontinuityReport discontinuity_probe(const ComplexMatrix& x, const ComplexMatrix& a, std::span<const double> betas,
                                        const Disk& disk, double grid_step, const ProbeOptions& options) {
  kernel::require_valid(x, "discontinuity_probe");
  kernel::require_valid(a, "discontinuity_probe");
  if (x.rows() != a.rows()) throw InputError("discontinuity_probe: x and a differ in dimension");
  if (betas.empty()) throw InputError("discontinuity_probe: need at least one beta");
  if (!(disk.radius > 0.0) || !(grid_step > 0.0)) {
    throw InputError("discontinuity_probe: disk radius and grid step must be positive");
  }
  bool has_one = false;
  for (double b : betas) {
    if (!(b >= 0.0 && b <= 1.0)) throw InputError("discontinuity_probe: betas must lie in [0, 1]");
    has_one = has_one || b == 1.0;
  }
  if (!has_one) throw InputError("discontinuity_probe: betas must include 1");

  // The disk has to sit inside a single hole of sigma(x).
  const auto sigma_x = spectra::spectrum(x, options.cluster_tol);
  const Complex corners[] = {disk.center + Complex(-disk.radius, -disk.radius),
                             disk.center + Complex(disk.radius, disk.radius)};
  const auto plan = spectra::plan_raster(sigma_x, corners, options.raster_cells);
  const auto labels = spectra::label_components(sigma_x, plan.window, plan.resolution, plan.thickening);
  int hole = labels.label_near(disk.center);
  const double sx = (plan.window.re_max - plan.window.re_min) / static_cast<double>(plan.resolution.nx - 1);
  const double sy = (plan.window.im_max - plan.window.im_min) / static_cast<double>(plan.resolution.ny - 1);
  for (std::size_t j = 0; j < plan.resolution.ny && hole >= 0; ++j) {
    for (std::size_t i = 0; i < plan.resolution.nx; ++i) {
      const Complex node{plan.window.re_min + static_cast<double>(i) * sx,
                         plan.window.im_min + static_cast<double>(j) * sy};
      if (disk.contains(node) && labels.at(i, j) != hole) {
        hole = -1;
        break;
      }
    }
  }
  if (hole < 0) throw PreconditionError("discontinuity_probe: the disk is not contained in a hole of sigma(x)");

  std::vector<double> sorted(betas.begin(), betas.end());
  std::sort(sorted.begin(), sorted.end());

  const auto sigma_end = spectra::spectrum(x + a, options.cluster_tol);
  std::vector<Complex> offsets;
  const auto reach = static_cast<long>(std::floor(disk.radius / grid_step));
  for (long j = -reach; j <= reach; ++j) {
    for (long i = -reach; i <= reach; ++i) {
      const Complex off{static_cast<double>(i) * grid_step, static_cast<double>(j) * grid_step};
      if (std::abs(off) <= disk.radius) offsets.push_back(off);
    }
  }

  DiscontinuityReport report;
  report.disk = disk;
  report.rows.resize(sorted.size());
  parallel_for(sorted.size(), [&](std::size_t k) {
    const double beta = sorted[k];
    const ComplexMatrix z = x + beta * a;
    const auto values = kernel::eig(z);
    ProbeRow row;
    row.beta = beta;
    row.eig_in_disk = static_cast<std::size_t>(std::count_if(
        values.begin(), values.end(), [&](Complex v) { return std::abs(v - disk.center) < disk.radius; }));
    const kernel::ShiftedSmin smin(z);
    row.min_smin = std::numeric_limits<double>::infinity();
    for (const auto& off : offsets) row.min_smin = std::min(row.min_smin, smin(disk.center + off));
    row.hausdorff = spectra::hausdorff(spectra::SpectrumSet::from_values(values, options.cluster_tol), sigma_end);
    report.rows[k] = row;
  });
  return report;
}

std::vector<ScanRow> perturbation_scan(const ComplexMatrix& x, const RankOneOperator& q, std::span<const Complex> alphas,
                                       double threshold, double cluster_tol) {
  require_conformal(x, q, "perturbation_scan");
  if (!(threshold > 0.0)) throw InputError("perturbation_scan: threshold must be positive");

  const auto sigma_x = spectra::spectrum(x, cluster_tol);
  const ComplexMatrix qmat = q.matrix();
  std::vector<ScanRow> rows(alphas.size());
  parallel_for(alphas.size(), [&](std::size_t k) {
    ScanRow row;
    row.alpha = alphas[k];
    row.spectrum = spectra::spectrum(x + alphas[k] * qmat, cluster_tol);
    row.count_above_threshold = row.spectrum.count_nonzero(threshold);
    row.hausdorff_to_alpha0 = spectra::hausdorff(row.spectrum, sigma_x);
    rows[k] = std::move(row);
  });
  return rows;
}

}  // namespace specpert::perturb
