#include "specpert/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

#include "specpert/error.hpp"
#include "specpert/parallel.hpp"

namespace specpert::spectra {
namespace {

constexpr int kUnvisited = -3;

struct Cluster {
  std::vector<Complex> members;
  Complex mean() const {
    Complex sum{};
    for (const auto& m : members) sum += m;
    return sum / static_cast<double>(members.size());
  }
};

void require_nonempty(const SpectrumSet& s, const char* what) {
  if (s.empty()) throw InputError(std::string(what) + ": spectrum set is empty");
}

void validate_window(const Window& w) {
  const bool finite = std::isfinite(w.re_min) && std::isfinite(w.re_max) && std::isfinite(w.im_min) &&
                      std::isfinite(w.im_max);
  if (!finite || !(w.re_max > w.re_min) || !(w.im_max > w.im_min)) {
    throw InputError("window must be finite with re_min < re_max and im_min < im_max");
  }
}

void validate_raster(const SpectrumSet& s, const Window& window, Resolution resolution, double thickening) {
  validate_window(window);
  if (resolution.nx < 2 || resolution.ny < 2) throw InputError("resolution must be at least 2x2");
  const double sx = (window.re_max - window.re_min) / static_cast<double>(resolution.nx - 1);
  const double sy = (window.im_max - window.im_min) / static_cast<double>(resolution.ny - 1);
  const double step = std::max(sx, sy);
  if (!(thickening >= 2.0 * step * (1.0 - 1e-12))) {
    throw InputError("thickening " + std::to_string(thickening) + " is below two grid steps (" +
                     std::to_string(2.0 * step) + ")");
  }
  const double margin = 2.0 * thickening * (1.0 - 1e-12);
  for (const auto& p : s.points()) {
    if (!window.contains(p.value, margin)) {
      throw InputError("window must contain every spectrum point with a margin of two thickening radii");
    }
  }
}

}  // namespace

SpectrumSet SpectrumSet::from_values(std::span<const Complex> values, double cluster_tol) {
  if (!(cluster_tol >= 0.0) || !std::isfinite(cluster_tol)) {
    throw InputError("cluster tolerance must be finite and non-negative");
  }
  std::vector<Complex> sorted(values.begin(), values.end());
  for (const auto& v : sorted) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw InputError("spectrum values must be finite");
  }
  std::stable_sort(sorted.begin(), sorted.end(), [](Complex a, Complex b) {
    const double ma = std::abs(a);
    const double mb = std::abs(b);
    if (ma != mb) return ma < mb;
    return std::arg(a) < std::arg(b);
  });

  std::vector<Cluster> clusters;
  for (const auto& v : sorted) {
    bool placed = false;
    for (auto& c : clusters) {
      const bool fits = std::all_of(c.members.begin(), c.members.end(),
                                    [&](Complex m) { return std::abs(m - v) <= cluster_tol; });
      if (fits) {
        c.members.push_back(v);
        placed = true;
        break;
      }
    }
    if (!placed) clusters.push_back(Cluster{{v}});
  }

  // Enforce the separation invariant on the representatives.
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t i = 0; i < clusters.size() && !merged; ++i) {
      for (std::size_t j = i + 1; j < clusters.size(); ++j) {
        if (std::abs(clusters[i].mean() - clusters[j].mean()) <= cluster_tol) {
          clusters[i].members.insert(clusters[i].members.end(), clusters[j].members.begin(),
                                     clusters[j].members.end());
          clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(j));
          merged = true;
          break;
        }
      }
    }
  }

  SpectrumSet out;
  out.cluster_tol_ = cluster_tol;
  out.points_.reserve(clusters.size());
  for (const auto& c : clusters) out.points_.push_back({c.mean(), c.members.size()});
  return out;
}

std::size_t SpectrumSet::total_multiplicity() const {
  std::size_t total = 0;
  for (const auto& p : points_) total += p.multiplicity;
  return total;
}

double SpectrumSet::distance_to(Complex z) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : points_) best = std::min(best, std::abs(p.value - z));
  return best;
}

std::size_t SpectrumSet::count_nonzero(double threshold) const {
  return static_cast<std::size_t>(
      std::count_if(points_.begin(), points_.end(), [&](const SpectrumPoint& p) { return std::abs(p.value) > threshold; }));
}

SpectrumSet spectrum(const ComplexMatrix& m, double cluster_tol) {
  const auto values = kernel::eig(m);
  return SpectrumSet::from_values(values, cluster_tol);
}

double spectral_radius(const SpectrumSet& s) {
  require_nonempty(s, "spectral_radius");
  double r = 0.0;
  for (const auto& p : s.points()) r = std::max(r, std::abs(p.value));
  return r;
}

double hausdorff(const SpectrumSet& a, const SpectrumSet& b) {
  require_nonempty(a, "hausdorff");
  require_nonempty(b, "hausdorff");
  double d = 0.0;
  for (const auto& p : a.points()) d = std::max(d, b.distance_to(p.value));
  for (const auto& p : b.points()) d = std::max(d, a.distance_to(p.value));
  return d;
}

bool Window::contains(Complex z, double margin) const {
  return z.real() >= re_min + margin && z.real() <= re_max - margin && z.imag() >= im_min + margin &&
         z.imag() <= im_max - margin;
}

GridRegion::GridRegion(Window window, Resolution resolution) : window_(window), resolution_(resolution) {
  validate_window(window_);
  if (resolution_.nx < 2 || resolution_.ny < 2) throw InputError("resolution must be at least 2x2");
  field_.assign(resolution_.nx * resolution_.ny, 0.0);
  flags_.assign(resolution_.nx * resolution_.ny, 0);
}

double GridRegion::step_x() const {
  return (window_.re_max - window_.re_min) / static_cast<double>(resolution_.nx - 1);
}

double GridRegion::step_y() const {
  return (window_.im_max - window_.im_min) / static_cast<double>(resolution_.ny - 1);
}

Complex GridRegion::node(std::size_t i, std::size_t j) const {
  return {window_.re_min + static_cast<double>(i) * step_x(), window_.im_min + static_cast<double>(j) * step_y()};
}

std::size_t GridRegion::flagged_count() const {
  return static_cast<std::size_t>(std::count_if(flags_.begin(), flags_.end(), [](std::uint8_t f) { return f != 0; }));
}

std::size_t GridRegion::member_count() const {
  return static_cast<std::size_t>(std::count_if(field_.begin(), field_.end(), [](double v) { return v != 0.0; }));
}

int ComponentLabels::label_near(Complex z) const {
  const double sx = (window.re_max - window.re_min) / static_cast<double>(resolution.nx - 1);
  const double sy = (window.im_max - window.im_min) / static_cast<double>(resolution.ny - 1);
  const double fi = std::round((z.real() - window.re_min) / sx);
  const double fj = std::round((z.imag() - window.im_min) / sy);
  if (fi < 0 || fj < 0 || fi > static_cast<double>(resolution.nx - 1) ||
      fj > static_cast<double>(resolution.ny - 1)) {
    throw InputError("label_near: point lies outside the window");
  }
  return at(static_cast<std::size_t>(fi), static_cast<std::size_t>(fj));
}

double suggested_thickening(const SpectrumSet& s, double step) {
  double widest_gap = 0.0;
  const auto& pts = s.points();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (i != j) nearest = std::min(nearest, std::abs(pts[i].value - pts[j].value));
    }
    if (std::isfinite(nearest)) widest_gap = std::max(widest_gap, nearest);
  }
  return std::max(3.0 * step, 0.75 * widest_gap);
}

RasterPlan plan_raster(const SpectrumSet& s, std::span<const Complex> extra_points, std::size_t cells) {
  require_nonempty(s, "plan_raster");
  if (cells < 8) throw InputError("plan_raster: need at least 8 cells along the long side");
  double re_lo = std::numeric_limits<double>::infinity();
  double re_hi = -re_lo;
  double im_lo = re_lo;
  double im_hi = -re_lo;
  auto extend = [&](Complex z) {
    re_lo = std::min(re_lo, z.real());
    re_hi = std::max(re_hi, z.real());
    im_lo = std::min(im_lo, z.imag());
    im_hi = std::max(im_hi, z.imag());
  };
  for (const auto& p : s.points()) extend(p.value);
  for (const auto& z : extra_points) extend(z);

  double span = std::max(re_hi - re_lo, im_hi - im_lo);
  if (span < 1e-12) span = 1.0;
  const double step = span / static_cast<double>(cells);
  const double thickening = suggested_thickening(s, step);
  const double pad = 2.0 * thickening + 2.0 * step;

  RasterPlan plan;
  plan.window = {re_lo - pad, re_hi + pad, im_lo - pad, im_hi + pad};
  plan.resolution.nx = static_cast<std::size_t>(std::ceil((plan.window.re_max - plan.window.re_min) / step)) + 1;
  plan.resolution.ny = static_cast<std::size_t>(std::ceil((plan.window.im_max - plan.window.im_min) / step)) + 1;
  plan.thickening = thickening;
  return plan;
}

ComponentLabels label_components(const SpectrumSet& s, const Window& window, Resolution resolution,
                                 double thickening) {
  validate_raster(s, window, resolution, thickening);
  const std::size_t nx = resolution.nx;
  const std::size_t ny = resolution.ny;
  const double sx = (window.re_max - window.re_min) / static_cast<double>(nx - 1);
  const double sy = (window.im_max - window.im_min) / static_cast<double>(ny - 1);

  ComponentLabels out;
  out.window = window;
  out.resolution = resolution;
  out.labels.assign(nx * ny, kUnvisited);

  for (const auto& p : s.points()) {
    const double cx = (p.value.real() - window.re_min) / sx;
    const double cy = (p.value.imag() - window.im_min) / sy;
    const auto i0 = static_cast<std::size_t>(std::max(0.0, std::floor(cx - thickening / sx)));
    const auto i1 = static_cast<std::size_t>(std::min(static_cast<double>(nx - 1), std::ceil(cx + thickening / sx)));
    const auto j0 = static_cast<std::size_t>(std::max(0.0, std::floor(cy - thickening / sy)));
    const auto j1 = static_cast<std::size_t>(std::min(static_cast<double>(ny - 1), std::ceil(cy + thickening / sy)));
    for (std::size_t j = j0; j <= j1; ++j) {
      for (std::size_t i = i0; i <= i1; ++i) {
        const Complex node{window.re_min + static_cast<double>(i) * sx, window.im_min + static_cast<double>(j) * sy};
        if (std::abs(node - p.value) <= thickening) out.labels[j * nx + i] = ComponentLabels::kSpectrum;
      }
    }
  }

  auto flood = [&](std::deque<std::size_t>& queue, int label) {
    while (!queue.empty()) {
      const std::size_t idx = queue.front();
      queue.pop_front();
      const std::size_t i = idx % nx;
      const std::size_t j = idx / nx;
      auto visit = [&](std::size_t k) {
        if (out.labels[k] == kUnvisited) {
          out.labels[k] = label;
          queue.push_back(k);
        }
      };
      if (i > 0) visit(idx - 1);
      if (i + 1 < nx) visit(idx + 1);
      if (j > 0) visit(idx - nx);
      if (j + 1 < ny) visit(idx + nx);
    }
  };

  std::deque<std::size_t> queue;
  auto seed_border = [&](std::size_t idx) {
    if (out.labels[idx] == kUnvisited) {
      out.labels[idx] = ComponentLabels::kUnbounded;
      queue.push_back(idx);
    }
  };
  for (std::size_t i = 0; i < nx; ++i) {
    seed_border(i);
    seed_border((ny - 1) * nx + i);
  }
  for (std::size_t j = 0; j < ny; ++j) {
    seed_border(j * nx);
    seed_border(j * nx + nx - 1);
  }
  flood(queue, ComponentLabels::kUnbounded);

  int next_hole = 0;
  for (std::size_t idx = 0; idx < out.labels.size(); ++idx) {
    if (out.labels[idx] != kUnvisited) continue;
    out.labels[idx] = next_hole;
    queue.push_back(idx);
    flood(queue, next_hole);
    ++next_hole;
  }
  out.hole_count = static_cast<std::size_t>(next_hole);
  return out;
}

HoleReport detect_holes(const SpectrumSet& s, const Window& window, Resolution resolution, double thickening) {
  const ComponentLabels labels = label_components(s, window, resolution, thickening);
  const std::size_t nx = resolution.nx;
  const double sx = (window.re_max - window.re_min) / static_cast<double>(nx - 1);
  const double sy = (window.im_max - window.im_min) / static_cast<double>(resolution.ny - 1);
  auto node = [&](std::size_t idx) {
    return Complex{window.re_min + static_cast<double>(idx % nx) * sx,
                   window.im_min + static_cast<double>(idx / nx) * sy};
  };

  HoleReport report;
  std::vector<Complex> sums(labels.hole_count);
  std::vector<std::size_t> counts(labels.hole_count, 0);
  for (std::size_t idx = 0; idx < labels.labels.size(); ++idx) {
    const int l = labels.labels[idx];
    if (l == ComponentLabels::kUnbounded) {
      ++report.unbounded_component_cells;
    } else if (l >= 0) {
      sums[static_cast<std::size_t>(l)] += node(idx);
      ++counts[static_cast<std::size_t>(l)];
    }
  }

  report.holes.resize(labels.hole_count);
  std::vector<double> best(labels.hole_count, std::numeric_limits<double>::infinity());
  for (std::size_t h = 0; h < labels.hole_count; ++h) {
    report.holes[h].cell_count = counts[h];
    report.holes[h].area_estimate = static_cast<double>(counts[h]) * sx * sy;
  }
  // Representative: the hole node nearest to the hole's centroid.
  for (std::size_t idx = 0; idx < labels.labels.size(); ++idx) {
    const int l = labels.labels[idx];
    if (l < 0) continue;
    const auto h = static_cast<std::size_t>(l);
    const Complex centroid = sums[h] / static_cast<double>(counts[h]);
    const double d = std::abs(node(idx) - centroid);
    if (d < best[h]) {
      best[h] = d;
      report.holes[h].representative = node(idx);
    }
  }
  return report;
}

GridRegion polynomial_hull(const SpectrumSet& s, const Window& window, Resolution resolution, double thickening) {
  const ComponentLabels labels = label_components(s, window, resolution, thickening);
  GridRegion hull(window, resolution);
  for (std::size_t idx = 0; idx < labels.labels.size(); ++idx) {
    hull.field()[idx] = labels.labels[idx] == ComponentLabels::kUnbounded ? 0.0 : 1.0;
  }
  return hull;
}

GridRegion polynomial_hull(const GridRegion& membership) {
  const std::size_t nx = membership.nx();
  const std::size_t ny = membership.ny();
  std::vector<std::uint8_t> outside(nx * ny, 0);
  std::deque<std::size_t> queue;
  auto push = [&](std::size_t idx) {
    if (!outside[idx] && membership.field()[idx] == 0.0) {
      outside[idx] = 1;
      queue.push_back(idx);
    }
  };
  for (std::size_t i = 0; i < nx; ++i) {
    push(i);
    push((ny - 1) * nx + i);
  }
  for (std::size_t j = 0; j < ny; ++j) {
    push(j * nx);
    push(j * nx + nx - 1);
  }
  while (!queue.empty()) {
    const std::size_t idx = queue.front();
    queue.pop_front();
    const std::size_t i = idx % nx;
    const std::size_t j = idx / nx;
    if (i > 0) push(idx - 1);
    if (i + 1 < nx) push(idx + 1);
    if (j > 0) push(idx - nx);
    if (j + 1 < ny) push(idx + nx);
  }
  GridRegion hull(membership.window(), membership.resolution());
  for (std::size_t idx = 0; idx < outside.size(); ++idx) hull.field()[idx] = outside[idx] ? 0.0 : 1.0;
  return hull;
}

GridRegion pseudospectrum(const ComplexMatrix& m, const Window& window, Resolution resolution, double cap) {
  if (!std::isfinite(cap)) throw InputError("pseudospectrum: cap must be finite");
  GridRegion grid(window, resolution);
  const kernel::ShiftedSmin smin(m);
  parallel_for(grid.ny(), [&](std::size_t j) {
    for (std::size_t i = 0; i < grid.nx(); ++i) {
      const std::size_t idx = j * grid.nx() + i;
      const double s = smin(grid.node(i, j));
      double value = cap;
      bool clipped = true;
      if (s > 0.0 && std::isfinite(s)) {
        value = -std::log10(s);
        clipped = value > cap;
        if (clipped) value = cap;
      }
      grid.field()[idx] = value;
      grid.flags()[idx] = clipped ? 1 : 0;
    }
  });
  return grid;
}

}  // namespace specpert::spectra
