#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "specpert/numkernel.hpp"

namespace specpert::spectra {

/// A finite spectrum: distinct points with multiplicities.
struct SpectrumPoint {
  Complex value;
  std::size_t multiplicity = 1;
};

class SpectrumSet {
 public:
  SpectrumSet() = default;

  /// Clusters raw values with the same greedy rule as spectrum().
  static SpectrumSet from_values(std::span<const Complex> values, double cluster_tol);

  const std::vector<SpectrumPoint>& points() const { return points_; }
  double cluster_tol() const { return cluster_tol_; }
  bool empty() const { return points_.empty(); }
  std::size_t size() const { return points_.size(); }
  std::size_t total_multiplicity() const;

  /// Distance from z to the nearest point; +inf for an empty set.
  double distance_to(Complex z) const;

  /// Points with |lambda| > threshold (the punctured spectrum at that scale).
  std::size_t count_nonzero(double threshold) const;

 private:
  std::vector<SpectrumPoint> points_;
  double cluster_tol_ = 0.0;
};

/// Eigenvalues of m merged greedily into clusters of diameter <= cluster_tol.
///
/// Values are visited in ascending |lambda| (ties by argument); each joins the
/// first cluster it stays within cluster_tol of every member of, otherwise it
/// opens a new one. Clusters whose means end up within cluster_tol are then
/// merged so that distinct points are always more than cluster_tol apart.
SpectrumSet spectrum(const ComplexMatrix& m, double cluster_tol);

double spectral_radius(const SpectrumSet& s);

/// Hausdorff distance between the point sets (multiplicities ignored).
double hausdorff(const SpectrumSet& a, const SpectrumSet& b);

struct Window {
  double re_min = -1.0;
  double re_max = 1.0;
  double im_min = -1.0;
  double im_max = 1.0;

  bool contains(Complex z, double margin = 0.0) const;
};

struct Resolution {
  std::size_t nx = 2;
  std::size_t ny = 2;
};

/// Scalar field sampled on the nodes of a rectangular grid (endpoints
/// included). Storage is row-major with row j at im = im_min + j * step_y.
class GridRegion {
 public:
  GridRegion(Window window, Resolution resolution);

  const Window& window() const { return window_; }
  Resolution resolution() const { return resolution_; }
  std::size_t nx() const { return resolution_.nx; }
  std::size_t ny() const { return resolution_.ny; }
  double step_x() const;
  double step_y() const;
  Complex node(std::size_t i, std::size_t j) const;

  double& at(std::size_t i, std::size_t j) { return field_[j * resolution_.nx + i]; }
  double at(std::size_t i, std::size_t j) const { return field_[j * resolution_.nx + i]; }

  std::vector<double>& field() { return field_; }
  const std::vector<double>& field() const { return field_; }

  /// Cells whose value was clipped at the cap or whose evaluation failed.
  std::vector<std::uint8_t>& flags() { return flags_; }
  const std::vector<std::uint8_t>& flags() const { return flags_; }
  std::size_t flagged_count() const;

  /// Number of cells with a nonzero value (membership fields).
  std::size_t member_count() const;

 private:
  Window window_;
  Resolution resolution_;
  std::vector<double> field_;
  std::vector<std::uint8_t> flags_;
};

struct Hole {
  Complex representative;
  std::size_t cell_count = 0;
  double area_estimate = 0.0;
};

struct HoleReport {
  std::vector<Hole> holes;
  std::size_t unbounded_component_cells = 0;
};

/// Per-node classification of the thickened raster.
struct ComponentLabels {
  static constexpr int kSpectrum = -2;
  static constexpr int kUnbounded = -1;

  Window window;
  Resolution resolution;
  /// kSpectrum, kUnbounded, or the index of the hole (>= 0).
  std::vector<int> labels;
  std::size_t hole_count = 0;

  int at(std::size_t i, std::size_t j) const { return labels[j * resolution.nx + i]; }
  /// Label of the node nearest to z (z must lie in the window).
  int label_near(Complex z) const;
};

/// Grid parameters suitable for hole detection of a point set.
struct RasterPlan {
  Window window;
  Resolution resolution;
  double thickening = 0.0;
};

/// Thickening that closes the gaps of a sampled curve:
/// max(3 * step, 0.75 * largest nearest-neighbour distance).
double suggested_thickening(const SpectrumSet& s, double step);

/// Window around s (and extra_points) with enough margin for the thickening,
/// at roughly `cells` nodes along the longer side.
RasterPlan plan_raster(const SpectrumSet& s, std::span<const Complex> extra_points = {},
                       std::size_t cells = 200);

/// Marks every node within `thickening` of a spectrum point, flood-fills the
/// complement from the window border (4-connectivity) and labels the
/// remaining bounded components as holes.
ComponentLabels label_components(const SpectrumSet& s, const Window& window, Resolution resolution,
                                 double thickening);

HoleReport detect_holes(const SpectrumSet& s, const Window& window, Resolution resolution,
                        double thickening);

/// Membership raster (1/0) of the thickened spectrum with every hole filled.
GridRegion polynomial_hull(const SpectrumSet& s, const Window& window, Resolution resolution,
                           double thickening);

/// Hull of a membership raster at the same resolution: every cell not
/// reachable from the border through non-members becomes a member.
GridRegion polynomial_hull(const GridRegion& membership);

/// log10(1 / smin(lambda*I - m)) on the grid, clipped at `cap`.
GridRegion pseudospectrum(const ComplexMatrix& m, const Window& window, Resolution resolution,
                          double cap = 16.0);

}  // namespace specpert::spectra
