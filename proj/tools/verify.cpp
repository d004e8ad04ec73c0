#include "verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include <Eigen/SVD>

#include "specpert/error.hpp"
#include "specpert/numkernel.hpp"
#include "specpert/perturb.hpp"
#include "specpert/serialize.hpp"
#include "specpert/socle.hpp"
#include "specpert/spectra.hpp"
#include "specpert/zoo.hpp"

namespace specpert::cli {
namespace {

using nlohmann::json;
constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kPi = std::numbers::pi;

class Suite {
 public:
  explicit Suite(std::uint64_t seed) : seed_(seed) {}

  /// Runs body with a generator private to this check; exceptions count as
  /// failures and are recorded with their message.
  void check(const std::string& module, const std::string& name,
             const std::function<bool(std::mt19937_64&, json&)>& body) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                      static_cast<std::uint32_t>(checks_.size())};
    std::mt19937_64 rng(seq);
    json detail = json::object();
    bool passed = false;
    try {
      passed = body(rng, detail);
    } catch (const std::exception& e) {
      detail["exception"] = e.what();
    }
    checks_.push_back(json{{"module", module}, {"name", name}, {"passed", passed}, {"detail", std::move(detail)}});
    failed_ += passed ? 0 : 1;
  }

  json report() const {
    return json{{"seed", seed_},
                {"checks", checks_},
                {"passed", checks_.size() - failed_},
                {"failed", failed_}};
  }

 private:
  std::uint64_t seed_;
  json checks_ = json::array();
  std::size_t failed_ = 0;
};

ComplexMatrix gaussian(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index k = 0; k < m.size(); ++k) m(k) = Complex(normal(rng), normal(rng));
  return m;
}

ComplexMatrix unitary(std::size_t n, std::mt19937_64& rng) {
  return Eigen::HouseholderQR<ComplexMatrix>(gaussian(n, n, rng)).householderQ();
}

std::size_t svd_rank(const ComplexMatrix& m) {
  const auto s = Eigen::JacobiSVD<ComplexMatrix>(m).singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  return static_cast<std::size_t>((s.array() > 1e-10 * s(0)).count());
}

std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

std::vector<Complex> circle(std::size_t count, double radius) {
  std::vector<Complex> out(count);
  for (std::size_t k = 0; k < count; ++k) out[k] = std::polar(radius, 2.0 * kPi * static_cast<double>(k) / count);
  return out;
}

spectra::SpectrumSet points(const std::vector<Complex>& v) { return spectra::SpectrumSet::from_values(v, 1e-12); }

void numkernel_checks(Suite& suite) {
  suite.check("numkernel", "eig_examples", [](std::mt19937_64&, json& d) {
    ComplexMatrix jordan = ComplexMatrix::Zero(4, 4);
    for (int i = 0; i < 3; ++i) jordan(i, i + 1) = 1.0;
    ComplexMatrix companion(2, 2);
    companion << 0.0, 1.0, 1.0, 0.0;
    double err = 0.0;
    for (auto v : kernel::eig(ComplexMatrix::Identity(3, 3))) err = std::max(err, std::abs(v - 1.0));
    for (auto v : kernel::eig(jordan)) err = std::max(err, std::abs(v));
    for (auto v : kernel::eig(companion)) err = std::max(err, std::abs(std::abs(v.real()) - 1.0) + std::abs(v.imag()));
    d["max_error"] = err;
    return err <= 1e-14;
  });

  suite.check("numkernel", "eig_trace_and_backward_error", [](std::mt19937_64& rng, json& d) {
    double worst_trace = 0.0;
    double worst_backward = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t n = uniform(rng, 2, 12);
      const ComplexMatrix m = gaussian(n, n, rng);
      const auto values = kernel::eig(m);
      Complex sum = 0.0;
      for (auto v : values) {
        sum += v;
        ComplexMatrix shifted = -m;
        shifted.diagonal().array() += v;
        worst_backward = std::max(worst_backward, kernel::smin(shifted) / (kernel::eig_backward_kappa(n) * kEps * m.norm()));
      }
      worst_trace = std::max(worst_trace, std::abs(sum - m.trace()) / (n * kEps * m.norm()));
    }
    d["trace_error_over_n_eps_norm"] = worst_trace;
    d["smin_over_backward_bound"] = worst_backward;
    return worst_trace <= 10.0 && worst_backward <= 1.0;
  });

  suite.check("numkernel", "solve_residual", [](std::mt19937_64& rng, json& d) {
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t n = uniform(rng, 1, 30);
      const ComplexMatrix m = gaussian(n, n, rng);
      const ComplexVector b = gaussian(n, 1, rng);
      const ComplexVector x = kernel::solve(m, b);
      worst = std::max(worst, (m * x - b).norm() / (kEps * m.norm() * x.norm()));
    }
    bool singular = false;
    try {
      kernel::solve(ComplexMatrix(ComplexMatrix::Zero(2, 2)), ComplexVector(ComplexVector::Ones(2)));
    } catch (const SingularityError&) {
      singular = true;
    }
    d["residual_over_eps"] = worst;
    d["zero_matrix_rejected"] = singular;
    return worst <= 1e3 && singular;
  });

  suite.check("numkernel", "smin_and_monomials", [](std::mt19937_64&, json& d) {
    ComplexMatrix dg = ComplexMatrix::Zero(2, 2);
    dg(0, 0) = 3.0;
    dg(1, 1) = 0.5;
    ComplexMatrix e12 = ComplexMatrix::Zero(2, 2);
    e12(0, 1) = 1.0;
    const double s1 = kernel::smin(ComplexMatrix::Identity(3, 3));
    const double s2 = kernel::smin(dg);
    const double s3 = kernel::smin(e12);
    const auto p = kernel::monomials(e12, 2);
    d["smin"] = {s1, s2, s3};
    return std::abs(s1 - 1) < 1e-15 && std::abs(s2 - 0.5) < 1e-15 && s3 == 0.0 && p[0].isIdentity() &&
           p[1] == e12 && p[2].isZero();
  });
}

void spectra_checks(Suite& suite) {
  suite.check("spectra", "hausdorff_metric_axioms", [](std::mt19937_64& rng, json& d) {
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    auto random_set = [&] {
      std::vector<Complex> v(uniform(rng, 1, 12));
      for (auto& z : v) z = Complex(u(rng), u(rng));
      return points(v);
    };
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const auto a = random_set();
      const auto b = random_set();
      const auto c = random_set();
      worst = std::max({worst, spectra::hausdorff(a, a), std::abs(spectra::hausdorff(a, b) - spectra::hausdorff(b, a)),
                        spectra::hausdorff(a, c) - spectra::hausdorff(a, b) - spectra::hausdorff(b, c)});
    }
    d["max_violation"] = worst;
    return worst <= 1e-12;
  });

  suite.check("spectra", "hole_counts_under_resolution_doubling", [](std::mt19937_64& rng, json& d) {
    const auto unit = circle(256, 1.0);
    auto annulus = unit;
    const auto outer = circle(512, 2.0);
    annulus.insert(annulus.end(), outer.begin(), outer.end());
    std::vector<Complex> disk;
    for (double r = 0.0; r <= 1.0; r += 0.02) {
      const auto ring = circle(static_cast<std::size_t>(8 + 400 * r), r);
      disk.insert(disk.end(), ring.begin(), ring.end());
    }
    ComplexMatrix contraction = gaussian(30, 30, rng);
    contraction /= 1.01 * Eigen::JacobiSVD<ComplexMatrix>(contraction).singularValues()(0);
    const auto eigs = kernel::eig(contraction);
    disk.insert(disk.end(), eigs.begin(), eigs.end());

    const spectra::Window w{-3, 3, -3, 3};
    json counts = json::object();
    bool ok = true;
    for (std::size_t n : {300u, 600u}) {
      const std::size_t c = spectra::detect_holes(points(unit), w, {n, n}, 0.045).holes.size();
      const std::size_t a = spectra::detect_holes(points(annulus), w, {n, n}, 0.045).holes.size();
      const std::size_t f = spectra::detect_holes(points(disk), w, {n, n}, 0.045).holes.size();
      counts[std::to_string(n)] = {c, a, f};
      ok = ok && c == 1 && a == 2 && f == 0;
    }
    d["circle_annulus_disk"] = counts;
    return ok;
  });

  suite.check("spectra", "hull_idempotent_and_area", [](std::mt19937_64&, json& d) {
    const spectra::Window w{-2, 2, -2, 2};
    const std::size_t n = 801;
    const double step = 4.0 / (n - 1);
    const auto hull = spectra::polynomial_hull(points(circle(256, 1.0)), w, {n, n}, 3 * step);
    const auto again = spectra::polynomial_hull(hull);
    const double area = static_cast<double>(hull.member_count()) * step * step;
    d["area"] = area;
    d["idempotent"] = hull.field() == again.field();
    return hull.field() == again.field() && std::abs(area - kPi) <= 0.05 * kPi;
  });

  suite.check("spectra", "pseudospectrum_of_zero", [](std::mt19937_64&, json& d) {
    const auto grid = spectra::pseudospectrum(ComplexMatrix::Zero(4, 4), spectra::Window{-2, 2, -2, 2}, {21, 21});
    double worst = 0.0;
    for (std::size_t j = 0; j < grid.ny(); ++j) {
      for (std::size_t i = 0; i < grid.nx(); ++i) {
        const Complex z = grid.node(i, j);
        if (z != Complex(0.0)) worst = std::max(worst, std::abs(grid.at(i, j) + std::log10(std::abs(z))));
      }
    }
    d["max_error"] = worst;
    d["flagged"] = grid.flagged_count();
    return worst <= 1e-12 && grid.flagged_count() == 1;
  });
}

void socle_checks(Suite& suite) {
  suite.check("socle", "spectral_rank_matches_algebraic_rank", [](std::mt19937_64& rng, json& d) {
    std::size_t agree = 0;
    const int trials = 30;
    for (int trial = 0; trial < trials; ++trial) {
      const std::size_t n = uniform(rng, 1, 8);
      const std::size_t r = uniform(rng, 0, n);
      const ComplexMatrix a = r == 0 ? ComplexMatrix::Zero(n, n) : ComplexMatrix(gaussian(n, r, rng) * gaussian(r, n, rng));
      socle::SpectralRankOptions options;
      options.probes = 64;
      options.seed = rng();
      agree += socle::spectral_rank(a, options) == svd_rank(a);
    }
    d["agree"] = agree;
    d["trials"] = trials;
    return agree == trials;
  });

  suite.check("socle", "tau_identities", [](std::mt19937_64& rng, json& d) {
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t n = uniform(rng, 2, 8);
      const socle::RankOneOperator a(gaussian(n, 1, rng), gaussian(n, 1, rng));
      const ComplexMatrix x = gaussian(n, n, rng);
      const ComplexMatrix am = a.matrix();
      const double scale = am.norm() * am.norm() * x.norm();
      worst = std::max(worst, (am * x * am - a.tau(x) * am).norm() / scale);
      const Complex t = a.tau(ComplexMatrix::Identity(n, n));
      const auto s = spectra::spectrum(am, 1e-8 * am.norm());
      const auto expected = points({t, 0.0});
      worst = std::max(worst, spectra::hausdorff(s, expected) / am.norm());
      worst = std::max(worst, std::abs(a.right_multiplied(x).tau(ComplexMatrix::Identity(n, n)) - a.tau(x)) / scale);
    }
    d["max_relative_residual"] = worst;
    return worst <= 1e-10;
  });

  suite.check("socle", "commuting_witness", [](std::mt19937_64& rng, json& d) {
    std::size_t ok = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t n = uniform(rng, 1, 6);
      const std::size_t k = uniform(rng, 1, n);
      const ComplexMatrix s = gaussian(n, n, rng) + 3.0 * ComplexMatrix::Identity(n, n);
      const ComplexMatrix inv = s.inverse();
      socle::IdempotentFamily family;
      std::vector<Complex> alphas;
      for (std::size_t j = 0; j < k; ++j) {
        family.idempotents.push_back(s.col(j) * inv.row(j));
        family.weights.push_back(gaussian(1, 1, rng)(0, 0));
        alphas.push_back(Complex(1.0 + j, 0.5 * j));
      }
      const auto w = socle::construct_commuting_witness(family, alphas);
      worst = std::max(worst, (w.y * w.a - w.a * w.y).norm() / (w.y.norm() * w.a.norm()));
      const auto spec = spectra::spectrum(w.y * w.a, 1e-8);
      ok += spec.count_nonzero(1e-8) == k;
    }
    d["count_matches"] = ok;
    d["max_commutator"] = worst;
    return ok == 20 && worst <= 1e-9;
  });

  suite.check("socle", "commuting_difference_bound", [](std::mt19937_64& rng, json& d) {
    std::size_t ok = 0;
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t n = uniform(rng, 3, 8);
      const std::size_t r = uniform(rng, 1, 3);
      const ComplexMatrix u = unitary(n, rng);
      ComplexVector dx = gaussian(n, 1, rng);
      ComplexVector da = ComplexVector::Zero(static_cast<Eigen::Index>(n));
      da.head(static_cast<Eigen::Index>(r)) = gaussian(r, 1, rng);
      const ComplexMatrix x = u * dx.asDiagonal() * u.adjoint();
      const ComplexMatrix a = u * da.asDiagonal() * u.adjoint();
      const auto diff = socle::commuting_diff_check(x, a, 1e-6);
      ok += diff.within_bound() && diff.rank == r;
    }
    d["within_bound"] = ok;
    return ok == 20;
  });
}

void perturb_checks(Suite& suite) {
  suite.check("perturb", "resolvent_criterion_equivalence", [](std::mt19937_64& rng, json& d) {
    std::size_t agree = 0;
    std::size_t inside = 0;
    const int trials = 100;
    const double tol = 1e-7;
    for (int trial = 0; trial < trials; ++trial) {
      const std::size_t n = uniform(rng, 2, 12);
      const ComplexMatrix x = gaussian(n, n, rng);
      const ComplexMatrix y = gaussian(n, n, rng) * 0.5;
      const kernel::ShiftedSolver sx(x);
      Complex lambda;
      do {
        if (trial % 2 == 0) {
          const auto values = kernel::eig(x + y);
          lambda = values[uniform(rng, 0, values.size() - 1)];
        } else {
          lambda = gaussian(1, 1, rng)(0, 0) * 2.0;
        }
      } while (sx.distance_to_spectrum(lambda) <= 100 * tol && trial % 2 == 1);
      if (sx.distance_to_spectrum(lambda) <= 100 * tol) {
        ++agree;  // the exact eigenvalue landed on sigma(x); nothing to compare
        continue;
      }
      const auto r = perturb::criterion(x, y, lambda, tol);
      agree += r.lhs == r.rhs;
      inside += r.lhs;
    }
    d["agree"] = agree;
    d["lhs_true"] = inside;
    return agree == trials && inside > 0;
  });

  suite.check("perturb", "volterra_laurent_coefficients", [](std::mt19937_64&, json& d) {
    const auto pair = zoo::volterra_pair(512);
    const auto c = perturb::laurent_coeffs(pair.v, pair.q, 12);
    const double exact[] = {2 * kPi, 2 * kPi * kPi, 4 * kPi * kPi * kPi / 3 - 2 * kPi};
    double worst = 0.0;
    for (int k = 0; k < 3; ++k) worst = std::max(worst, std::abs(c.coeffs[k + 1] / exact[k] - 1.0));
    double smallest = 1e300;
    for (int k = 1; k <= 12; ++k) smallest = std::min(smallest, std::abs(c.coeffs[k]));
    d["max_relative_error_c1_c3"] = worst;
    d["min_abs_c1_c12"] = smallest;
    d["fingerprint"] = c.fingerprint;
    return worst <= 1e-3 && smallest > 1e-6;
  });

  suite.check("perturb", "level_sets_match_perturbed_spectrum", [](std::mt19937_64& rng, json& d) {
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const std::size_t n = uniform(rng, 2, 8);
      const ComplexMatrix x = gaussian(n, n, rng);
      const socle::RankOneOperator p(gaussian(n, 1, rng), gaussian(n, 1, rng));
      const Complex beta = gaussian(1, 1, rng)(0, 0) + 0.5;
      const auto roots = perturb::level_set_roots(x, p, beta, spectra::Window{-60, 60, -60, 60});
      const kernel::ShiftedSolver sx(x);
      std::vector<Complex> direct;
      for (auto z : kernel::eig(x + p.matrix() / beta)) {
        if (sx.distance_to_spectrum(z) > 1e-8) direct.push_back(z);
      }
      if (direct.empty() && roots.roots.empty()) continue;
      if (direct.empty() || roots.roots.empty()) return false;
      worst = std::max(worst, spectra::hausdorff(points(direct), points(roots.roots)));
    }
    d["max_hausdorff"] = worst;
    return worst <= 1e-6;
  });

  suite.check("perturb", "hole_filling_circle_model", [](std::mt19937_64&, json& d) {
    const auto a = zoo::roots_of_unity(64);
    const auto h = perturb::hole_filling_functional(a, 8);
    std::vector<Complex> lambdas;
    for (int k = 0; k <= 8; ++k) lambdas.push_back(std::polar(std::pow(10.0, -1.0 - 0.25 * k), 0.3 * k));
    const double slope = perturb::moment_order_slope(h.functional, lambdas);
    ComplexMatrix z = Eigen::Map<const ComplexVector>(a.data(), 64).asDiagonal();
    z += h.perturbation;
    std::vector<double> moduli;
    for (auto v : kernel::eig(z)) moduli.push_back(std::abs(v));
    std::sort(moduli.begin(), moduli.end());
    d["max_residual"] = h.functional.max_residual();
    d["slope"] = slope;
    d["eighth_smallest_modulus"] = moduli[7];
    d["ninth_smallest_modulus"] = moduli[8];
    return h.functional.max_residual() <= 1e-10 && std::abs(slope - 8.0) <= 0.5 && moduli[7] < 0.1 &&
           moduli[8] > 0.5;
  });

  suite.check("perturb", "discontinuity_probe", [](std::mt19937_64&, json& d) {
    const auto model = zoo::circle_model(zoo::roots_of_unity(64), 8);
    const double betas[] = {0.5, 0.9, 0.99, 1.0};
    const auto wide = perturb::discontinuity_probe(model.l, model.filling.perturbation, betas,
                                                   perturb::Disk{0.0, 0.25}, 0.01);
    const auto narrow = perturb::discontinuity_probe(model.l, model.filling.perturbation, betas,
                                                     perturb::Disk{0.0, 0.1}, 0.01);
    d["wide"] = io::to_json(wide);
    d["narrow"] = io::to_json(narrow);
    bool ok = wide.rows[3].eig_in_disk >= 8 && narrow.rows[3].min_smin <= 1e-3;
    for (int k = 0; k < 2; ++k) ok = ok && narrow.rows[k].min_smin >= 0.05 && wide.rows[k].hausdorff > 0.1;
    return ok;
  });

  suite.check("perturb", "volterra_scan", [](std::mt19937_64&, json& d) {
    std::size_t previous = 0;
    bool ok = true;
    json counts = json::array();
    for (std::size_t n : {128u, 256u}) {
      const auto pair = zoo::volterra_pair(n);
      const Complex alphas[] = {0.0, 1.0};
      const auto rows = perturb::perturbation_scan(pair.v, pair.q, alphas, 1e-3);
      counts.push_back(rows[1].count_above_threshold);
      ok = ok && rows[1].count_above_threshold >= 10 && rows[1].count_above_threshold >= previous &&
           rows[0].count_above_threshold <= 1;
      previous = rows[1].count_above_threshold;
    }
    d["counts_n128_n256"] = counts;
    return ok;
  });
}

void zoo_checks(Suite& suite) {
  suite.check("zoo", "volterra_integrates_constants", [](std::mt19937_64&, json& d) {
    const std::size_t n = 200;
    const auto m = zoo::build(zoo::OperatorSpec::parse("volterra:200"));
    const auto t = zoo::trapezoid_nodes(n, 2 * kPi);
    const ComplexVector image = m * ComplexVector::Ones(static_cast<Eigen::Index>(n));
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(image(static_cast<Eigen::Index>(i)) - t[i]));
    d["max_error"] = worst;
    return worst <= 1e-12;
  });

  suite.check("zoo", "volterra_radius_shrinks", [](std::mt19937_64&, json& d) {
    const double c = 3.17;
    json scaled = json::array();
    bool ok = true;
    for (std::size_t n : {128u, 256u, 512u}) {
      const auto m = zoo::build(zoo::OperatorSpec::parse("volterra:" + std::to_string(n)));
      const double r = spectra::spectral_radius(spectra::spectrum(m, 1e-12));
      scaled.push_back(r * static_cast<double>(n));
      ok = ok && r <= c / static_cast<double>(n);
    }
    d["n_times_radius"] = scaled;
    return ok;
  });

  suite.check("zoo", "shift_and_circulant", [](std::mt19937_64&, json& d) {
    const auto shift = spectra::spectrum(zoo::build(zoo::OperatorSpec::parse("shift:32")), 1e-9);
    const auto circ = spectra::spectrum(zoo::build(zoo::OperatorSpec::parse("circulant-closure:32")), 1e-9);
    const double gap = spectra::hausdorff(circ, points(zoo::roots_of_unity(32)));
    d["shift_points"] = shift.size();
    d["circulant_to_roots"] = gap;
    return shift.size() == 1 && shift.points()[0].multiplicity == 32 && circ.size() == 32 && gap <= 1e-12;
  });

  suite.check("zoo", "volterra_q_is_rank_one_and_traceless", [](std::mt19937_64&, json& d) {
    const auto pair = zoo::volterra_pair(256);
    const Complex trace = pair.q.trace();
    const auto rank = socle::spectral_rank(pair.q.matrix(), {.probes = 4});
    d["trace_abs"] = std::abs(trace);
    d["rank"] = rank;
    return std::abs(trace) <= 1e-10 && rank == 1;
  });
}

}  // namespace

json run_verify(std::uint64_t seed) {
  Suite suite(seed);
  numkernel_checks(suite);
  spectra_checks(suite);
  socle_checks(suite);
  perturb_checks(suite);
  zoo_checks(suite);
  return suite.report();
}

}  // namespace specpert::cli
