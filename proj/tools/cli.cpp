#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <optional>
#include <sstream>

#include "specpert/error.hpp"
#include "specpert/parallel.hpp"
#include "specpert/perturb.hpp"
#include "specpert/serialize.hpp"
#include "specpert/socle.hpp"
#include "specpert/spectra.hpp"
#include "specpert/zoo.hpp"
#include "verify.hpp"

namespace specpert::cli {
namespace {

using nlohmann::json;

struct Options {
  std::string op;
  std::string pert;
  std::string window;
  std::string res;
  std::string betas = "0.5,0.9,0.99,1";
  std::string alphas = "0,1";
  std::string beta;
  std::string disk = "0,0,0.25";
  std::optional<double> tol;
  std::optional<double> thickening;
  double threshold = 1e-3;
  double grid_step = 0.01;
  double cap = 16.0;
  int order = 8;
  int n_max = 12;
  std::size_t probes = 64;
  std::size_t workers = 0;
  unsigned long long seed = kDefaultSeed;
  bool min_norm = false;
  std::string json_path;
  std::string csv_path;
  std::string pgm_path;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, sep)) parts.push_back(item);
  return parts;
}

std::vector<double> parse_reals(const std::string& text, const char* what) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) {
    const Complex z = zoo::parse_complex(item);
    if (z.imag() != 0.0) throw InputError(std::string(what) + " must be real");
    out.push_back(z.real());
  }
  if (out.empty()) throw InputError(std::string(what) + " is empty");
  return out;
}

std::vector<Complex> parse_complexes(const std::string& text, const char* what) {
  std::vector<Complex> out;
  for (const auto& item : split(text, ',')) out.push_back(zoo::parse_complex(item));
  if (out.empty()) throw InputError(std::string(what) + " is empty");
  return out;
}

spectra::Window parse_window(const std::string& text) {
  const auto v = parse_reals(text, "--window");
  if (v.size() != 4) throw InputError("--window needs re_min,re_max,im_min,im_max");
  const spectra::Window w{v[0], v[1], v[2], v[3]};
  if (!(w.re_min < w.re_max) || !(w.im_min < w.im_max)) throw InputError("--window is degenerate");
  return w;
}

spectra::Resolution parse_resolution(const std::string& text) {
  const auto v = parse_reals(text, "--res");
  if (v.size() > 2) throw InputError("--res needs N or N,M");
  for (double x : v) {
    if (x < 2 || x != std::floor(x)) throw InputError("--res entries must be integers >= 2");
  }
  const auto nx = static_cast<std::size_t>(v[0]);
  return {nx, v.size() == 2 ? static_cast<std::size_t>(v[1]) : nx};
}

zoo::OperatorSpec operator_spec(const Options& o) {
  if (o.op.empty()) throw InputError("--op is required");
  return zoo::OperatorSpec::parse(o.op);
}

/// The rank-one perturbation named by --pert. Without --pert a volterra
/// operator is paired with Q f = (integral of f) sin.
socle::RankOneOperator perturbation(const Options& o, const zoo::OperatorSpec& spec) {
  if (o.pert.empty() || o.pert == "volterra-q") {
    if (spec.kind != zoo::OperatorKind::volterra) throw InputError("--pert is required for this operator");
    return zoo::volterra_pair(spec.dim).q;
  }
  const auto p = zoo::OperatorSpec::parse(o.pert);
  if (p.kind != zoo::OperatorKind::rank_one) throw InputError("--pert must be a rank-one spec");
  if (p.dim != spec.dim) throw InputError("--pert dimension does not match --op");
  ComplexVector u(static_cast<Eigen::Index>(p.dim));
  ComplexVector phi(static_cast<Eigen::Index>(p.dim));
  for (std::size_t i = 0; i < p.dim; ++i) {
    u(static_cast<Eigen::Index>(i)) = p.u[i];
    phi(static_cast<Eigen::Index>(i)) = p.phi[i];
  }
  return socle::RankOneOperator(u, phi);
}

zoo::CircleModel circle_model(const Options& o) {
  const auto spec = operator_spec(o);
  if (spec.kind != zoo::OperatorKind::mult_circle) throw InputError("this command needs a mult-circle operator");
  return zoo::circle_model(spec.symbol_samples, o.order,
                           o.min_norm ? perturb::MomentClosure::minimum_norm : perturb::MomentClosure::exact_order);
}

void emit(const json& doc, const Options& o, std::ostream& out) {
  const std::string text = doc.dump(2) + "\n";
  if (o.json_path.empty()) {
    out << text;
  } else {
    io::write_file(o.json_path, text);
  }
}

json window_json(const spectra::Window& w) {
  return json{{"re_min", w.re_min}, {"re_max", w.re_max}, {"im_min", w.im_min}, {"im_max", w.im_max}};
}

int cmd_spectrum(const Options& o, std::ostream& out) {
  const auto m = zoo::build(operator_spec(o));
  emit(io::to_json(spectra::spectrum(m, o.tol.value_or(1e-9))), o, out);
  return kExitOk;
}

int cmd_pseudospectrum(const Options& o, std::ostream& out) {
  const auto m = zoo::build(operator_spec(o));
  const auto window = o.window.empty() ? spectra::Window{-2, 2, -2, 2} : parse_window(o.window);
  const auto res = o.res.empty() ? spectra::Resolution{200, 200} : parse_resolution(o.res);
  const auto grid = spectra::pseudospectrum(m, window, res, o.cap);
  if (!o.csv_path.empty()) io::write_file(o.csv_path, io::grid_to_csv(grid));
  if (!o.pgm_path.empty()) io::write_file(o.pgm_path, io::grid_to_pgm(grid));
  const auto [lo, hi] = std::minmax_element(grid.field().begin(), grid.field().end());
  emit(json{{"window", window_json(window)},
            {"nx", res.nx},
            {"ny", res.ny},
            {"cap", o.cap},
            {"min", *lo},
            {"max", *hi},
            {"flagged", grid.flagged_count()}},
       o, out);
  return kExitOk;
}

int cmd_holes(const Options& o, std::ostream& out) {
  const auto s = spectra::spectrum(zoo::build(operator_spec(o)), o.tol.value_or(1e-9));
  auto plan = spectra::plan_raster(s);
  if (!o.window.empty()) {
    plan.window = parse_window(o.window);
    plan.resolution = o.res.empty() ? spectra::Resolution{400, 400} : parse_resolution(o.res);
    const spectra::GridRegion probe(plan.window, plan.resolution);
    plan.thickening = spectra::suggested_thickening(s, std::max(probe.step_x(), probe.step_y()));
  } else if (!o.res.empty()) {
    throw InputError("--res needs --window");
  }
  if (o.thickening) plan.thickening = *o.thickening;
  auto doc = io::to_json(spectra::detect_holes(s, plan.window, plan.resolution, plan.thickening));
  doc["window"] = window_json(plan.window);
  doc["nx"] = plan.resolution.nx;
  doc["ny"] = plan.resolution.ny;
  doc["thickening"] = plan.thickening;
  emit(doc, o, out);
  return kExitOk;
}

int cmd_rank(const Options& o, std::ostream& out) {
  const auto spec = operator_spec(o);
  socle::SpectralRankOptions options;
  options.probes = o.probes;
  options.tol = o.tol.value_or(1e-8);
  options.seed = o.seed;
  if (options.probes == 0) throw InputError("--probes must be >= 1");
  const auto rank = socle::spectral_rank(zoo::build(spec), options);
  emit(json{{"operator", spec.to_string()},
            {"rank", rank},
            {"probes", options.probes},
            {"tol", options.tol},
            {"seed", options.seed}},
       o, out);
  return kExitOk;
}

int cmd_laurent(const Options& o, std::ostream& out) {
  const auto spec = operator_spec(o);
  const auto p = perturbation(o, spec);
  const auto c = perturb::laurent_coeffs(zoo::build(spec), p, o.n_max, o.tol.value_or(1e-12));
  if (!o.csv_path.empty()) io::write_file(o.csv_path, io::laurent_to_csv(c));
  json coeffs = json::array();
  for (std::size_t j = 0; j < c.coeffs.size(); ++j) {
    coeffs.push_back(json{{"j", j}, {"re", c.coeffs[j].real()}, {"im", c.coeffs[j].imag()}});
  }
  emit(json{{"fingerprint", c.fingerprint},
            {"essential_singularity_witness", c.essential_singularity_witness},
            {"coeffs", std::move(coeffs)}},
       o, out);
  return kExitOk;
}

int cmd_levelset(const Options& o, std::ostream& out) {
  const auto spec = operator_spec(o);
  const auto p = perturbation(o, spec);
  if (o.beta.empty()) throw InputError("--beta is required");
  const Complex beta = zoo::parse_complex(o.beta);
  const auto window = o.window.empty() ? spectra::Window{-2, 2, -2, 2} : parse_window(o.window);
  const auto result = perturb::level_set_roots(zoo::build(spec), p, beta, window, o.tol.value_or(1e-8));
  auto doc = io::to_json(result);
  doc["beta"] = io::complex_to_json(beta);
  emit(doc, o, out);
  return result.diverged.empty() ? kExitOk : kExitFailure;
}

int cmd_holefill(const Options& o, std::ostream& out) {
  const auto model = circle_model(o);
  const auto& f = model.filling.functional;
  std::vector<Complex> lambdas;
  for (int k = 0; k <= 8; ++k) lambdas.push_back(std::polar(std::pow(10.0, -1.0 - 0.25 * k), 0.3 * k));
  const double slope = perturb::moment_order_slope(f, lambdas);
  const auto s = spectra::spectrum(model.l + model.filling.perturbation, o.tol.value_or(1e-9));
  std::size_t small = 0;
  for (const auto& pt : s.points()) {
    if (std::abs(pt.value) < 0.1) small += pt.multiplicity;
  }
  json weights = json::array();
  for (Eigen::Index i = 0; i < f.weights().size(); ++i) weights.push_back(io::complex_to_json(f.weights()(i)));
  emit(json{{"order", f.order()},
            {"closure", f.closure() == perturb::MomentClosure::exact_order ? "exact-order" : "minimum-norm"},
            {"weights", std::move(weights)},
            {"residuals", f.residuals()},
            {"max_residual", f.max_residual()},
            {"slope", slope},
            {"eigenvalues_below_0.1", small},
            {"holes", io::to_json(model.holes)},
            {"spectrum", io::to_json(s)}},
       o, out);
  return f.max_residual() <= 1e-10 ? kExitOk : kExitFailure;
}

int cmd_probe(const Options& o, std::ostream& out) {
  const auto model = circle_model(o);
  const auto betas = parse_reals(o.betas, "--betas");
  const auto d = parse_reals(o.disk, "--disk");
  if (d.size() != 3 || !(d[2] > 0.0)) throw InputError("--disk needs re,im,radius with radius > 0");
  if (!(o.grid_step > 0.0)) throw InputError("--grid-step must be positive");
  perturb::ProbeOptions options;
  options.cluster_tol = o.tol.value_or(1e-9);
  const auto report = perturb::discontinuity_probe(model.l, model.filling.perturbation, betas,
                                                   perturb::Disk{Complex(d[0], d[1]), d[2]}, o.grid_step, options);
  emit(io::to_json(report), o, out);
  return kExitOk;
}

int cmd_scan(const Options& o, std::ostream& out) {
  const auto spec = operator_spec(o);
  const auto q = perturbation(o, spec);
  if (!(o.threshold > 0.0)) throw InputError("--threshold must be positive");
  const auto alphas = parse_complexes(o.alphas, "--alphas");
  const auto rows = perturb::perturbation_scan(zoo::build(spec), q, alphas, o.threshold, o.tol.value_or(1e-9));
  emit(json{{"operator", spec.to_string()}, {"threshold", o.threshold}, {"rows", io::to_json(rows)}}, o, out);
  return kExitOk;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  const auto doc = run_verify(o.seed);
  emit(doc, o, out);
  const auto failed = doc.at("failed").get<std::size_t>();
  if (failed > 0) {
    for (const auto& check : doc.at("checks")) {
      if (!check.at("passed").get<bool>()) {
        err << "verify: " << check.at("module").get<std::string>() << "/" << check.at("name").get<std::string>()
            << " failed\n";
      }
    }
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral perturbation toolkit", "specpert"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--op", o.op, "operator spec, e.g. volterra:512 or mult-circle:64:f=z");
    sub->add_option("--json", o.json_path, "write the JSON result here instead of stdout");
    sub->add_option("--workers", o.workers, "worker cap for grid and sweep loops");
    sub->add_option("--tol", o.tol, "tolerance (clustering, rank or root threshold)");
  };
  auto with_window = [&](CLI::App* sub) {
    sub->add_option("--window", o.window, "re_min,re_max,im_min,im_max");
    sub->add_option("--res", o.res, "N or N,M grid nodes");
  };
  auto with_circle = [&](CLI::App* sub) {
    sub->add_option("--K", o.order, "number of moment conditions");
    sub->add_flag("--min-norm", o.min_norm, "use only the K conditions (no order pin)");
  };

  auto* spectrum = app.add_subcommand("spectrum", "clustered spectrum");
  common(spectrum);

  auto* pseudo = app.add_subcommand("pseudospectrum", "log10 resolvent norm on a grid");
  common(pseudo);
  with_window(pseudo);
  pseudo->add_option("--csv", o.csv_path, "grid CSV output");
  pseudo->add_option("--pgm", o.pgm_path, "8-bit graymap output");
  pseudo->add_option("--cap", o.cap, "clip value for the field");

  auto* holes = app.add_subcommand("holes", "holes of the spectrum");
  common(holes);
  with_window(holes);
  holes->add_option("--thickening", o.thickening, "thickening radius");

  auto* rank = app.add_subcommand("rank", "randomized spectral rank");
  common(rank);
  rank->add_option("--probes", o.probes, "number of Gaussian probes");
  rank->add_option("--seed", o.seed, "random seed");

  auto* laurent = app.add_subcommand("laurent", "Laurent coefficients at infinity");
  common(laurent);
  laurent->add_option("--pert", o.pert, "rank-one spec (defaults to the Volterra Q)");
  laurent->add_option("--N", o.n_max, "highest coefficient index");
  laurent->add_option("--csv", o.csv_path, "coefficient CSV output");

  auto* levelset = app.add_subcommand("levelset", "solutions of f(lambda) = beta");
  common(levelset);
  with_window(levelset);
  levelset->add_option("--pert", o.pert, "rank-one spec (defaults to the Volterra Q)");
  levelset->add_option("--beta", o.beta, "level, nonzero complex");

  auto* holefill = app.add_subcommand("holefill", "hole-filling functional for a circle model");
  common(holefill);
  with_circle(holefill);

  auto* probe = app.add_subcommand("probe", "discontinuity probe along x + beta a");
  common(probe);
  with_circle(probe);
  probe->add_option("--betas", o.betas, "comma-separated betas in [0, 1]");
  probe->add_option("--disk", o.disk, "re,im,radius");
  probe->add_option("--grid-step", o.grid_step, "grid spacing inside the disk");

  auto* scan = app.add_subcommand("scan", "spectra of x + alpha Q");
  common(scan);
  scan->add_option("--pert", o.pert, "rank-one spec (defaults to the Volterra Q)");
  scan->add_option("--alphas", o.alphas, "comma-separated complex alphas");
  scan->add_option("--threshold", o.threshold, "modulus threshold for counting");

  auto* verify = app.add_subcommand("verify", "deterministic property suite");
  verify->add_option("--json", o.json_path, "write the report here instead of stdout");
  verify->add_option("--seed", o.seed, "random seed");
  verify->add_option("--workers", o.workers, "worker cap for grid and sweep loops");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "specpert: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  const auto* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  if (o.workers > 0) set_worker_limit(o.workers);
  try {
    if (name == "spectrum") return cmd_spectrum(o, out);
    if (name == "pseudospectrum") return cmd_pseudospectrum(o, out);
    if (name == "holes") return cmd_holes(o, out);
    if (name == "rank") return cmd_rank(o, out);
    if (name == "laurent") return cmd_laurent(o, out);
    if (name == "levelset") return cmd_levelset(o, out);
    if (name == "holefill") return cmd_holefill(o, out);
    if (name == "probe") return cmd_probe(o, out);
    if (name == "scan") return cmd_scan(o, out);
    return cmd_verify(o, out, err);
  } catch (const InputError& e) {
    err << "specpert " << name << ": " << e.what() << "\n" << chosen->help();
    return kExitUsage;
  } catch (const Error& e) {
    err << "specpert " << name << ": " << e.what() << "\n";
    return kExitFailure;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace specpert::cli
