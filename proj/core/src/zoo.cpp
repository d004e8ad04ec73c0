#include "specpert/zoo.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "specpert/error.hpp"

namespace specpert::zoo {
namespace {

struct KindEntry {
  OperatorKind kind;
  std::string_view name;
};

constexpr std::array<KindEntry, 7> kKinds{{
    {OperatorKind::shift, "shift"},
    {OperatorKind::weighted_shift, "weighted-shift"},
    {OperatorKind::jordan, "jordan"},
    {OperatorKind::volterra, "volterra"},
    {OperatorKind::mult_circle, "mult-circle"},
    {OperatorKind::rank_one, "rank-one"},
    {OperatorKind::circulant_closure, "circulant-closure"},
}};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_real(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw InputError("cannot parse number '" + std::string(text) + "'");
  }
  return value;
}

std::size_t parse_dim(std::string_view text) {
  text = trim(text);
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw InputError("cannot parse dimension '" + std::string(text) + "'");
  }
  return value;
}

std::vector<Complex> parse_list(std::string_view text) {
  std::vector<Complex> out;
  for (const auto& item : split(text, ';')) out.push_back(parse_complex(item));
  return out;
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_complex(Complex z) {
  if (z.imag() == 0.0) return format_real(z.real());
  if (z.real() == 0.0) return format_real(z.imag()) + "i";
  std::string im = format_real(z.imag());
  if (im.front() != '-') im = "+" + im;
  return format_real(z.real()) + im + "i";
}

std::string format_list(const std::vector<Complex>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ';';
    out += format_complex(values[i]);
  }
  return out;
}

ComplexVector to_vector(const std::vector<Complex>& values) {
  ComplexVector v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v(static_cast<Eigen::Index>(i)) = values[i];
  return v;
}

Complex unit_root(long long numerator, std::size_t n) {
  const auto denom = static_cast<long long>(n);
  long long k = numerator % denom;
  if (k < 0) k += denom;
  // Quarter turns are exact.
  if ((4 * k) % denom == 0) {
    switch ((4 * k) / denom) {
      case 0: return {1.0, 0.0};
      case 1: return {0.0, 1.0};
      case 2: return {-1.0, 0.0};
      default: return {0.0, -1.0};
    }
  }
  return std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));
}

}  // namespace

std::string_view kind_name(OperatorKind kind) {
  for (const auto& entry : kKinds) {
    if (entry.kind == kind) return entry.name;
  }
  return "unknown";
}

Complex parse_complex(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw InputError("cannot parse empty complex number");
  if (text.back() != 'i' && text.back() != 'j') return {parse_real(text), 0.0};

  const std::string_view body = text.substr(0, text.size() - 1);
  std::size_t split_at = std::string_view::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split_at = k;
      break;
    }
  }
  auto imaginary = [](std::string_view s) {
    s = trim(s);
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return parse_real(s);
  };
  if (split_at == std::string_view::npos) return {0.0, imaginary(body)};
  return {parse_real(body.substr(0, split_at)), imaginary(body.substr(split_at))};
}

std::vector<Complex> roots_of_unity(std::size_t n) {
  std::vector<Complex> out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = unit_root(static_cast<long long>(k), n);
  return out;
}

std::vector<Complex> sample_symbol(std::string_view symbol, std::size_t n) {
  symbol = trim(symbol);
  if (n == 0) throw InputError("symbol sampling needs n >= 1");
  std::vector<Complex> out(n);
  if (symbol == "z" || symbol.starts_with("z^")) {
    long long power = 1;
    if (symbol.size() > 1) {
      const double p = parse_real(symbol.substr(2));
      if (p != std::floor(p)) throw InputError("symbol exponent must be an integer");
      power = static_cast<long long>(p);
    }
    for (std::size_t k = 0; k < n; ++k) out[k] = unit_root(power * static_cast<long long>(k), n);
    return out;
  }
  const Complex c = parse_complex(symbol);
  std::fill(out.begin(), out.end(), c);
  return out;
}

OperatorSpec OperatorSpec::parse(std::string_view text) {
  const auto fields = split(trim(text), ':');
  if (fields.size() < 2 || fields.size() > 3) {
    throw InputError("operator spec must look like kind:dim[:key=value,...], got '" + std::string(text) + "'");
  }
  std::string kind_text(trim(fields[0]));
  std::replace(kind_text.begin(), kind_text.end(), '_', '-');
  if (kind_text == "circulant") kind_text = "circulant-closure";

  OperatorSpec spec;
  const auto it = std::find_if(kKinds.begin(), kKinds.end(), [&](const KindEntry& e) { return e.name == kind_text; });
  if (it == kKinds.end()) throw InputError("unknown operator kind '" + kind_text + "'");
  spec.kind = it->kind;
  spec.dim = parse_dim(fields[1]);

  if (fields.size() == 3 && !trim(fields[2]).empty()) {
    for (const auto& item : split(fields[2], ',')) {
      const auto eq = item.find('=');
      if (eq == std::string_view::npos) throw InputError("operator parameter must be key=value: '" + std::string(item) + "'");
      const auto key = trim(item.substr(0, eq));
      const auto value = trim(item.substr(eq + 1));
      if (key == "w" && spec.kind == OperatorKind::weighted_shift) {
        spec.weights = parse_list(value);
      } else if (key == "T" && spec.kind == OperatorKind::volterra) {
        spec.interval = parse_real(value);
      } else if (key == "f" && spec.kind == OperatorKind::mult_circle) {
        spec.symbol = std::string(value);
      } else if (key == "u" && spec.kind == OperatorKind::rank_one) {
        spec.u = parse_list(value);
      } else if (key == "phi" && spec.kind == OperatorKind::rank_one) {
        spec.phi = parse_list(value);
      } else {
        throw InputError("parameter '" + std::string(key) + "' is not valid for kind " + std::string(kind_name(spec.kind)));
      }
    }
  }
  if (spec.kind == OperatorKind::mult_circle) {
    if (spec.symbol.empty()) spec.symbol = "z";
    if (spec.dim > 0) spec.symbol_samples = sample_symbol(spec.symbol, spec.dim);
  }
  spec.validate();
  return spec;
}

std::string OperatorSpec::to_string() const {
  std::string out = std::string(kind_name(kind)) + ":" + std::to_string(dim);
  switch (kind) {
    case OperatorKind::weighted_shift:
      out += ":w=" + format_list(weights);
      break;
    case OperatorKind::volterra:
      if (interval != OperatorSpec{}.interval) out += ":T=" + format_real(interval);
      break;
    case OperatorKind::mult_circle:
      if (!symbol.empty()) out += ":f=" + symbol;
      break;
    case OperatorKind::rank_one:
      out += ":u=" + format_list(u) + ",phi=" + format_list(phi);
      break;
    default:
      break;
  }
  return out;
}

void OperatorSpec::validate() const {
  if (dim == 0) throw InputError("operator dimension must be >= 1");
  auto finite = [](const std::vector<Complex>& values) {
    return std::all_of(values.begin(), values.end(),
                       [](Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
  };
  switch (kind) {
    case OperatorKind::weighted_shift:
      if (dim > 1 && weights.size() != 1 && weights.size() != dim - 1) {
        throw InputError("weighted-shift needs 1 or dim-1 weights");
      }
      if (!finite(weights)) throw InputError("weighted-shift weights must be finite");
      break;
    case OperatorKind::volterra:
      if (dim < 2) throw InputError("volterra needs at least 2 nodes");
      if (!(interval > 0.0) || !std::isfinite(interval)) throw InputError("volterra interval must be positive");
      break;
    case OperatorKind::mult_circle:
      if (symbol_samples.size() != dim) throw InputError("mult-circle needs one symbol sample per node");
      if (!finite(symbol_samples)) throw InputError("mult-circle samples must be finite");
      break;
    case OperatorKind::rank_one:
      if (u.size() != dim || phi.size() != dim) throw InputError("rank-one needs u and phi of length dim");
      if (!finite(u) || !finite(phi)) throw InputError("rank-one vectors must be finite");
      break;
    default:
      break;
  }
}

std::vector<double> trapezoid_nodes(std::size_t n, double interval) {
  if (n < 2) throw InputError("trapezoid rule needs at least 2 nodes");
  const double h = interval / static_cast<double>(n - 1);
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<double>(i) * h;
  return t;
}

ComplexVector trapezoid_weights(std::size_t n, double interval) {
  if (n < 2) throw InputError("trapezoid rule needs at least 2 nodes");
  const double h = interval / static_cast<double>(n - 1);
  ComplexVector w = ComplexVector::Constant(static_cast<Eigen::Index>(n), Complex(h, 0.0));
  w(0) = w(static_cast<Eigen::Index>(n) - 1) = Complex(0.5 * h, 0.0);
  return w;
}

ComplexMatrix build(const OperatorSpec& spec) {
  spec.validate();
  const auto n = static_cast<Eigen::Index>(spec.dim);
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  switch (spec.kind) {
    case OperatorKind::shift:
      for (Eigen::Index i = 1; i < n; ++i) m(i, i - 1) = 1.0;
      break;
    case OperatorKind::weighted_shift:
      for (Eigen::Index i = 1; i < n; ++i) {
        m(i, i - 1) = spec.weights.size() == 1 ? spec.weights.front() : spec.weights[static_cast<std::size_t>(i - 1)];
      }
      break;
    case OperatorKind::jordan:
      for (Eigen::Index i = 1; i < n; ++i) m(i - 1, i) = 1.0;
      break;
    case OperatorKind::volterra: {
      // Row i integrates from t_0 to t_i with the composite trapezoid rule.
      const double h = spec.interval / static_cast<double>(n - 1);
      for (Eigen::Index i = 1; i < n; ++i) {
        m(i, 0) = 0.5 * h;
        for (Eigen::Index j = 1; j < i; ++j) m(i, j) = h;
        m(i, i) = 0.5 * h;
      }
      break;
    }
    case OperatorKind::mult_circle:
      for (Eigen::Index i = 0; i < n; ++i) m(i, i) = spec.symbol_samples[static_cast<std::size_t>(i)];
      break;
    case OperatorKind::rank_one:
      m = to_vector(spec.u) * to_vector(spec.phi).transpose();
      break;
    case OperatorKind::circulant_closure:
      for (Eigen::Index i = 1; i < n; ++i) m(i, i - 1) = 1.0;
      m(0, n - 1) += 1.0;
      break;
  }
  return m;
}

VolterraPair volterra_pair(std::size_t n) {
  if (n < 8) throw InputError("volterra_pair needs n >= 8");
  OperatorSpec spec;
  spec.kind = OperatorKind::volterra;
  spec.dim = n;
  const double period = 2.0 * std::numbers::pi;
  const auto nodes = trapezoid_nodes(n, period);
  ComplexVector g(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) g(static_cast<Eigen::Index>(i)) = std::sin(nodes[i]);
  return {build(spec), socle::RankOneOperator(g, trapezoid_weights(n, period))};
}

CircleModel circle_model(std::span<const Complex> f_samples, int order, perturb::MomentClosure closure) {
  if (f_samples.empty()) throw InputError("circle_model: no samples");
  ComplexVector diag(static_cast<Eigen::Index>(f_samples.size()));
  for (std::size_t i = 0; i < f_samples.size(); ++i) diag(static_cast<Eigen::Index>(i)) = f_samples[i];

  const auto sigma = spectra::SpectrumSet::from_values(f_samples, 1e-12);
  const Complex origin[] = {Complex{}};
  const auto plan = spectra::plan_raster(sigma, origin);
  const auto labels = spectra::label_components(sigma, plan.window, plan.resolution, plan.thickening);
  if (labels.hole_count == 0 || labels.label_near(Complex{}) < 0) {
    throw PreconditionError("circle_model: sigma(L) has no hole around 0");
  }

  CircleModel model{diag.asDiagonal(), perturb::hole_filling_functional(f_samples, order, closure), {}};
  model.holes = spectra::detect_holes(sigma, plan.window, plan.resolution, plan.thickening);
  return model;
}

}  // namespace specpert::zoo
