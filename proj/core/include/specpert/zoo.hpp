#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "specpert/numkernel.hpp"
#include "specpert/perturb.hpp"
#include "specpert/socle.hpp"
#include "specpert/spectra.hpp"

namespace specpert::zoo {

enum class OperatorKind { shift, weighted_shift, jordan, volterra, mult_circle, rank_one, circulant_closure };

std::string_view kind_name(OperatorKind kind);

/// Declarative description of a test operator.
///
/// Canonical string form: kind:dim[:key=value,...], for example
///   shift:64
///   jordan:8
///   weighted-shift:4:w=1;2;3
///   volterra:512            (interval [0, T], T = 2*pi unless T=... is given)
///   mult-circle:64:f=z      (f is z^k for integer k, or a complex constant)
///   rank-one:3:u=1;0;0,phi=0;1;0
///   circulant-closure:8
/// List entries are separated by ';' and complex numbers may be written as
/// 1.5, -2i or 0.5-0.25i.
struct OperatorSpec {
  OperatorKind kind = OperatorKind::shift;
  std::size_t dim = 1;
  /// weighted_shift: n-1 subdiagonal weights (a single weight is repeated).
  std::vector<Complex> weights;
  /// mult_circle: symbol values at the n-th roots of unity. Filled from
  /// `symbol` by parse(); may be given directly instead.
  std::vector<Complex> symbol_samples;
  std::string symbol;
  /// rank_one: a = u phi^T.
  std::vector<Complex> u;
  std::vector<Complex> phi;
  /// volterra: interval length.
  double interval = 6.283185307179586;

  static OperatorSpec parse(std::string_view text);
  std::string to_string() const;

  /// Throws InputError if parameters are missing or malformed for the kind.
  void validate() const;
};

/// Parses "a", "bi", "a+bi", "a-bi".
Complex parse_complex(std::string_view text);

/// Values of f at the n-th roots of unity for a symbol "z", "z^k" or a constant.
std::vector<Complex> sample_symbol(std::string_view symbol, std::size_t n);

/// Roots of unity exp(2 pi i k / n), k = 0..n-1.
std::vector<Complex> roots_of_unity(std::size_t n);

ComplexMatrix build(const OperatorSpec& spec);

/// Trapezoid nodes t_i = i * T / (n - 1) and weights h (1/2, 1, ..., 1, 1/2).
std::vector<double> trapezoid_nodes(std::size_t n, double interval);
ComplexVector trapezoid_weights(std::size_t n, double interval);

struct VolterraPair {
  ComplexMatrix v;
  /// Q f = phi(f) g with g = sin sampled at the nodes and phi the trapezoid
  /// rule for the integral over [0, 2 pi].
  socle::RankOneOperator q;
};

/// Throws InputError for n < 8.
VolterraPair volterra_pair(std::size_t n);

struct CircleModel {
  ComplexMatrix l;
  perturb::HoleFilling filling;
  spectra::HoleReport holes;
};

/// L = diag(f_samples) together with the hole-filling perturbation of order K.
/// Throws PreconditionError when sigma(L) has no hole around 0.
CircleModel circle_model(std::span<const Complex> f_samples, int order,
                         perturb::MomentClosure closure = perturb::MomentClosure::exact_order);

}  // namespace specpert::zoo
