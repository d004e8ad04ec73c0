#include "specpert/serialize.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "specpert/error.hpp"

namespace specpert::io {
namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      break;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return parts;
}

template <typename T>
T parse_number(std::string_view text) {
  while (!text.empty() && (text.back() == '\r' || text.back() == ' ')) text.remove_suffix(1);
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw InputError("grid CSV: cannot parse '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json complex_to_json(Complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json to_json(const spectra::SpectrumSet& s) {
  json points = json::array();
  for (const auto& p : s.points()) {
    points.push_back(json{{"re", p.value.real()}, {"im", p.value.imag()}, {"mult", p.multiplicity}});
  }
  return json{{"cluster_tol", s.cluster_tol()}, {"points", std::move(points)}};
}

spectra::SpectrumSet spectrum_from_json(const json& doc) {
  try {
    const double tol = doc.at("cluster_tol").get<double>();
    std::vector<Complex> values;
    for (const auto& p : doc.at("points")) {
      const Complex z(p.at("re").get<double>(), p.at("im").get<double>());
      const auto mult = p.at("mult").get<std::size_t>();
      values.insert(values.end(), mult, z);
    }
    return spectra::SpectrumSet::from_values(values, tol);
  } catch (const json::exception& e) {
    throw InputError(std::string("spectrum JSON: ") + e.what());
  }
}

json to_json(const spectra::HoleReport& report) {
  json holes = json::array();
  for (const auto& h : report.holes) {
    holes.push_back(json{{"re", h.representative.real()},
                         {"im", h.representative.imag()},
                         {"cells", h.cell_count},
                         {"area", h.area_estimate}});
  }
  return json{{"holes", std::move(holes)}, {"unbounded_cells", report.unbounded_component_cells}};
}

json to_json(const perturb::DiscontinuityReport& report) {
  json rows = json::array();
  for (const auto& r : report.rows) {
    rows.push_back(json{{"beta", r.beta},
                        {"eig_in_disk", r.eig_in_disk},
                        {"min_smin", r.min_smin},
                        {"hausdorff", r.hausdorff}});
  }
  return json{{"disk", {{"re", report.disk.center.real()}, {"im", report.disk.center.imag()}, {"radius", report.disk.radius}}},
              {"rows", std::move(rows)}};
}

json to_json(std::span<const perturb::ScanRow> rows) {
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back(json{{"alpha", complex_to_json(r.alpha)},
                       {"count_above_threshold", r.count_above_threshold},
                       {"hausdorff_to_alpha0", r.hausdorff_to_alpha0},
                       {"spectrum", to_json(r.spectrum)}});
  }
  return out;
}

json to_json(const perturb::LevelSetResult& result) {
  json roots = json::array();
  for (const auto& z : result.roots) roots.push_back(complex_to_json(z));
  json diverged = json::array();
  for (const auto& d : result.diverged) {
    diverged.push_back(json{{"start", complex_to_json(d.start)}, {"last", complex_to_json(d.last)}, {"residual", d.residual}});
  }
  return json{{"roots", std::move(roots)}, {"diverged", std::move(diverged)}};
}

std::string grid_to_csv(const spectra::GridRegion& grid) {
  const auto& w = grid.window();
  std::string out = format_double(w.re_min) + "," + format_double(w.re_max) + "," + format_double(w.im_min) + "," +
                    format_double(w.im_max) + "," + std::to_string(grid.nx()) + "," + std::to_string(grid.ny()) + "\n";
  for (std::size_t j = 0; j < grid.ny(); ++j) {
    for (std::size_t i = 0; i < grid.nx(); ++i) {
      if (i > 0) out += ',';
      out += format_double(grid.at(i, j));
    }
    out += '\n';
  }
  return out;
}

spectra::GridRegion grid_from_csv(std::string_view text) {
  auto lines = split(text, '\n');
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw InputError("grid CSV: empty document");
  const auto header = split(lines.front(), ',');
  if (header.size() != 6) throw InputError("grid CSV: header needs 6 fields");
  spectra::Window window{parse_number<double>(header[0]), parse_number<double>(header[1]),
                         parse_number<double>(header[2]), parse_number<double>(header[3])};
  spectra::Resolution res{parse_number<std::size_t>(header[4]), parse_number<std::size_t>(header[5])};
  spectra::GridRegion grid(window, res);
  if (lines.size() != res.ny + 1) throw InputError("grid CSV: expected " + std::to_string(res.ny) + " rows");
  for (std::size_t j = 0; j < res.ny; ++j) {
    const auto cells = split(lines[j + 1], ',');
    if (cells.size() != res.nx) throw InputError("grid CSV: row " + std::to_string(j) + " has the wrong length");
    for (std::size_t i = 0; i < res.nx; ++i) grid.at(i, j) = parse_number<double>(cells[i]);
  }
  return grid;
}

std::string grid_to_pgm(const spectra::GridRegion& grid) {
  const auto& field = grid.field();
  double lo = 0.0;
  double hi = 0.0;
  bool any = false;
  for (double v : field) {
    if (!std::isfinite(v)) continue;
    lo = any ? std::min(lo, v) : v;
    hi = any ? std::max(hi, v) : v;
    any = true;
  }
  std::string out = "P5\n" + std::to_string(grid.nx()) + " " + std::to_string(grid.ny()) + "\n255\n";
  const double span = hi - lo;
  for (std::size_t r = 0; r < grid.ny(); ++r) {
    const std::size_t j = grid.ny() - 1 - r;
    for (std::size_t i = 0; i < grid.nx(); ++i) {
      const double v = grid.at(i, j);
      double level = 0.0;
      if (std::isfinite(v) && span > 0.0) level = std::clamp((v - lo) / span * 255.0, 0.0, 255.0);
      else if (!std::isfinite(v) && v > 0.0) level = 255.0;
      out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(level))));
    }
  }
  return out;
}

std::string laurent_to_csv(const perturb::LaurentCoefficients& coeffs) {
  std::string out = "j,re,im\n";
  for (std::size_t j = 0; j < coeffs.coeffs.size(); ++j) {
    out += std::to_string(j) + "," + format_double(coeffs.coeffs[j].real()) + "," +
           format_double(coeffs.coeffs[j].imag()) + "\n";
  }
  return out;
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

}  // namespace specpert::io
