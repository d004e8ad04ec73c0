#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "specpert/perturb.hpp"
#include "specpert/spectra.hpp"

namespace specpert::io {

using nlohmann::json;

/// {"cluster_tol": t, "points": [{"re": .., "im": .., "mult": ..}]}
json to_json(const spectra::SpectrumSet& s);
/// Inverse of to_json(SpectrumSet). Throws InputError on a malformed document.
spectra::SpectrumSet spectrum_from_json(const json& doc);

/// {"holes": [{"re", "im", "cells", "area"}], "unbounded_cells": n}
json to_json(const spectra::HoleReport& report);

/// {"disk": {"re", "im", "radius"}, "rows": [{"beta", "eig_in_disk", "min_smin", "hausdorff"}]}
json to_json(const perturb::DiscontinuityReport& report);

/// [{"alpha": {"re", "im"}, "count_above_threshold", "hausdorff_to_alpha0", "spectrum": {...}}]
json to_json(std::span<const perturb::ScanRow> rows);

/// {"roots": [{"re", "im"}], "diverged": [{"start": {...}, "last": {...}, "residual"}]}
json to_json(const perturb::LevelSetResult& result);

json complex_to_json(Complex z);

/// First line: re_min,re_max,im_min,im_max,nx,ny. Then ny lines of nx values,
/// row j holding im = im_min + j * step_y. Values use 17 significant digits.
std::string grid_to_csv(const spectra::GridRegion& grid);
/// Inverse of grid_to_csv. Throws InputError on a malformed document.
spectra::GridRegion grid_from_csv(std::string_view text);

/// Binary 8-bit graymap (P5). Values are mapped linearly from [min, max] of
/// the field to [0, 255]; the first image row is im_max.
std::string grid_to_pgm(const spectra::GridRegion& grid);

/// Header "j,re,im" followed by one line per coefficient.
std::string laurent_to_csv(const perturb::LaurentCoefficients& coeffs);

/// Writes bytes to path. Throws Error when the file cannot be written.
void write_file(const std::filesystem::path& path, std::string_view bytes);

/// Fixed 17-significant-digit rendering used by every CSV writer.
std::string format_double(double v);

}  // namespace specpert::io
