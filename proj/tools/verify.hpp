#pragma once

#include <cstdint>

#include <nlohmann/json.hpp>

namespace specpert::cli {

/// Deterministic property suite over every module at moderate sizes.
///
/// The returned document lists each check with its measured quantities and
/// verdict; it contains no timings, so repeated runs are byte-identical.
nlohmann::json run_verify(std::uint64_t seed);

}  // namespace specpert::cli
