#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

#include "parc/benchmarks.hpp"
#include "parc/readout.hpp"

namespace parc {

/// FNV-1a 64-bit hash of a byte span; used to fingerprint shared inputs.
std::uint64_t fnv1a64(std::span<const std::byte> bytes);
std::uint64_t hash_series(std::span<const double> values);

/// Series files. Text: '#'-prefixed header lines, then one %.17g value per
/// line. Binary: magic "PARCSER1", a JSON header line (system, params,
/// length), then raw little-endian float64. Both round-trip bit-exactly.
void write_series_text(const std::filesystem::path& path, const SeriesSpec& spec,
                       std::span<const double> values);
void write_series_binary(const std::filesystem::path& path, const SeriesSpec& spec,
                         std::span<const double> values);
std::vector<double> read_series(const std::filesystem::path& path);

/// Ridge model files: magic "PARCMDL1" + lambda + weights + preprocess state.
void write_model(const std::filesystem::path& path, const RidgeModel& model);
RidgeModel read_model(const std::filesystem::path& path);

}  // namespace parc
