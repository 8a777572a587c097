#pragma once

#include <filesystem>

#include "parc/sweep.hpp"

namespace parc {

enum class HeatmapScale { Log10, Linear };

/// Render a sweep grid as a self-contained SVG: one rect per cell colored by
/// (log10) NMSE, failed cells hatched grey, regime-label boundaries overlaid
/// as contour segments, plus a color bar. Deterministic output bytes.
void render_heatmap(const SweepGrid& grid, HeatmapScale scale,
                    const std::filesystem::path& path);

}  // namespace parc
