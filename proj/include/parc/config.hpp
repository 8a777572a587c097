#pragma once

#include <filesystem>
#include <string>

#include "parc/sweep.hpp"

namespace parc {

/// Load an INI-style experiment file. Sections mirror ExperimentConfig:
/// [benchmark] [model] [encoding] [features] [integrator] [split] [readout]
/// [sweep]. Unknown sections or keys are configuration errors.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Apply one "section.key = value" override (the CLI layers these on top of
/// the file).
void apply_config_entry(ExperimentConfig& cfg, const std::string& section,
                        const std::string& key, const std::string& value);

}  // namespace parc
