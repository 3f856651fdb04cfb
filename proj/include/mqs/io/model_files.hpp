#pragma once

#include <filesystem>
#include <string>

#include "mqs/model/assemble.hpp"

namespace mqs {

/// Writes the system blocks as Matrix Market files plus manifest.json
/// (dimensions, edge partition, waveform, saturable data, grid, probe).
void save_model(const AssembledModel& model, const std::filesystem::path& dir);

/// Reads a model directory (or its manifest.json). Every block is validated
/// on load; failures throw ModelError naming the offending block. Loaded
/// models carry no region map: grid.cells stays empty.
AssembledModel load_system(const std::filesystem::path& manifest_or_dir);

/// "builtin", "builtin:N" (N cells per direction) or a model directory.
AssembledModel load_model_source(const std::string& source);

}  // namespace mqs
