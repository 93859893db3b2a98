#pragma once

#include <filesystem>

#include "qlab/core.hpp"

namespace qlab::io {

/// Sidecar path holding the structured-text metadata of a CSV file.
std::filesystem::path metadata_path(const std::filesystem::path& csv);

/// Writes `x,y,re,im` rows (row-major in y) and a JSON sidecar with the box
/// and node counts.
void write_field(const std::filesystem::path& csv, const GridField& field);
GridField read_field(const std::filesystem::path& csv);

/// Writes `tau,re,im,dre,dim` rows plus a sidecar recording the closed flag.
void write_curve(const std::filesystem::path& csv, const ParametricCurve& curve);
/// Reads a curve; without a sidecar the curve counts as closed when its
/// parameters span [0, 2pi).
ParametricCurve read_curve(const std::filesystem::path& csv);

}  // namespace qlab::io
