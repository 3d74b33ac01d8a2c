#pragma once

#include <filesystem>
#include <string>

#include "fdkp/spectral.hpp"

namespace fdkp {

struct SnapshotHeader {
  int nx = 0;
  int ny = 0;
  double lx = 0.0;
  double ly = 0.0;
  double time = 0.0;
  std::string model;
};

/// Writes `<base>.bin` (little-endian float64 samples, row-major, y slow)
/// and `<base>.json` (the header). Returns the two paths. Throws Io.
std::pair<std::filesystem::path, std::filesystem::path> write_snapshot(
    const std::filesystem::path& base, const SpectralField& field, double time, const std::string& model);

struct Snapshot {
  SnapshotHeader header;
  SpectralField field;
};

/// Reads a snapshot written by write_snapshot. Throws Io.
Snapshot read_snapshot(const std::filesystem::path& base);

}  // namespace fdkp
