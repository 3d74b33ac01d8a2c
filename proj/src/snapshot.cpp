#include "fdkp/snapshot.hpp"

#include <nlohmann/json.hpp>

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "fdkp/error.hpp"

namespace fdkp {

namespace {

std::filesystem::path with_suffix(const std::filesystem::path& base, const char* suffix) {
  std::filesystem::path p = base;
  p += suffix;
  return p;
}

std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  std::uint64_t out = 0;
  for (int b = 0; b < 8; ++b) out |= ((v >> (8 * b)) & 0xffu) << (8 * (7 - b));
  return out;
}

}  // namespace

std::pair<std::filesystem::path, std::filesystem::path> write_snapshot(
    const std::filesystem::path& base, const SpectralField& field, double time, const std::string& model) {
  SpectralField f = field;
  const auto& values = f.ensure_values().values();
  const auto bin = with_suffix(base, ".bin");
  const auto hdr = with_suffix(base, ".json");
  {
    std::ofstream out(bin, std::ios::binary);
    if (!out) throw Error(ErrorCode::Io, "cannot open " + bin.string());
    for (double v : values) {
      const std::uint64_t word = to_little_endian(std::bit_cast<std::uint64_t>(v));
      out.write(reinterpret_cast<const char*>(&word), sizeof word);
    }
    if (!out) throw Error(ErrorCode::Io, "write failed for " + bin.string());
  }
  const Grid& g = f.grid();
  nlohmann::ordered_json header = {{"Nx", g.nx()}, {"Ny", g.ny()}, {"Lx", g.lx()},
                                   {"Ly", g.ly()}, {"time", time}, {"model", model}};
  std::ofstream out(hdr);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + hdr.string());
  out << header.dump(2) << '\n';
  return {bin, hdr};
}

Snapshot read_snapshot(const std::filesystem::path& base) {
  const auto bin = with_suffix(base, ".bin");
  const auto hdr = with_suffix(base, ".json");
  std::ifstream hin(hdr);
  if (!hin) throw Error(ErrorCode::Io, "cannot open " + hdr.string());
  SnapshotHeader h;
  try {
    const auto j = nlohmann::json::parse(hin);
    h.nx = j.at("Nx").get<int>();
    h.ny = j.at("Ny").get<int>();
    h.lx = j.at("Lx").get<double>();
    h.ly = j.at("Ly").get<double>();
    h.time = j.at("time").get<double>();
    h.model = j.at("model").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Io, "bad snapshot header " + hdr.string() + ": " + e.what());
  }
  Grid grid(h.nx, h.ny, h.lx, h.ly);
  std::vector<double> values(grid.size());
  std::ifstream in(bin, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + bin.string());
  for (double& v : values) {
    std::uint64_t word = 0;
    in.read(reinterpret_cast<char*>(&word), sizeof word);
    v = std::bit_cast<double>(to_little_endian(word));
  }
  if (!in) throw Error(ErrorCode::Io, "short snapshot file " + bin.string());
  return {h, SpectralField::from_values(std::move(grid), std::move(values))};
}

}  // namespace fdkp
