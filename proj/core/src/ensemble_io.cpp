#include "gbb/ensemble_io.hpp"

#include <array>
#include <bit>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>

#include "gbb/errors.hpp"

namespace gbb {
namespace {

constexpr std::array<char, 8> kMagic = {'G', 'B', 'B', 'E', 'N', 'S', '\0', '\0'};

template <typename T>
void put(std::ostream& out, T value) {
  static_assert(std::endian::native == std::endian::little, "binary layout assumes a little-endian host");
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw ConfigError("ensemble stream truncated");
  return value;
}

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_ensemble_csv(const PathEnsemble& ens, std::ostream& out) {
  out << "path_id,t";
  for (std::size_t d = 0; d < ens.dim(); ++d) out << ",x" << d;
  out << '\n';
  for (std::size_t p = 0; p < ens.n_paths(); ++p) {
    const std::uint64_t id = ens.first_path() + p;
    for (std::size_t k = 0; k < ens.n_nodes(); ++k) {
      out << id << ',' << fmt17(ens.grid()[k]);
      for (std::size_t d = 0; d < ens.dim(); ++d) out << ',' << fmt17(ens.at(p, k, d));
      out << '\n';
    }
  }
}

void write_ensemble_binary(const PathEnsemble& ens, std::ostream& out) {
  out.write(kMagic.data(), kMagic.size());
  put<std::uint32_t>(out, kEnsembleFormatVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(ens.dim()));
  put<std::uint64_t>(out, ens.n_paths());
  put<std::uint64_t>(out, ens.n_nodes());
  for (double t : ens.grid().nodes()) put<double>(out, t);
  for (double v : ens.values()) put<double>(out, v);
}

EnsembleData read_ensemble_binary(std::istream& in) {
  std::array<char, 8> magic{};
  in.read(magic.data(), magic.size());
  if (!in || magic != kMagic) throw ConfigError("not an ensemble stream (bad magic)");
  const auto version = get<std::uint32_t>(in);
  if (version != kEnsembleFormatVersion) throw ConfigError("unsupported ensemble format version");
  EnsembleData data;
  data.dim = get<std::uint32_t>(in);
  data.n_paths = get<std::uint64_t>(in);
  const auto nodes = get<std::uint64_t>(in);
  data.nodes.resize(nodes);
  for (auto& t : data.nodes) t = get<double>(in);
  data.values.resize(data.n_paths * nodes * data.dim);
  for (auto& v : data.values) v = get<double>(in);
  return data;
}

}  // namespace gbb
