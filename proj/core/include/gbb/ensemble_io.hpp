#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gbb/sampler.hpp"

namespace gbb {

/// CSV layout: one row per (path, node), columns path_id, t, x0, x1, ...
/// Values are written with 17 significant digits.
void write_ensemble_csv(const PathEnsemble& ens, std::ostream& out);

/// Binary layout, little-endian:
///   char[8]  magic "GBBENS\0\0"
///   u32      version (1)
///   u32      dim
///   u64      n_paths
///   u64      node count
///   f64[node count]               node times
///   f64[n_paths * nodes * dim]    values, row-major (path, node, coordinate)
void write_ensemble_binary(const PathEnsemble& ens, std::ostream& out);

struct EnsembleData {
  std::uint32_t dim = 0;
  std::uint64_t n_paths = 0;
  std::vector<double> nodes;
  std::vector<double> values;
};

/// Reads the binary layout back; ConfigError on a malformed stream.
EnsembleData read_ensemble_binary(std::istream& in);

inline constexpr std::uint32_t kEnsembleFormatVersion = 1;

}  // namespace gbb
