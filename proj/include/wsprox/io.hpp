#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "wsprox/prox.hpp"
#include "wsprox/solvers.hpp"

namespace wsprox::io {

// Binary vector file: 8-byte magic, uint64 little-endian count, then that
// many IEEE-754 binary64 values, little-endian.
inline constexpr std::array<char, 8> kBinaryMagic{'W', 'S', 'P', 'R', 'O', 'X', 'F', '8'};

/// Reads either format; binary is detected by the magic. Text is one decimal
/// per line, blank lines and lines starting with '#' ignored.
/// Throws InvalidInput on malformed or non-finite data.
std::vector<double> read_vector(std::istream& in);
std::vector<double> read_vector_file(const std::string& path);

void write_text(std::ostream& out, std::span<const double> values);
void write_binary(std::ostream& out, std::span<const double> values);

nlohmann::json stats_json(const SolverStats& stats, bool include_timing = true);
nlohmann::json clusters_json(const ClusterSolution& clusters);

/// {values, clusters: [{start, size, value, zeroed}], stats}
nlohmann::json prox_result_json(const ProxResult& result, bool include_timing = true);
nlohmann::json isotonic_result_json(const IsotonicResult& result, bool include_timing = true);

} // namespace wsprox::io
