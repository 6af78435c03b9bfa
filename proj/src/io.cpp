#include "wsprox/io.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>

#include "wsprox/error.hpp"

namespace wsprox::io {
namespace {

std::uint64_t load_le64(const unsigned char* p)
{
    std::uint64_t v = 0;
    for (int b = 7; b >= 0; --b)
        v = (v << 8) | p[b];
    return v;
}

void store_le64(std::uint64_t v, char* p)
{
    for (int b = 0; b < 8; ++b) {
        p[b] = static_cast<char>(v & 0xFFu);
        v >>= 8;
    }
}

std::vector<double> parse_binary(const std::string& bytes)
{
    if (bytes.size() < 16)
        throw InvalidInput("binary vector: truncated header");
    const auto* raw = reinterpret_cast<const unsigned char*>(bytes.data());
    const std::uint64_t count = load_le64(raw + 8);
    if (count > (bytes.size() - 16) / 8 || bytes.size() != 16 + count * 8)
        throw InvalidInput("binary vector: header says " + std::to_string(count) + " values, payload has " +
                           std::to_string((bytes.size() - 16) / 8));
    std::vector<double> out(count);
    for (std::uint64_t k = 0; k < count; ++k)
        out[k] = std::bit_cast<double>(load_le64(raw + 16 + 8 * k));
    require_finite(out, "binary vector");
    return out;
}

std::vector<double> parse_text(const std::string& text)
{
    std::vector<double> out;
    std::istringstream lines(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#')
            continue;
        const auto last = line.find_last_not_of(" \t\r");
        const std::string token = line.substr(first, last - first + 1);
        std::size_t used = 0;
        double value = 0.0;
        try {
            value = std::stod(token, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != token.size())
            throw InvalidInput("text vector: line " + std::to_string(lineno) + " is not a number: '" + token + "'");
        out.push_back(value);
    }
    require_finite(out, "text vector");
    return out;
}

} // namespace

std::vector<double> read_vector(std::istream& in)
{
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() >= kBinaryMagic.size() &&
        std::equal(kBinaryMagic.begin(), kBinaryMagic.end(), bytes.begin()))
        return parse_binary(bytes);
    return parse_text(bytes);
}

std::vector<double> read_vector_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InvalidInput("cannot open '" + path + "'");
    return read_vector(in);
}

void write_text(std::ostream& out, std::span<const double> values)
{
    std::ostringstream os;
    os.precision(17);
    for (double v : values)
        os << v << '\n';
    out << os.str();
}

void write_binary(std::ostream& out, std::span<const double> values)
{
    std::string buf(16 + 8 * values.size(), '\0');
    std::copy(kBinaryMagic.begin(), kBinaryMagic.end(), buf.begin());
    store_le64(values.size(), buf.data() + 8);
    for (std::size_t k = 0; k < values.size(); ++k)
        store_le64(std::bit_cast<std::uint64_t>(values[k]), buf.data() + 16 + 8 * k);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

nlohmann::json stats_json(const SolverStats& s, bool include_timing)
{
    nlohmann::json j{
        {"rounds", s.rounds},
        {"merging_rounds", s.merging_rounds},
        {"clusters", s.clusters},
        {"recursion_depth", s.recursion_depth},
        {"probes_per_merge_max", s.probes_per_merge_max},
        {"total_work_ops", s.total_work_ops},
    };
    if (include_timing)
        j["wall_time"] = s.wall_time.count();
    return j;
}

nlohmann::json clusters_json(const ClusterSolution& clusters)
{
    nlohmann::json arr = nlohmann::json::array();
    for (const Cluster& c : clusters.blocks)
        arr.push_back({{"start", c.start}, {"size", c.size}, {"value", c.value}, {"zeroed", c.zeroed}});
    return arr;
}

nlohmann::json prox_result_json(const ProxResult& result, bool include_timing)
{
    return {{"values", result.values},
            {"clusters", clusters_json(result.clusters)},
            {"stats", stats_json(result.stats, include_timing)}};
}

nlohmann::json isotonic_result_json(const IsotonicResult& result, bool include_timing)
{
    return {{"values", result.clusters.per_index_value},
            {"clusters", clusters_json(result.clusters)},
            {"stats", stats_json(result.stats, include_timing)}};
}

} // namespace wsprox::io
