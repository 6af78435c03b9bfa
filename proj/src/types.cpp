#include "wsprox/types.hpp"

#include <cmath>
#include <string>

#include "wsprox/error.hpp"

namespace wsprox {

void require_finite(std::span<const double> values, const char* what)
{
    if (values.empty())
        throw InvalidInput(std::string(what) + ": empty vector");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]))
            throw InvalidInput(std::string(what) + ": non-finite entry at index " + std::to_string(i));
    }
}

WeightVector::WeightVector(std::vector<double> values) : values_(std::move(values))
{
    require_finite(values_, "weight vector");
}

WeightVector::WeightVector(std::initializer_list<double> values)
    : WeightVector(std::vector<double>(values))
{}

void ProxParams::validate() const
{
    if (!(alpha >= 0.0) || !std::isfinite(alpha))
        throw DomainError("alpha must be finite and >= 0");
    if (!(beta >= 0.0) || !std::isfinite(beta))
        throw DomainError("beta must be finite and >= 0");
    if (!(rho >= 0.0 && rho <= 1.0))
        throw DomainError("rho must lie in [0, 1]");
    if (!(eta > 0.0) || !std::isfinite(eta))
        throw DomainError("eta must be finite and > 0");
}

const char* to_string(Algorithm algo) noexcept
{
    switch (algo) {
    case Algorithm::pava: return "pava";
    case Algorithm::imminent: return "imminent";
    case Algorithm::end: return "end";
    case Algorithm::search: return "search";
    }
    return "?";
}

Algorithm parse_algorithm(const std::string_view name)
{
    for (Algorithm a : kAllAlgorithms) {
        if (name == to_string(a))
            return a;
    }
    throw DomainError("unknown algorithm '" + std::string(name) + "'");
}

} // namespace wsprox
