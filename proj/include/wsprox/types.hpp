#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string_view>
#include <vector>

namespace wsprox {

/**
 * Dense vector of d >= 1 finite weights, in the caller's order.
 *
 * Construction validates the invariants, so every operation taking a
 * WeightVector may assume them.
 */
class WeightVector
{
public:
    explicit WeightVector(std::vector<double> values);
    WeightVector(std::initializer_list<double> values);

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    std::span<const double> values() const noexcept { return values_; }
    const std::vector<double>& vector() const noexcept { return values_; }

    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

private:
    std::vector<double> values_;
};

/// Throws InvalidInput unless the span is non-empty and every entry is finite.
void require_finite(std::span<const double> values, const char* what);

/// Maps sorted position -> original index. Stable among equal weights.
struct SortPermutation
{
    std::vector<std::size_t> indices;

    std::size_t size() const noexcept { return indices.size(); }
};

/// Regularization strengths and step size for one proximal step.
struct ProxParams
{
    double alpha = 0.0; ///< weight-sharing strength
    double beta = 0.0;  ///< l1 strength
    double rho = 0.0;   ///< rewinding, in [0, 1]
    double eta = 1.0;   ///< step size (consumed by the optimizer)

    /// Throws DomainError when any field is out of range.
    void validate() const;
};

/// Solver used to resolve particle collisions.
enum class Algorithm
{
    pava,
    imminent,
    end,
    search,
};

const char* to_string(Algorithm algo) noexcept;

/// Parses "pava" | "imminent" | "end" | "search"; throws DomainError otherwise.
Algorithm parse_algorithm(const std::string_view name);

inline constexpr Algorithm kAllAlgorithms[] = {
    Algorithm::pava, Algorithm::imminent, Algorithm::end, Algorithm::search};

} // namespace wsprox
