#include "wsprox/particles.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <string>

#include "wsprox/error.hpp"
#include "wsprox/regularizer.hpp"

namespace wsprox {

ParticleSystem::ParticleSystem(std::vector<double> x_, std::vector<double> v_, std::vector<std::int64_t> m_)
    : x(std::move(x_)), v(std::move(v_)), m(std::move(m_))
{
    if (x.size() != v.size() || x.size() != m.size())
        throw DomainError("particle system: x, v, m lengths differ");
    for (std::int64_t mi : m) {
        if (mi < 0)
            throw InvalidInput("particle system: negative mass");
    }
}

ParticleSystem ParticleSystem::at_rest(std::span<const double> y)
{
    return ParticleSystem(std::vector<double>(y.begin(), y.end()), std::vector<double>(y.size(), 0.0),
                          std::vector<std::int64_t>(y.size(), 1));
}

std::int64_t ParticleSystem::total_mass() const
{
    std::int64_t total = 0;
    for (std::int64_t mi : m)
        total += mi;
    return total;
}

double ParticleSystem::total_destination_moment() const
{
    return par::pairwise_reduce<double>(0, size(), [&](std::size_t k) {
        return m[k] == 0 ? 0.0 : static_cast<double>(m[k]) * destination(k);
    });
}

double ParticleSystem::total_momentum() const
{
    return par::pairwise_reduce<double>(0, size(), [&](std::size_t k) {
        return m[k] == 0 ? 0.0 : static_cast<double>(m[k]) * v[k];
    });
}

void ParticleSystem::pad_to_power_of_two()
{
    const std::size_t n = std::bit_ceil(std::max<std::size_t>(size(), 1));
    x.resize(n, 0.0);
    v.resize(n, 0.0);
    m.resize(n, 0);
}

void ParticleSystem::truncate(std::size_t n)
{
    x.resize(n);
    v.resize(n);
    m.resize(n);
}

std::pair<ParticleSystem, SortPermutation> init_particles(const WeightVector& w, double alpha, Parallelism par)
{
    const std::size_t d = w.size();
    if (d < 2)
        throw DomainError("init_particles needs d >= 2, got d = " + std::to_string(d));
    if (!(alpha >= 0.0))
        throw DomainError("alpha must be >= 0");

    SortPermutation perm = stable_sort_permutation(w.values(), par);
    const std::vector<double> c = sorted_subgradient_coefficients(d);
    std::vector<double> x(d), v(d);
    for (std::size_t k = 0; k < d; ++k) {
        x[k] = w[perm.indices[k]];
        v[k] = -alpha * c[k];
    }
    return {ParticleSystem(std::move(x), std::move(v), std::vector<std::int64_t>(d, 1)), std::move(perm)};
}

namespace {

struct BlockBest
{
    double avg = std::numeric_limits<double>::infinity();
    std::size_t index = 0;
    bool found = false;
};

} // namespace

std::size_t rightmost_collision(const ParticleSystem& ps, std::size_t i, std::size_t limit, std::int64_t* work)
{
    if (limit >= ps.size() || i > limit)
        throw PreconditionError("rightmost_collision: need i <= limit < n");
    if (ps.is_hole(i))
        throw PreconditionError("rightmost_collision: index " + std::to_string(i) + " is a hole");

    // Destinations are taken relative to particle i, which leaves the argmin
    // unchanged and makes the k = i average exactly zero.
    const double ref = ps.destination(i);
    const std::size_t len = limit - i + 1;
    const std::size_t blocks = (len + par::kScanBlock - 1) / par::kScanBlock;
    if (work != nullptr)
        *work += static_cast<std::int64_t>(len);

    const auto block_range = [&](std::size_t b) {
        const std::size_t lo = i + b * par::kScanBlock;
        return std::pair{lo, std::min(limit + 1, lo + par::kScanBlock)};
    };
    const auto term = [&](std::size_t k) { return static_cast<double>(ps.m[k]) * (ps.destination(k) - ref); };

    if (len < par::kTaskGrain || !par::tasks_enabled()) {
        double off_s = 0.0;
        std::int64_t off_m = 0;
        BlockBest best;
        for (std::size_t b = 0; b < blocks; ++b) {
            const auto [lo, hi] = block_range(b);
            double s = 0.0;
            std::int64_t mass = 0;
            for (std::size_t k = lo; k < hi; ++k) {
                if (ps.m[k] == 0)
                    continue;
                s += term(k);
                mass += ps.m[k];
                const double avg = (off_s + s) / static_cast<double>(off_m + mass);
                if (avg <= best.avg) {
                    best.avg = avg;
                    best.index = k;
                }
            }
            off_s += s;
            off_m += mass;
        }
        return best.index;
    }

    // Same block decomposition as above, in two passes: block totals, then
    // per-block argmins against the scanned offsets.
    std::vector<double> sums(blocks);
    std::vector<std::int64_t> masses(blocks);
    par::for_blocks(blocks, true, [&](std::size_t b) {
        const auto [lo, hi] = block_range(b);
        double s = 0.0;
        std::int64_t mass = 0;
        for (std::size_t k = lo; k < hi; ++k) {
            if (ps.m[k] == 0)
                continue;
            s += term(k);
            mass += ps.m[k];
        }
        sums[b] = s;
        masses[b] = mass;
    });
    double off_s = 0.0;
    std::int64_t off_m = 0;
    for (std::size_t b = 0; b < blocks; ++b) {
        const double s = sums[b];
        const std::int64_t mass = masses[b];
        sums[b] = off_s;
        masses[b] = off_m;
        off_s += s;
        off_m += mass;
    }
    std::vector<BlockBest> bests(blocks);
    par::for_blocks(blocks, true, [&](std::size_t b) {
        const auto [lo, hi] = block_range(b);
        double s = 0.0;
        std::int64_t mass = 0;
        BlockBest& best = bests[b];
        for (std::size_t k = lo; k < hi; ++k) {
            if (ps.m[k] == 0)
                continue;
            s += term(k);
            mass += ps.m[k];
            const double avg = (sums[b] + s) / static_cast<double>(masses[b] + mass);
            if (avg <= best.avg) {
                best.avg = avg;
                best.index = k;
                best.found = true;
            }
        }
    });
    BlockBest best;
    for (const BlockBest& b : bests) {
        if (b.found && b.avg <= best.avg)
            best = b;
    }
    return best.index;
}

namespace {

struct Moments
{
    double dx = 0.0;
    double dv = 0.0;
    std::int64_t mass = 0;

    Moments& operator+=(const Moments& o)
    {
        dx += o.dx;
        dv += o.dv;
        mass += o.mass;
        return *this;
    }
    friend Moments operator+(Moments a, const Moments& b) { return a += b; }
};

} // namespace

void perform_collisions(ParticleSystem& ps, std::size_t i, std::size_t j)
{
    if (i > j || j >= ps.size())
        throw PreconditionError("perform_collisions: need i <= j < n");
    std::size_t head = i;
    while (head <= j && ps.is_hole(head))
        ++head;
    if (head > j)
        throw PreconditionError("perform_collisions: range [" + std::to_string(i) + ", " + std::to_string(j) +
                                "] has zero mass");
    if (i == j)
        return;

    // Means are accumulated relative to the first particle, so merging
    // particles that already coincide reproduces their value exactly.
    const double xr = ps.x[head];
    const double vr = ps.v[head];
    const Moments total = par::pairwise_reduce<Moments>(head, j + 1, [&](std::size_t k) {
        if (ps.m[k] == 0)
            return Moments{};
        const double mk = static_cast<double>(ps.m[k]);
        return Moments{mk * (ps.x[k] - xr), mk * (ps.v[k] - vr), ps.m[k]};
    });

    const double mass = static_cast<double>(total.mass);
    ps.x[i] = xr + total.dx / mass;
    ps.v[i] = vr + total.dv / mass;
    ps.m[i] = total.mass;
    std::fill(ps.m.begin() + static_cast<std::ptrdiff_t>(i) + 1, ps.m.begin() + static_cast<std::ptrdiff_t>(j) + 1,
              std::int64_t{0});
}

ClusterSolution extract_clusters(const ParticleSystem& ps)
{
    ClusterSolution out;
    const std::size_t n = ps.size();
    out.per_index_value.resize(n);
    if (n == 0)
        return out;
    if (ps.is_hole(0))
        throw PreconditionError("extract_clusters: index 0 is a hole");

    for (std::size_t k = 0; k < n; ++k) {
        if (!ps.is_hole(k)) {
            if (!out.blocks.empty())
                out.blocks.back().size = k - out.blocks.back().start;
            out.blocks.push_back(Cluster{k, 0, ps.m[k], ps.destination(k), false});
        }
        out.per_index_value[k] = out.blocks.back().value;
    }
    out.blocks.back().size = n - out.blocks.back().start;
    return out;
}

} // namespace wsprox
