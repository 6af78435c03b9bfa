#include "wsprox/solvers.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <sstream>

#include "wsprox/error.hpp"

namespace wsprox {
namespace {

using Clock = std::chrono::steady_clock;

bool has_holes(const ParticleSystem& ps)
{
    return std::find(ps.m.begin(), ps.m.end(), std::int64_t{0}) != ps.m.end();
}

// Particles only, plus where each one lives in the original layout.
struct Compacted
{
    ParticleSystem ps;
    std::vector<std::size_t> pos;
};

Compacted compact(const ParticleSystem& ps)
{
    Compacted c;
    for (std::size_t k = 0; k < ps.size(); ++k) {
        if (ps.is_hole(k))
            continue;
        c.ps.x.push_back(ps.x[k]);
        c.ps.v.push_back(ps.v[k]);
        c.ps.m.push_back(ps.m[k]);
        c.pos.push_back(k);
    }
    return c;
}

// Writes a solved compacted system back; cluster heads keep their original slots.
void scatter_back(const Compacted& c, ParticleSystem& ps)
{
    std::fill(ps.m.begin(), ps.m.end(), std::int64_t{0});
    for (std::size_t k = 0; k < c.ps.size(); ++k) {
        if (c.ps.is_hole(k))
            continue;
        ps.x[c.pos[k]] = c.ps.x[k];
        ps.v[c.pos[k]] = c.ps.v[k];
        ps.m[c.pos[k]] = c.ps.m[k];
    }
}

void atomic_max(std::atomic<std::int64_t>& target, std::int64_t value)
{
    std::int64_t cur = target.load(std::memory_order_relaxed);
    while (cur < value && !target.compare_exchange_weak(cur, value, std::memory_order_relaxed)) {
    }
}

// After merging [head, j], rounding can leave the new cluster level with or
// behind a neighbour inside [lo, hi). Absorbs such neighbours so clusters stay
// strictly increasing. Returns the number of clusters absorbed on the left.
std::size_t settle(ParticleSystem& ps, std::size_t& head, std::size_t lo, std::size_t hi)
{
    std::size_t absorbed = 0;
    for (;;) {
        if (head > lo) {
            std::size_t left = head - 1;
            while (ps.is_hole(left))
                --left;
            if (ps.destination(left) >= ps.destination(head)) {
                perform_collisions(ps, left, head);
                head = left;
                ++absorbed;
                continue;
            }
        }
        std::size_t right = head + 1;
        while (right < hi && ps.is_hole(right))
            ++right;
        if (right < hi && ps.destination(head) >= ps.destination(right)) {
            perform_collisions(ps, head, right);
            continue;
        }
        return absorbed;
    }
}

} // namespace

// ---------------------------------------------------------------------------
// Pool adjacent violators

SolverStats solve_pava(ParticleSystem& ps)
{
    const auto t0 = Clock::now();
    SolverStats stats;

    struct Block
    {
        std::size_t head;
        double x, v;
        std::int64_t m;
        double y() const { return x + v; }
    };
    std::vector<Block> stack;
    stack.reserve(ps.size());

    for (std::size_t k = 0; k < ps.size(); ++k) {
        ++stats.total_work_ops;
        if (ps.is_hole(k))
            continue;
        stack.push_back(Block{k, ps.x[k], ps.v[k], ps.m[k]});
        while (stack.size() >= 2 && stack[stack.size() - 2].y() >= stack.back().y()) {
            const Block top = stack.back();
            stack.pop_back();
            Block& b = stack.back();
            const std::int64_t mass = b.m + top.m;
            const double w = static_cast<double>(top.m) / static_cast<double>(mass);
            b.x += w * (top.x - b.x);
            b.v += w * (top.v - b.v);
            b.m = mass;
            ++stats.total_work_ops;
        }
    }

    std::fill(ps.m.begin(), ps.m.end(), std::int64_t{0});
    for (const Block& b : stack) {
        ps.x[b.head] = b.x;
        ps.v[b.head] = b.v;
        ps.m[b.head] = b.m;
    }
    stats.clusters = static_cast<std::int64_t>(stack.size());
    stats.wall_time = Clock::now() - t0;
    return stats;
}

// ---------------------------------------------------------------------------
// Imminent collisions

namespace {

void imminent_rounds(Compacted& c, SolverStats& stats)
{
    std::vector<double> x = std::move(c.ps.x), v = std::move(c.ps.v);
    std::vector<std::int64_t> m = std::move(c.ps.m);
    std::vector<std::size_t> pos = std::move(c.pos);

    std::vector<std::int64_t> keep, id;
    std::vector<std::size_t> start;
    std::vector<double> nx, nv;
    std::vector<std::int64_t> nm;
    std::vector<std::size_t> npos;

    for (;;) {
        const std::size_t n = x.size();
        ++stats.rounds;
        stats.total_work_ops += static_cast<std::int64_t>(n);

        // A cluster starts wherever the left neighbour is strictly behind;
        // touching or crossing destinations merge.
        keep.assign(n, 0);
        id.resize(n);
        par::for_range(n, [&](std::size_t k) { keep[k] = (k == 0 || x[k - 1] + v[k - 1] < x[k] + v[k]) ? 1 : 0; });
        const auto clusters = static_cast<std::size_t>(par::exclusive_scan(keep, id));
        if (clusters == n)
            break;
        ++stats.merging_rounds;

        start.resize(clusters + 1);
        par::for_range(n, [&](std::size_t k) {
            if (keep[k])
                start[static_cast<std::size_t>(id[k])] = k;
        });
        start[clusters] = n;

        nx.resize(clusters);
        nv.resize(clusters);
        nm.resize(clusters);
        npos.resize(clusters);
        par::for_range(clusters, [&](std::size_t cl) {
            const std::size_t lo = start[cl], hi = start[cl + 1];
            const double xr = x[lo], vr = v[lo];
            double dx = 0.0, dv = 0.0;
            std::int64_t mass = 0;
            for (std::size_t k = lo; k < hi; ++k) {
                const double mk = static_cast<double>(m[k]);
                dx += mk * (x[k] - xr);
                dv += mk * (v[k] - vr);
                mass += m[k];
            }
            nx[cl] = xr + dx / static_cast<double>(mass);
            nv[cl] = vr + dv / static_cast<double>(mass);
            nm[cl] = mass;
            npos[cl] = pos[lo];
        });
        x.swap(nx);
        v.swap(nv);
        m.swap(nm);
        pos.swap(npos);
    }

    c.ps.x = std::move(x);
    c.ps.v = std::move(v);
    c.ps.m = std::move(m);
    c.pos = std::move(pos);
}

} // namespace

SolverStats solve_imminent(ParticleSystem& ps, Parallelism par)
{
    const auto t0 = Clock::now();
    SolverStats stats;
    Compacted c = compact(ps);
    par::run(par, [&] { imminent_rounds(c, stats); });
    scatter_back(c, ps);
    stats.clusters = static_cast<std::int64_t>(c.ps.size());
    stats.wall_time = Clock::now() - t0;
    return stats;
}

// ---------------------------------------------------------------------------
// End collisions

SolverStats solve_end(ParticleSystem& ps, Parallelism par)
{
    const auto t0 = Clock::now();
    SolverStats stats;
    const std::size_t n = ps.size();
    par::run(par, [&] {
        std::size_t i = 0;
        while (i < n) {
            if (ps.is_hole(i)) {
                ++i;
                continue;
            }
            const std::size_t j = rightmost_collision(ps, i, n - 1, &stats.total_work_ops);
            perform_collisions(ps, i, j);
            std::size_t head = i;
            stats.clusters += 1 - static_cast<std::int64_t>(settle(ps, head, 0, j + 1));
            i = j + 1;
        }
    });
    stats.wall_time = Clock::now() - t0;
    return stats;
}

// ---------------------------------------------------------------------------
// Search collisions

namespace {

struct SearchState
{
    ParticleSystem& ps;
    std::atomic<std::int64_t> max_probes{0};
    std::atomic<std::int64_t> work{0};
};

// Cluster head owning index p: the nearest particle at or left of p.
std::size_t owner(const ParticleSystem& ps, std::size_t p)
{
    while (ps.is_hole(p))
        --p;
    return p;
}

void search_merge(SearchState& st, std::size_t lo, std::size_t mid, std::size_t hi)
{
    ParticleSystem& ps = st.ps;
    // Right padding only: an empty right half means there is nothing to merge,
    // and a non-empty one starts with a particle.
    if (ps.is_hole(mid))
        return;
    const std::size_t last = owner(ps, mid - 1);
    if (ps.destination(last) < ps.destination(mid))
        return;

    // Binary search for the leftmost particle whose rightmost collision
    // crosses the midline. Holes are represented by their cluster head,
    // which keeps the predicate monotone in the probe index.
    std::int64_t work = 0;
    std::int64_t probes = 0;
    std::size_t le = lo, ri = mid;
    const int steps = std::countr_zero(hi - lo) - 1;
    for (int t = 0; t < steps; ++t) {
        const std::size_t p = (le + ri - 1) / 2;
        const std::size_t j = rightmost_collision(ps, owner(ps, p), hi - 1, &work);
        ++probes;
        if (j >= mid)
            ri = p + 1;
        else
            le = p + 1;
    }
    const std::size_t head = owner(ps, le);
    const std::size_t j = rightmost_collision(ps, head, hi - 1, &work);
    ++probes;
    if (j > head) {
        perform_collisions(ps, head, j);
        std::size_t h = head;
        settle(ps, h, lo, hi);
    }

    atomic_max(st.max_probes, probes);
    st.work.fetch_add(work + static_cast<std::int64_t>(j - head + 1), std::memory_order_relaxed);
}

void search_recurse(SearchState& st, std::size_t lo, std::size_t hi)
{
    const std::size_t n = hi - lo;
    if (n <= 1)
        return;
    const std::size_t mid = lo + n / 2;
    par::fork_join(
        n >= par::kTaskGrain, [&] { search_recurse(st, lo, mid); }, [&] { search_recurse(st, mid, hi); });
    search_merge(st, lo, mid, hi);
}

SolverStats search_fresh(ParticleSystem& ps, Parallelism par)
{
    SolverStats stats;
    const std::size_t n = ps.size();
    if (n <= 1)
        return stats;
    ps.pad_to_power_of_two();
    stats.recursion_depth = std::countr_zero(ps.size());
    SearchState st{ps};
    par::run(par, [&] { search_recurse(st, 0, ps.size()); });
    ps.truncate(n);
    stats.probes_per_merge_max = st.max_probes.load();
    stats.total_work_ops = st.work.load();
    return stats;
}

} // namespace

SolverStats solve_search(ParticleSystem& ps, Parallelism par)
{
    const auto t0 = Clock::now();
    SolverStats stats;
    if (!has_holes(ps)) {
        stats = search_fresh(ps, par);
    } else {
        Compacted c = compact(ps);
        stats = search_fresh(c.ps, par);
        scatter_back(c, ps);
    }
    stats.wall_time = Clock::now() - t0;
    return stats;
}

SolverStats solve(ParticleSystem& ps, Algorithm algo, Parallelism par)
{
    switch (algo) {
    case Algorithm::pava: return solve_pava(ps);
    case Algorithm::imminent: return solve_imminent(ps, par);
    case Algorithm::end: return solve_end(ps, par);
    case Algorithm::search: return solve_search(ps, par);
    }
    throw DomainError("unknown algorithm");
}

// ---------------------------------------------------------------------------
// Isotonic front end and certificate

IsotonicResult isotonic_solve(std::span<const double> y, std::span<const std::int64_t> mass, Algorithm algo,
                              Parallelism par)
{
    if (y.empty())
        throw DomainError("isotonic: empty input");
    require_finite(y, "isotonic input");
    if (!mass.empty() && mass.size() != y.size())
        throw DomainError("isotonic: mass vector length differs from y");
    ParticleSystem ps = ParticleSystem::at_rest(y);
    if (!mass.empty()) {
        for (std::size_t k = 0; k < mass.size(); ++k) {
            if (mass[k] <= 0)
                throw InvalidInput("isotonic: masses must be positive");
            ps.m[k] = mass[k];
        }
    }
    IsotonicResult out;
    out.stats = solve(ps, algo, par);
    out.clusters = extract_clusters(ps);
    return out;
}

std::vector<double> isotonic_fit(std::span<const double> y, std::span<const std::int64_t> mass, Algorithm algo,
                                 Parallelism par)
{
    return isotonic_solve(y, mass, algo, par).clusters.per_index_value;
}

Certificate verify_solution(std::span<const double> y, std::span<const std::int64_t> mass,
                            std::span<const double> fit, double tol)
{
    const std::size_t n = y.size();
    if (fit.size() != n || (!mass.empty() && mass.size() != n))
        throw DomainError("verify_solution: length mismatch");
    if (n == 0)
        return {};

    const auto fail = [](auto&&... parts) {
        std::ostringstream os;
        os.precision(17);
        (os << ... << parts);
        return Certificate{false, os.str()};
    };
    const auto mass_at = [&](std::size_t k) -> long double {
        return mass.empty() ? 1.0L : static_cast<long double>(mass[k]);
    };
    const auto close = [&](long double a, long double b) {
        return std::abs(a - b) <= static_cast<long double>(tol) * (1.0L + std::abs(b));
    };

    // Prefix sums of m*y and m, shifted by y[0] to limit cancellation.
    std::vector<long double> ps(n + 1, 0.0L), pm(n + 1, 0.0L);
    for (std::size_t k = 0; k < n; ++k) {
        if (!mass.empty() && mass[k] <= 0)
            return fail("masses: entry ", k, " is not positive");
        ps[k + 1] = ps[k] + mass_at(k) * (static_cast<long double>(y[k]) - y[0]);
        pm[k + 1] = pm[k] + mass_at(k);
    }
    const auto avg = [&](std::size_t a, std::size_t b) { // inclusive
        return (ps[b + 1] - ps[a]) / (pm[b + 1] - pm[a]) + y[0];
    };

    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (fit[k + 1] < fit[k] && !close(fit[k + 1], fit[k]))
            return fail("monotonicity: fit decreases between indices ", k, " and ", k + 1);
    }

    // (a) block means
    for (std::size_t s = 0; s < n;) {
        std::size_t e = s;
        while (e + 1 < n && fit[e + 1] == fit[s])
            ++e;
        const long double mean = avg(s, e);
        if (!close(fit[s], mean))
            return fail("condition (a): block [", s, ", ", e, "] has value ", fit[s],
                        " but the mass-weighted mean of y is ", static_cast<double>(mean));
        s = e + 1;
    }

    // (b)/(c) neighbour collisions
    for (std::size_t i = 0; i + 1 < n; ++i) {
        long double left = avg(i, i);
        for (std::size_t j = 0; j < i; ++j)
            left = std::max(left, avg(j, i));
        long double right = avg(i + 1, i + 1);
        for (std::size_t j = i + 2; j < n; ++j)
            right = std::min(right, avg(i + 1, j));
        const long double slack = static_cast<long double>(tol) * (1.0L + std::abs(right));
        const bool same_block = fit[i] == fit[i + 1];
        if (same_block && left < right - slack)
            return fail("condition (b): indices ", i, " and ", i + 1, " share a block but do not collide (",
                        static_cast<double>(left), " < ", static_cast<double>(right), ")");
        if (!same_block && left > right + slack)
            return fail("condition (c): indices ", i, " and ", i + 1, " are in different blocks but collide (",
                        static_cast<double>(left), " >= ", static_cast<double>(right), ")");
    }
    return {};
}

} // namespace wsprox
