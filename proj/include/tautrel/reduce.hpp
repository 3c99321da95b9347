#pragma once

/** @file reduce.hpp
 *  @brief Rewrite engine expressing cotangent and Hodge decorations of a
 *         stratum as combinations of deeper undecorated strata.
 *
 *  One cotangent power at a point p of a vertex expands as follows.  On a
 *  genus-one vertex with point set P it is the Hodge class plus the sum of
 *  all boundary divisors splitting off a rational tail containing p and at
 *  least one more point of P (the whole of P included, leaving a one-pointed
 *  genus-one vertex); every summand has weight one, and the Hodge class is
 *  dropped the moment its exponent would reach two.  On a genus-zero vertex
 *  with m points it is the average, over the other points, of the comparison
 *  with a three-pointed vertex: the divisor splitting off S (p in S,
 *  2 <= |S| <= m-2) carries weight C(m-|S|,2)/C(m-1,2), and for m = 3 the
 *  class vanishes and the term dies.  Once no cotangent power remains
 *  anywhere, a Hodge class flushes: the coefficient gains a factor 1/24 and
 *  the genus-one vertex becomes a genus-zero vertex with a loop.
 *
 *  Scheduling matters: the Hodge flush must wait until every cotangent
 *  power is gone (flushing early changes the point set later expansions
 *  see).  Among cotangent sites the order is free, and ReduceOptions can
 *  shuffle it to exercise that freedom; results agree after pushing to the
 *  target space.  Termination is by the lexicographic drop of (total
 *  cotangent degree, total Hodge degree) at every step.
 */

#include "tautrel/strata.hpp"

#include <random>

namespace tautrel {

struct ReduceOptions {
    /** When set, the cotangent site expanded at each step is drawn from a
     *  generator seeded with this value instead of taking the first site. */
    std::optional<uint32_t> shuffle_seed;
};

namespace detail {

/// Split S (with a fresh node) off the vertex at index vi, keeping the
/// remainder (and any genus or Hodge decoration) behind a new edge.
inline DecoratedStratum split_vertex(const DecoratedStratum& base, int vi,
                                     const std::set<Point>& part,
                                     const Rational&        weight)
{
    DecoratedStratum u = base;
    u.coeff *= weight;
    const Point n0 = Point::node(u.next_node++);
    const Point n1 = Point::node(u.next_node++);

    DecoratedVertex tail;
    tail.genus = 0;
    tail.points.insert(n0);
    auto& keep = u.vertices[vi];
    for (const auto& p : part) {
        tail.points.insert(p);
        keep.points.erase(p);
        const auto it = keep.psi.find(p);
        if (it != keep.psi.end()) {
            tail.psi.emplace(*it);
            keep.psi.erase(it);
        }
    }
    keep.points.insert(n1);
    u.edges.emplace_back(n0, n1);
    u.vertices.push_back(std::move(tail));
    return u;
}

/// All sites carrying a cotangent power, in deterministic order.
inline std::vector<std::pair<int, Point>> psi_sites(const DecoratedStratum& s)
{
    std::vector<std::pair<int, Point>> out;
    for (size_t v = 0; v < s.vertices.size(); ++v)
        for (const auto& [p, e] : s.vertices[v].psi)
            out.emplace_back(static_cast<int>(v), p);
    return out;
}

template <class Fn>
void for_each_subset_with(const std::vector<Point>& others, const Point& p,
                          int min_others, int max_others, Fn&& fn)
{
    const int n = static_cast<int>(others.size());
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        const int chosen = __builtin_popcount(mask);
        if (chosen < min_others || chosen > max_others)
            continue;
        std::set<Point> part{p};
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i))
                part.insert(others[i]);
        fn(part);
    }
}

} // namespace detail

/** @brief Expand every decoration of the stratum into undecorated strata.
 *
 *  The result is an exact decomposition: the sum of the returned weighted
 *  strata equals the input class.  Throws std::logic_error if the rewrite
 *  fails to terminate within a generous step budget.
 */
inline std::vector<DecoratedStratum> reduce(const DecoratedStratum& s,
                                            const ReduceOptions&    opts = {})
{
    std::vector<DecoratedStratum> results;
    std::vector<DecoratedStratum> pending{s};
    std::optional<std::mt19937>   rng;
    if (opts.shuffle_seed)
        rng.emplace(*opts.shuffle_seed);

    long steps = 0;
    while (!pending.empty()) {
        if (++steps > 2'000'000)
            throw std::logic_error("reduce: rewrite did not terminate");
        DecoratedStratum t = std::move(pending.back());
        pending.pop_back();

        const auto sites = detail::psi_sites(t);
        if (sites.empty()) {
            // Hodge classes flush only once every cotangent power is gone.
            int flush_at = -1;
            for (size_t v = 0; v < t.vertices.size(); ++v)
                if (t.vertices[v].lambda > 0) {
                    flush_at = static_cast<int>(v);
                    break;
                }
            if (flush_at < 0) {
                results.push_back(std::move(t));
                continue;
            }
            auto& v = t.vertices[flush_at];
            if (v.genus != 1)
                throw std::logic_error(
                    "reduce: Hodge decoration on a genus-zero vertex");
            if (v.lambda >= 2)
                continue;  // the square of the Hodge class vanishes
            t.coeff /= 24;
            v.genus  = 0;
            v.lambda = 0;
            const Point n0 = Point::node(t.next_node++);
            const Point n1 = Point::node(t.next_node++);
            v.points.insert(n0);
            v.points.insert(n1);
            t.edges.emplace_back(n0, n1);
            pending.push_back(std::move(t));
            continue;
        }

        size_t pick = 0;
        if (rng)
            pick = std::uniform_int_distribution<size_t>(0, sites.size() - 1)(*rng);
        const auto [vi, p] = sites[pick];

        DecoratedStratum base = t;
        {
            auto& v = base.vertices[vi];
            if (--v.psi[p] == 0)
                v.psi.erase(p);
        }
        const auto&        v = base.vertices[vi];
        std::vector<Point> others;
        for (const auto& q : v.points)
            if (!(q == p))
                others.push_back(q);
        const int m = static_cast<int>(v.points.size());

        if (v.genus == 1) {
            DecoratedStratum with_hodge = base;
            with_hodge.vertices[vi].lambda += 1;
            if (with_hodge.vertices[vi].lambda <= 1)
                pending.push_back(std::move(with_hodge));
            detail::for_each_subset_with(
                others, p, 1, static_cast<int>(others.size()),
                [&](const std::set<Point>& part) {
                    pending.push_back(detail::split_vertex(base, vi, part, 1));
                });
        } else {
            if (m == 3)
                continue;  // the cotangent class vanishes on this vertex
            detail::for_each_subset_with(
                others, p, 1, m - 3, [&](const std::set<Point>& part) {
                    const Rational weight =
                        Rational(binomial(m - static_cast<int>(part.size()), 2)) /
                        Rational(binomial(m - 1, 2));
                    pending.push_back(detail::split_vertex(base, vi, part, weight));
                });
        }
    }
    return results;
}

/** @brief Full per-locus pipeline: realize the class as decorated strata,
 *         expand all decorations, and push every surviving term to the
 *         target space. */
inline std::vector<std::pair<Rational, FinalGraph>>
reduce_and_push(const FixedLocusGraph& locus, const TautElement& cls,
                const ReduceOptions& opts = {})
{
    std::vector<std::pair<Rational, FinalGraph>> out;
    for (const auto& start : initial_strata(locus, cls))
        for (const auto& term : reduce(start, opts))
            if (auto pushed = stabilize(term, &locus))
                out.push_back(*pushed);
    return out;
}

} // namespace tautrel
