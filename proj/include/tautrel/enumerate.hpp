#pragma once

/** @file enumerate.hpp
 *  @brief Exhaustive enumeration of fixed loci and of their mark labelings.
 *
 *  Every fixed-locus graph for parameters (g, n, d) arises as: a partition of
 *  d into edge degrees, a set partition of the edge ends on each side into
 *  vertices, a distribution of the residual genus g - b1 over the vertices,
 *  and a distribution of the n marks.  The enumerator walks that product
 *  space, keeps connected graphs, and dedups by canonical form, so the output
 *  is independent of construction order.
 *
 *  Labelings are enumerated per unlabelled locus: assignments of the mark
 *  labels to vertices with the prescribed per-vertex counts, optionally
 *  constrained to a side pattern, deduped by labelled canonical form.
 */

#include "tautrel/locus_graph.hpp"

#include <optional>

namespace tautrel {

/** @brief An isomorphism class of fixed loci: a representative graph (mark
 *         counts only) and its canonical key. */
struct UnlabelledLocus {
    FixedLocusGraph graph;
    std::string     canonical_form;
};

namespace detail {

/// Partitions of d into a weakly decreasing list of positive parts.
inline std::vector<std::vector<int>> integer_partitions(int d)
{
    std::vector<std::vector<int>> out;
    std::vector<int>              current;
    auto rec = [&](auto&& self, int remaining, int max_part) -> void {
        if (remaining == 0) {
            out.push_back(current);
            return;
        }
        for (int part = std::min(remaining, max_part); part >= 1; --part) {
            current.push_back(part);
            self(self, remaining - part, part);
            current.pop_back();
        }
    };
    rec(rec, d, d);
    return out;
}

/// Set partitions of {0..k-1} as block-index vectors (restricted growth).
inline std::vector<std::vector<int>> set_partitions(int k)
{
    std::vector<std::vector<int>> out;
    std::vector<int>              rgs(k, 0);
    auto rec = [&](auto&& self, int i, int max_used) -> void {
        if (i == k) {
            out.push_back(rgs);
            return;
        }
        for (int b = 0; b <= max_used + 1; ++b) {
            rgs[i] = b;
            self(self, i + 1, std::max(max_used, b));
        }
    };
    if (k == 0)
        out.push_back({});
    else
        rec(rec, 0, -1);
    return out;
}

inline bool is_connected(const FixedLocusGraph& g)
{
    if (g.vertices.empty())
        return false;
    std::vector<int> parent(g.vertices.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& e : g.edges)
        parent[find(e.a)] = find(e.b);
    const int root = find(0);
    for (size_t v = 1; v < g.vertices.size(); ++v)
        if (find(static_cast<int>(v)) != root)
            return false;
    return true;
}

/// All ways to write n as an ordered sum of `slots` nonnegative integers.
template <class Fn>
void for_each_composition(int n, int slots, Fn&& fn)
{
    std::vector<int> counts(slots, 0);
    auto rec = [&](auto&& self, int slot, int remaining) -> void {
        if (slot == slots - 1) {
            counts[slot] = remaining;
            fn(counts);
            return;
        }
        for (int c = 0; c <= remaining; ++c) {
            counts[slot] = c;
            self(self, slot + 1, remaining - c);
        }
    };
    if (slots == 0) {
        if (n == 0)
            fn(counts);
        return;
    }
    rec(rec, 0, n);
}

} // namespace detail

/** @brief All isomorphism classes of fixed-locus graphs for (g, n, d).
 *
 *  Supported envelope: g in {0,1}, 0 <= n <= 6, 1 <= d <= 3; anything else
 *  throws std::domain_error.  Results are sorted by canonical form.
 */
inline std::vector<UnlabelledLocus> enumerate_fixed_loci(int g, int n, int d)
{
    if (g < 0 || g > 1 || n < 0 || n > 6 || d < 1 || d > 3)
        throw std::domain_error(
            "enumerate_fixed_loci: parameters outside the supported envelope "
            "(genus 0..1, marks 0..6, degree 1..3)");

    std::map<std::string, FixedLocusGraph> found;

    for (const auto& degrees : detail::integer_partitions(d)) {
        const int k          = static_cast<int>(degrees.size());
        const auto partitions = detail::set_partitions(k);
        for (const auto& p0 : partitions) {
            const int blocks0 = k ? 1 + *std::max_element(p0.begin(), p0.end()) : 0;
            for (const auto& p1 : partitions) {
                const int blocks1 =
                    k ? 1 + *std::max_element(p1.begin(), p1.end()) : 0;

                FixedLocusGraph skeleton;
                skeleton.total_genus  = g;
                skeleton.total_marks  = n;
                skeleton.total_degree = d;
                for (int v = 0; v < blocks0; ++v)
                    skeleton.vertices.push_back({0, 0, 0, {}});
                for (int v = 0; v < blocks1; ++v)
                    skeleton.vertices.push_back({1, 0, 0, {}});
                for (int e = 0; e < k; ++e)
                    skeleton.edges.push_back(
                        {p0[e], blocks0 + p1[e], degrees[e]});

                if (!detail::is_connected(skeleton))
                    continue;
                const int b1 = skeleton.loop_rank();
                if (b1 < 0 || b1 > g)
                    continue;
                const int residual_genus = g - b1;
                const int V = static_cast<int>(skeleton.vertices.size());

                std::vector<std::vector<int>> genus_choices;
                if (residual_genus == 0) {
                    genus_choices.emplace_back(V, 0);
                } else {
                    for (int v = 0; v < V; ++v) {
                        std::vector<int> gv(V, 0);
                        gv[v] = residual_genus;
                        genus_choices.push_back(std::move(gv));
                    }
                }

                for (const auto& gv : genus_choices) {
                    detail::for_each_composition(
                        n, V, [&](const std::vector<int>& mark_counts) {
                            FixedLocusGraph graph = skeleton;
                            for (int v = 0; v < V; ++v) {
                                graph.vertices[v].genus      = gv[v];
                                graph.vertices[v].mark_count = mark_counts[v];
                            }
                            found.emplace(unlabelled_form(graph), graph);
                        });
                }
            }
        }
    }

    std::vector<UnlabelledLocus> out;
    out.reserve(found.size());
    for (auto& [key, graph] : found)
        out.push_back({std::move(graph), key});
    return out;
}

/** @brief Side assignment for the mark labels: sides[i] is the side (0 or 1)
 *         required for mark label i+1.  The default pattern places the first
 *         floor(n/2) labels at side 0 and the rest at infinity. */
inline std::vector<int> default_pattern(int n)
{
    std::vector<int> sides(n, 1);
    for (int i = 0; i < n / 2; ++i)
        sides[i] = 0;
    return sides;
}

/** @brief Isomorphism classes of labelings of an unlabelled locus.
 *
 *  Mark labels 1..n are distributed to vertices matching each vertex's mark
 *  count; if a pattern is given, label i+1 may only sit on a vertex of side
 *  pattern[i].  Classes are deduped by labelled canonical form and returned
 *  sorted by it.
 */
inline std::vector<FixedLocusGraph>
labelled_classes(const UnlabelledLocus&                 u,
                 const std::optional<std::vector<int>>& pattern = std::nullopt)
{
    const auto& rep = u.graph;
    const int   n   = rep.total_marks;
    if (pattern && static_cast<int>(pattern->size()) != n)
        throw std::invalid_argument(
            "labelled_classes: pattern length must equal the mark count");

    std::map<std::string, FixedLocusGraph> classes;
    FixedLocusGraph                        current = rep;

    std::vector<int> assignment(n, -1);  // label index -> vertex
    auto             rec = [&](auto&& self, int label) -> void {
        if (label == n) {
            for (auto& v : current.vertices)
                v.marks.clear();
            for (int i = 0; i < n; ++i)
                current.vertices[assignment[i]].marks.push_back(i + 1);
            classes.emplace(canonical_form(current), current);
            return;
        }
        for (size_t v = 0; v < rep.vertices.size(); ++v) {
            int used = 0;
            for (int i = 0; i < label; ++i)
                used += assignment[i] == static_cast<int>(v);
            if (used >= rep.vertices[v].mark_count)
                continue;
            if (pattern && rep.vertices[v].side != (*pattern)[label])
                continue;
            assignment[label] = static_cast<int>(v);
            self(self, label + 1);
            assignment[label] = -1;
        }
    };
    rec(rec, 0);

    std::vector<FixedLocusGraph> out;
    out.reserve(classes.size());
    for (auto& [key, graph] : classes)
        out.push_back(std::move(graph));
    return out;
}

/** @brief Number of labelled classes of u whose marks respect the pattern. */
inline int count_compatible_labelings(const UnlabelledLocus&  u,
                                      const std::vector<int>& pattern)
{
    return static_cast<int>(labelled_classes(u, pattern).size());
}

} // namespace tautrel
