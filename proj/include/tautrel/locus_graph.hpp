#pragma once

/** @file locus_graph.hpp
 *  @brief Fixed-locus graphs for torus-equivariant stable maps to the line.
 *
 *  A fixed locus of the torus action on the space of degree-d stable maps is
 *  recorded as a bipartite multigraph: vertices sit over the two fixed points
 *  of the target (side 0 and side infinity) and carry a genus and a set of
 *  marks; edges are the multiple-cover components, one per edge, with a
 *  positive degree.  Whether a vertex is a contracted subcurve or a mere
 *  point of the domain is forced by its data: positive genus, or at least
 *  three special points, means contracted.
 *
 *  The same structure is used labelled (marks carry their labels) and
 *  unlabelled (only the number of marks per vertex is remembered); canonical
 *  string forms for both flavors, computed by minimizing over side-
 *  preserving vertex orders, provide equality and dedup keys.
 */

#include "tautrel/taut_element.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace tautrel {

struct LocusVertex {
    int              side       = 0;  ///< 0 over the origin, 1 over infinity
    int              genus      = 0;
    int              mark_count = 0;
    std::vector<int> marks;  ///< sorted labels; empty when only counts are known

    bool operator==(const LocusVertex&) const = default;
};

struct LocusEdge {
    int a      = 0;  ///< side-0 endpoint (vertex index)
    int b      = 0;  ///< side-1 endpoint (vertex index)
    int degree = 1;

    bool operator==(const LocusEdge&) const = default;
};

/** @brief Bipartite fixed-locus graph plus the run parameters it belongs to. */
struct FixedLocusGraph {
    int total_genus  = 0;
    int total_marks  = 0;
    int total_degree = 0;

    std::vector<LocusVertex> vertices;
    std::vector<LocusEdge>   edges;

    int valence(int v) const
    {
        int out = 0;
        for (const auto& e : edges)
            out += (e.a == v) + (e.b == v);
        return out;
    }

    std::vector<int> incident_edges(int v) const
    {
        std::vector<int> out;
        for (size_t i = 0; i < edges.size(); ++i)
            if (edges[i].a == v || edges[i].b == v)
                out.push_back(static_cast<int>(i));
        return out;
    }

    /** @brief Contractedness is forced: positive genus or three special points. */
    bool is_contracted(int v) const
    {
        return vertices[v].genus > 0 ||
               valence(v) + vertices[v].mark_count >= 3;
    }

    /// First-Betti number of the underlying graph (assumes connected).
    int loop_rank() const
    {
        return static_cast<int>(edges.size()) -
               static_cast<int>(vertices.size()) + 1;
    }

    int vertex_at(int edge, int side) const
    {
        return side == 0 ? edges[edge].a : edges[edge].b;
    }
};

namespace detail {

inline std::string encode_locus(const FixedLocusGraph& g,
                                const std::vector<int>& order,
                                bool                    labelled)
{
    std::vector<int> position(g.vertices.size());
    for (size_t i = 0; i < order.size(); ++i)
        position[order[i]] = static_cast<int>(i);

    std::string out;
    for (int v : order) {
        const auto& vert = g.vertices[v];
        out += "Vs" + std::to_string(vert.side) + "g" + std::to_string(vert.genus);
        if (labelled) {
            out += "m{";
            for (size_t i = 0; i < vert.marks.size(); ++i)
                out += (i ? "," : "") + std::to_string(vert.marks[i]);
            out += "}";
        } else {
            out += "m" + std::to_string(vert.mark_count);
        }
        out += ";";
    }
    std::vector<std::string> edge_bits;
    for (const auto& e : g.edges)
        edge_bits.push_back("E" + std::to_string(position[e.a]) + "-" +
                            std::to_string(position[e.b]) + "d" +
                            std::to_string(e.degree));
    std::sort(edge_bits.begin(), edge_bits.end());
    for (const auto& s : edge_bits)
        out += s + ";";
    return out;
}

/// All vertex orders listing side-0 vertices (in any order) before side-1.
template <class Fn>
void for_each_side_order(const FixedLocusGraph& g, Fn&& fn)
{
    std::vector<int> side0, side1;
    for (size_t v = 0; v < g.vertices.size(); ++v)
        (g.vertices[v].side == 0 ? side0 : side1).push_back(static_cast<int>(v));
    std::sort(side0.begin(), side0.end());
    std::sort(side1.begin(), side1.end());
    do {
        do {
            std::vector<int> order = side0;
            order.insert(order.end(), side1.begin(), side1.end());
            fn(order);
        } while (std::next_permutation(side1.begin(), side1.end()));
    } while (std::next_permutation(side0.begin(), side0.end()));
}

} // namespace detail

/** @brief Canonical string of a labelled fixed-locus graph. */
inline std::string canonical_form(const FixedLocusGraph& g)
{
    std::string best;
    detail::for_each_side_order(g, [&](const std::vector<int>& order) {
        std::string s = detail::encode_locus(g, order, true);
        if (best.empty() || s < best)
            best = std::move(s);
    });
    return best;
}

/** @brief Canonical string ignoring mark labels (counts only). */
inline std::string unlabelled_form(const FixedLocusGraph& g)
{
    std::string best;
    detail::for_each_side_order(g, [&](const std::vector<int>& order) {
        std::string s = detail::encode_locus(g, order, false);
        if (best.empty() || s < best)
            best = std::move(s);
    });
    return best;
}

/** @brief Order of the automorphism group of the graph itself:
 *         identity-on-data vertex bijections times permutations of
 *         indistinguishable parallel edges. */
inline Integer graph_symmetry_order(const FixedLocusGraph& g)
{
    // The orders realizing any fixed encoding string form a torsor under the
    // group of data-preserving vertex bijections, so counting how often the
    // minimal encoding is achieved counts those bijections.
    std::vector<std::string> encodings;
    detail::for_each_side_order(g, [&](const std::vector<int>& order) {
        encodings.push_back(detail::encode_locus(g, order, true));
    });
    const std::string best =
        *std::min_element(encodings.begin(), encodings.end());
    Integer vertex_perms = static_cast<long>(
        std::count(encodings.begin(), encodings.end(), best));

    // Parallel-edge classes: identical endpoint pair and degree.
    std::map<std::tuple<int, int, int>, int> classes;
    for (const auto& e : g.edges)
        ++classes[{e.a, e.b, e.degree}];
    Integer out = vertex_perms;
    for (const auto& [key, count] : classes)
        out *= factorial(count);
    return out;
}

/** @brief Localization automorphism factor of a labelled fixed locus:
 *         the graph symmetry order times the product of edge degrees
 *         (deck transformations of the multiple covers). */
inline Integer automorphism_count(const FixedLocusGraph& g)
{
    Integer out = graph_symmetry_order(g);
    for (const auto& e : g.edges)
        out *= e.degree;
    return out;
}

/** @brief Sorted factor fingerprint, e.g. "0:M(0,3)*M(1,1)*|inf:M(0,4)*". */
inline std::string factor_fingerprint(const FixedLocusGraph& g)
{
    std::vector<std::string> side0, side1;
    for (size_t v = 0; v < g.vertices.size(); ++v) {
        if (!g.is_contracted(static_cast<int>(v)))
            continue;
        const FactorSpace f{g.vertices[v].genus,
                            g.valence(static_cast<int>(v)) +
                                g.vertices[v].mark_count};
        (g.vertices[v].side == 0 ? side0 : side1).push_back(f.name() + "*");
    }
    std::sort(side0.begin(), side0.end());
    std::sort(side1.begin(), side1.end());
    std::string out = "0:";
    for (const auto& s : side0)
        out += s;
    out += "|inf:";
    for (const auto& s : side1)
        out += s;
    return out;
}

/** @brief The product of moduli factors parametrizing a fixed locus, with
 *         one cotangent variable per flag on a contracted vertex. */
struct ParametrizingSpace {
    std::shared_ptr<const VarContext> context;

    /// factor index -> vertex index in the locus graph
    std::vector<int> factor_vertex;

    /// aligned with context->vars: which (vertex, edge) each variable is
    struct Flag {
        int vertex = 0;
        int edge   = 0;
    };
    std::vector<Flag> flags;

    int dim() const { return context->total_dim(); }
};

/** @brief Build the parametrizing space of a fixed locus.
 *
 *  Factors are the contracted vertices (side 0 first, then side 1, each side
 *  sorted by factor name then vertex index); variables are sorted by their
 *  role descriptor "psi(g<genus>,s<side>,far=<kind>,d<degree>)" where the far
 *  kind describes the opposite end of the flag's edge.
 */
inline ParametrizingSpace parametrizing_space(const FixedLocusGraph& g)
{
    ParametrizingSpace space;
    auto               ctx = std::make_shared<VarContext>();

    std::vector<std::tuple<int, std::string, int>> factor_sort;  // (side, name, vertex)
    for (size_t v = 0; v < g.vertices.size(); ++v) {
        if (!g.is_contracted(static_cast<int>(v)))
            continue;
        const FactorSpace f{g.vertices[v].genus,
                            g.valence(static_cast<int>(v)) +
                                g.vertices[v].mark_count};
        factor_sort.emplace_back(g.vertices[v].side, f.name(), static_cast<int>(v));
    }
    std::sort(factor_sort.begin(), factor_sort.end());

    std::vector<int> factor_of_vertex(g.vertices.size(), -1);
    for (const auto& [side, name, v] : factor_sort) {
        factor_of_vertex[v] = static_cast<int>(ctx->factors.size());
        ctx->factors.push_back(
            FactorSpace{g.vertices[v].genus, g.valence(v) + g.vertices[v].mark_count});
        space.factor_vertex.push_back(v);
        if (g.vertices[v].genus == 1) {
            if (ctx->lambda_factor >= 0)
                throw std::logic_error(
                    "parametrizing_space: more than one genus-one factor");
            ctx->lambda_factor = static_cast<int>(ctx->factors.size()) - 1;
        }
    }

    std::vector<std::tuple<std::string, int, int>> var_sort;  // (descriptor, vertex, edge)
    for (size_t ei = 0; ei < g.edges.size(); ++ei) {
        for (int side : {0, 1}) {
            const int v = g.vertex_at(static_cast<int>(ei), side);
            if (!g.is_contracted(v))
                continue;
            const int   w = g.vertex_at(static_cast<int>(ei), 1 - side);
            std::string far;
            if (g.is_contracted(w))
                far = "C(" + std::to_string(g.vertices[w].genus) + "," +
                      std::to_string(g.valence(w) + g.vertices[w].mark_count) + ")";
            else if (g.vertices[w].mark_count == 1)
                far = "P1";
            else if (g.valence(w) == 2)
                far = "P2";
            else
                far = "P0";
            std::string descriptor = "psi(g" + std::to_string(g.vertices[v].genus) +
                                     ",s" + std::to_string(g.vertices[v].side) +
                                     ",far=" + far + ",d" +
                                     std::to_string(g.edges[ei].degree) + ")";
            var_sort.emplace_back(std::move(descriptor), v, static_cast<int>(ei));
        }
    }
    std::sort(var_sort.begin(), var_sort.end());
    for (const auto& [descriptor, v, e] : var_sort) {
        ctx->vars.push_back({descriptor, factor_of_vertex[v]});
        space.flags.push_back({v, e});
    }

    space.context = std::move(ctx);
    return space;
}

} // namespace tautrel
