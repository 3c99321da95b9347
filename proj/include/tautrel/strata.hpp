#pragma once

/** @file strata.hpp
 *  @brief Decorated boundary strata, stabilization to the target moduli
 *         space, and coordinates in the fixed basis of stratum classes.
 *
 *  A DecoratedStratum is a disjoint union of stable vertices (genus, a set of
 *  special points, psi exponents at points, a lambda exponent on the genus-one
 *  vertex) together with edges joining pairs of points, and a rational
 *  coefficient.  Points come in three kinds: marks (carrying their label),
 *  flags (ends of fixed-locus edges, waiting to be matched across the locus
 *  graph), and nodes (created when a vertex splits).
 *
 *  Stabilization resolves every flag against the locus graph the stratum came
 *  from: a flag whose edge chain (through valence-2 points) reaches another
 *  contracted vertex fuses with the partner flag into an edge; a chain ending
 *  at a marked point becomes that mark; a chain ending at a free point is
 *  forgotten — killing the term when the carrying vertex has moduli, and
 *  contracting the vertex when it is a three-pointed rational one.
 *
 *  The final coordinates: undecorated stabilized strata are bucketed by
 *  labelled isomorphism class, rescaled by the stack convention (order of the
 *  automorphism group of the dual graph), and read off against a basis of
 *  symmetrized classes: each basis coordinate is the stabilizer order of its
 *  representative times the bucket sum over the representative's orbit under
 *  relabeling marks.
 */

#include "tautrel/locus_graph.hpp"

#include <algorithm>
#include <compare>
#include <numeric>
#include <optional>

namespace tautrel {

/** @brief A special point of a decorated stratum. */
struct Point {
    enum class Kind : int { Mark = 0, Flag = 1, Node = 2 };
    Kind kind = Kind::Mark;
    int  a    = 0;  ///< Mark: label; Flag: locus edge index; Node: fresh id
    int  b    = 0;  ///< Flag: side of the locus edge; otherwise 0

    auto operator<=>(const Point&) const = default;

    static Point mark(int label) { return {Kind::Mark, label, 0}; }
    static Point flag(int edge, int side) { return {Kind::Flag, edge, side}; }
    static Point node(int id) { return {Kind::Node, id, 0}; }
};

struct DecoratedVertex {
    int                  genus = 0;
    std::set<Point>      points;
    std::map<Point, int> psi;  ///< positive exponents only
    int                  lambda = 0;

    int dim() const { return 3 * genus - 3 + static_cast<int>(points.size()); }
};

/** @brief A decorated stratum with its rational coefficient. */
struct DecoratedStratum {
    Rational                                coeff = 0;
    std::vector<DecoratedVertex>            vertices;
    std::vector<std::pair<Point, Point>>    edges;
    int                                     next_node = 0;

    int vertex_of(const Point& p) const
    {
        for (size_t v = 0; v < vertices.size(); ++v)
            if (vertices[v].points.count(p))
                return static_cast<int>(v);
        throw std::logic_error("DecoratedStratum: point not on any vertex");
    }

    int psi_degree() const
    {
        int out = 0;
        for (const auto& v : vertices)
            for (const auto& [p, e] : v.psi)
                out += e;
        return out;
    }

    int lambda_degree() const
    {
        int out = 0;
        for (const auto& v : vertices)
            out += v.lambda;
        return out;
    }

    bool decorated() const { return psi_degree() > 0 || lambda_degree() > 0; }
};

/** @brief The dual graph of a boundary stratum of the target space. */
struct FinalVertex {
    int              genus = 0;
    std::vector<int> marks;  ///< sorted labels
};

struct FinalGraph {
    std::vector<FinalVertex>             vertices;
    std::vector<std::pair<int, int>>     edges;  ///< vertex index pairs, a <= b
};

namespace detail {

inline std::string encode_final(const FinalGraph& g,
                                const std::vector<int>& order, bool labelled)
{
    std::vector<int> position(g.vertices.size());
    for (size_t i = 0; i < order.size(); ++i)
        position[order[i]] = static_cast<int>(i);
    std::string out;
    for (int v : order) {
        const auto& vert = g.vertices[v];
        out += "V g" + std::to_string(vert.genus) + " m";
        if (labelled) {
            out += "{";
            for (size_t i = 0; i < vert.marks.size(); ++i)
                out += (i ? "," : "") + std::to_string(vert.marks[i]);
            out += "}";
        } else {
            out += std::to_string(vert.marks.size());
        }
        out += ";";
    }
    std::vector<std::string> edge_bits;
    for (const auto& [a, b] : g.edges) {
        const int x = std::min(position[a], position[b]);
        const int y = std::max(position[a], position[b]);
        edge_bits.push_back("E" + std::to_string(x) + "-" + std::to_string(y));
    }
    std::sort(edge_bits.begin(), edge_bits.end());
    for (const auto& s : edge_bits)
        out += s + ";";
    return out;
}

template <class Fn>
void for_each_vertex_order(size_t count, Fn&& fn)
{
    std::vector<int> order(count);
    std::iota(order.begin(), order.end(), 0);
    do {
        fn(order);
    } while (std::next_permutation(order.begin(), order.end()));
}

} // namespace detail

/** @brief Canonical string of a stratum dual graph; with labels when
 *         labelled, mark counts otherwise. */
inline std::string final_form(const FinalGraph& g, bool labelled)
{
    std::string best;
    detail::for_each_vertex_order(g.vertices.size(),
                                  [&](const std::vector<int>& order) {
                                      std::string s =
                                          detail::encode_final(g, order, labelled);
                                      if (best.empty() || s < best)
                                          best = std::move(s);
                                  });
    return best;
}

/** @brief Order of the automorphism group of the labelled dual graph:
 *         label-preserving vertex bijections, permutations of parallel
 *         edges, and a factor 2 per loop (its half-edge swap). */
inline Integer final_aut(const FinalGraph& g)
{
    std::vector<std::string> encodings;
    detail::for_each_vertex_order(g.vertices.size(),
                                  [&](const std::vector<int>& order) {
                                      encodings.push_back(
                                          detail::encode_final(g, order, true));
                                  });
    const std::string best =
        *std::min_element(encodings.begin(), encodings.end());
    Integer out = static_cast<long>(
        std::count(encodings.begin(), encodings.end(), best));

    std::map<std::pair<int, int>, int> parallel;
    std::map<int, int>                 loops;
    for (const auto& [a, b] : g.edges) {
        if (a == b)
            ++loops[a];
        else
            ++parallel[{std::min(a, b), std::max(a, b)}];
    }
    for (const auto& [key, count] : parallel)
        out *= factorial(count);
    for (const auto& [v, count] : loops) {
        out *= factorial(count);
        for (int i = 0; i < count; ++i)
            out *= 2;
    }
    return out;
}

/** @brief Number of marks of a dual graph; labels must be exactly 1..n. */
inline int mark_count(const FinalGraph& g)
{
    std::set<int> labels;
    for (const auto& v : g.vertices)
        labels.insert(v.marks.begin(), v.marks.end());
    const int n = static_cast<int>(labels.size());
    for (int i = 1; i <= n; ++i)
        if (!labels.count(i))
            throw std::logic_error("FinalGraph: mark labels are not 1..n");
    return n;
}

/** @brief The same graph with mark labels permuted (label l -> perm[l-1]). */
inline FinalGraph relabel(const FinalGraph& g, const std::vector<int>& perm)
{
    FinalGraph out = g;
    for (auto& v : out.vertices) {
        for (auto& m : v.marks)
            m = perm[m - 1];
        std::sort(v.marks.begin(), v.marks.end());
    }
    return out;
}

/** @brief Canonical labelled forms of the whole relabeling orbit of g. */
inline std::set<std::string> orbit_forms(const FinalGraph& g)
{
    const int        n = mark_count(g);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 1);
    std::set<std::string> out;
    do {
        out.insert(final_form(relabel(g, perm), true));
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

/** @brief Exact coordinates over a fixed basis of symmetrized stratum
 *         classes; the basis order is carried alongside. */
struct DeltaVector {
    std::vector<std::string> names;
    std::vector<Rational>    coords;

    bool is_zero() const
    {
        return std::all_of(coords.begin(), coords.end(),
                           [](const Rational& c) { return c == 0; });
    }
};

inline DeltaVector operator+(const DeltaVector& a, const DeltaVector& b)
{
    if (a.names != b.names)
        throw std::invalid_argument("DeltaVector: mismatched bases");
    DeltaVector out = a;
    for (size_t i = 0; i < out.coords.size(); ++i)
        out.coords[i] += b.coords[i];
    return out;
}

inline DeltaVector operator*(const Rational& c, const DeltaVector& v)
{
    DeltaVector out = v;
    for (auto& x : out.coords)
        x *= c;
    return out;
}

/** @brief Named representatives generating the coordinate basis. */
struct DeltaBasis {
    struct Entry {
        std::string name;
        FinalGraph  representative;
    };
    std::vector<Entry> entries;

    DeltaVector zero() const
    {
        DeltaVector out;
        for (const auto& e : entries) {
            out.names.push_back(e.name);
            out.coords.emplace_back(0);
        }
        return out;
    }

    /** @brief The basis for a supported target space.
     *
     *  (1,4): the eight symmetrized codimension-2 classes, in the order
     *  d22, d23, d24, d34, d02, d03, d04, dbeta.  (0,4): the three boundary
     *  points of the four-pointed rational moduli space, d12_34, d13_24,
     *  d14_23.  Anything else throws std::domain_error.
     */
    static DeltaBasis for_target(int genus, int marks)
    {
        const auto tree = [](int g0_end_genus, std::vector<int> end,
                             std::vector<int> mid, std::vector<int> far) {
            FinalGraph g;
            g.vertices = {{0, std::move(end)}, {0, std::move(mid)},
                          {g0_end_genus, std::move(far)}};
            g.edges    = {{0, 1}, {1, 2}};
            return g;
        };
        DeltaBasis basis;
        if (genus == 1 && marks == 4) {
            FinalGraph star;
            star.vertices = {{0, {1, 2}}, {0, {3, 4}}, {1, {}}};
            star.edges    = {{0, 2}, {1, 2}};
            basis.entries.push_back({"d22", star});
            basis.entries.push_back({"d23", tree(1, {1, 2}, {3}, {4})});
            basis.entries.push_back({"d24", tree(1, {1, 2}, {3, 4}, {})});
            basis.entries.push_back({"d34", tree(1, {1, 2, 3}, {4}, {})});
            FinalGraph looped;
            looped.vertices = {{0, {1, 2}}, {0, {3, 4}}};
            looped.edges    = {{1, 1}, {0, 1}};
            basis.entries.push_back({"d02", looped});
            looped.vertices = {{0, {1, 2, 3}}, {0, {4}}};
            basis.entries.push_back({"d03", looped});
            looped.vertices = {{0, {1, 2, 3, 4}}, {0, {}}};
            basis.entries.push_back({"d04", looped});
            FinalGraph banana;
            banana.vertices = {{0, {1, 2}}, {0, {3, 4}}};
            banana.edges    = {{0, 1}, {0, 1}};
            basis.entries.push_back({"dbeta", banana});
            return basis;
        }
        if (genus == 0 && marks == 4) {
            const auto pair_graph = [](std::vector<int> left,
                                       std::vector<int> right) {
                FinalGraph g;
                g.vertices = {{0, std::move(left)}, {0, std::move(right)}};
                g.edges    = {{0, 1}};
                return g;
            };
            basis.entries.push_back({"d12_34", pair_graph({1, 2}, {3, 4})});
            basis.entries.push_back({"d13_24", pair_graph({1, 3}, {2, 4})});
            basis.entries.push_back({"d14_23", pair_graph({1, 4}, {2, 3})});
            return basis;
        }
        throw std::domain_error("DeltaBasis: unsupported target space");
    }
};

/** @brief Read a list of weighted stabilized strata off against a basis.
 *
 *  Buckets strata by labelled class; when `unlabelled` is set each bucket
 *  entry is rescaled by the order of the dual graph's automorphism group
 *  (the stack fundamental-class convention).  Each coordinate is the
 *  stabilizer order of the basis representative times the bucket sum over
 *  its relabeling orbit.  A nonzero total on an orbit outside the basis
 *  throws std::domain_error; with `strict` cleared such orbits are dropped
 *  instead (used when reducing at depths whose classes land outside the
 *  dimension-two dictionary).
 */
inline DeltaVector to_delta(const std::vector<std::pair<Rational, FinalGraph>>& strata,
                            bool              unlabelled,
                            const DeltaBasis& basis,
                            bool              strict = true)
{
    std::map<std::string, Rational>   buckets;
    std::map<std::string, FinalGraph> samples;
    for (const auto& [coeff, graph] : strata) {
        Rational c = coeff;
        if (unlabelled)
            c *= Rational(final_aut(graph));
        const std::string key = final_form(graph, true);
        buckets[key] += c;
        samples.emplace(key, graph);
    }

    DeltaVector           out = basis.zero();
    std::set<std::string> covered;
    for (size_t i = 0; i < basis.entries.size(); ++i) {
        const auto& rep   = basis.entries[i].representative;
        const auto  orbit = orbit_forms(rep);
        const Integer stab =
            factorial(mark_count(rep)) / Integer(orbit.size());
        Rational sum = 0;
        for (const auto& member : orbit) {
            covered.insert(member);
            const auto it = buckets.find(member);
            if (it != buckets.end())
                sum += it->second;
        }
        out.coords[i] = Rational(stab) * sum;
    }

    // Anything outside the basis must cancel orbit-wide.
    std::set<std::string> checked;
    for (const auto& [key, value] : buckets) {
        if (covered.count(key) || checked.count(key))
            continue;
        const auto orbit = orbit_forms(samples.at(key));
        Rational   sum   = 0;
        for (const auto& member : orbit) {
            checked.insert(member);
            const auto it = buckets.find(member);
            if (it != buckets.end())
                sum += it->second;
        }
        if (sum != 0 && strict)
            throw std::domain_error(
                "to_delta: nonzero class outside the basis dictionary: " + key);
    }
    return out;
}

/** @brief One relabeling orbit of dimension-two boundary strata. */
struct OrbitRow {
    std::string shape;       ///< unlabelled canonical form of the members
    long        labelled;    ///< number of distinct labelled classes
    long        stabilizer;  ///< relabeling stabilizer order, 24 / labelled
    Integer     aut;         ///< automorphism order of one labelled member
};

/** @brief The complete dictionary of codimension-two strata orbits of the
 *         genus-one four-pointed target space, sorted by shape string.
 *
 *  Enumerates every connected stable two-edge dual graph of total genus one
 *  with marks 1..4 and groups the labelled classes into relabeling orbits.
 */
inline std::vector<OrbitRow> codim2_orbit_table(int genus, int marks)
{
    if (genus != 1 || marks != 4)
        throw std::domain_error("codim2_orbit_table: unsupported target space");

    std::map<std::string, FinalGraph> all;
    for (int nv = 1; nv <= 3; ++nv) {
        std::vector<std::pair<int, int>> pairs;
        for (int i = 0; i < nv; ++i)
            for (int j = i; j < nv; ++j)
                pairs.emplace_back(i, j);
        for (size_t e1 = 0; e1 < pairs.size(); ++e1)
            for (size_t e2 = e1; e2 < pairs.size(); ++e2) {
                FinalGraph g;
                g.vertices.resize(nv);
                g.edges = {pairs[e1], pairs[e2]};

                std::vector<int> parent(nv);
                std::iota(parent.begin(), parent.end(), 0);
                const auto find = [&](int x) {
                    while (parent[x] != x)
                        x = parent[x] = parent[parent[x]];
                    return x;
                };
                for (const auto& [a, b] : g.edges)
                    parent[find(a)] = find(b);
                bool connected = true;
                for (int v = 1; v < nv; ++v)
                    connected = connected && find(v) == find(0);
                if (!connected)
                    continue;

                const int loop_rank  = 2 - nv + 1;
                const int free_genus = 1 - loop_rank;
                if (free_genus < 0)
                    continue;

                std::vector<int> degree(nv, 0);
                for (const auto& [a, b] : g.edges) {
                    ++degree[a];
                    ++degree[b];
                }

                for (int g1_at = free_genus ? 0 : -1;
                     g1_at < (free_genus ? nv : 0); ++g1_at) {
                    for (auto& v : g.vertices)
                        v.genus = 0;
                    if (g1_at >= 0)
                        g.vertices[g1_at].genus = 1;

                    std::vector<int> home(4, 0);
                    while (true) {
                        for (auto& v : g.vertices)
                            v.marks.clear();
                        for (int l = 0; l < 4; ++l)
                            g.vertices[home[l]].marks.push_back(l + 1);

                        bool stable = true;
                        for (int v = 0; v < nv; ++v) {
                            const int special =
                                degree[v] +
                                static_cast<int>(g.vertices[v].marks.size());
                            const int need = g.vertices[v].genus == 0 ? 3 : 1;
                            stable = stable && special >= need;
                        }
                        if (stable)
                            all.emplace(final_form(g, true), g);

                        int carry = 0;
                        while (carry < 4 && ++home[carry] == nv)
                            home[carry++] = 0;
                        if (carry == 4)
                            break;
                    }
                }
            }
    }

    std::vector<OrbitRow>  rows;
    std::set<std::string>  claimed;
    for (const auto& [form, rep] : all) {
        if (claimed.count(form))
            continue;
        const auto orbit = orbit_forms(rep);
        for (const auto& member : orbit) {
            if (!all.count(member))
                throw std::logic_error(
                    "codim2_orbit_table: orbit leaves the enumeration");
            claimed.insert(member);
        }
        rows.push_back({final_form(rep, false),
                        static_cast<long>(orbit.size()),
                        static_cast<long>(24 / orbit.size()),
                        final_aut(rep)});
    }
    std::sort(rows.begin(), rows.end(),
              [](const OrbitRow& a, const OrbitRow& b) { return a.shape < b.shape; });
    return rows;
}

namespace detail {

enum class FlagFateKind { Fuse, BecomeMark, Forget };
struct FlagFate {
    FlagFateKind kind;
    Point        partner;  ///< Fuse: the flag point matched across the graph
    int          label = 0;  ///< BecomeMark
};

/// Follow a flag's edge across the locus graph, through valence-2 points.
inline FlagFate resolve_flag(const FixedLocusGraph& locus, int edge, int side)
{
    std::set<std::pair<int, int>> visited;
    int e = edge, s = side;
    while (true) {
        if (!visited.insert({e, s}).second)
            throw std::logic_error("stabilize: flag chain revisits an edge");
        const int w = locus.vertex_at(e, 1 - s);
        if (locus.is_contracted(w))
            return {FlagFateKind::Fuse, Point::flag(e, 1 - s), 0};
        const int val = locus.valence(w);
        if (val == 1 && locus.vertices[w].marks.size() == 1)
            return {FlagFateKind::BecomeMark, Point{}, locus.vertices[w].marks[0]};
        if (val == 1)
            return {FlagFateKind::Forget, Point{}, 0};
        if (val == 2) {
            const auto inc  = locus.incident_edges(w);
            const int  next = inc[0] == e ? inc[1] : inc[0];
            e               = next;
            s               = locus.edges[next].a == w ? 0 : 1;
            continue;
        }
        throw std::logic_error("stabilize: unsupported point configuration");
    }
}

} // namespace detail

/** @brief Push an undecorated stratum over a fixed locus down to the target
 *         space.  Returns the weighted dual graph, or nothing when the term
 *         dies (a free end is forgotten on a vertex with moduli). */
inline std::optional<std::pair<Rational, FinalGraph>>
stabilize(const DecoratedStratum& s, const FixedLocusGraph* locus = nullptr)
{
    if (s.decorated())
        throw std::logic_error("stabilize: stratum still carries decorations");

    DecoratedStratum t = s;

    // Resolve every flag point against the locus graph.
    std::map<Point, detail::FlagFate> fates;
    for (const auto& v : t.vertices)
        for (const auto& p : v.points)
            if (p.kind == Point::Kind::Flag) {
                if (!locus)
                    throw std::logic_error(
                        "stabilize: flag points need a locus graph");
                fates.emplace(p, detail::resolve_flag(*locus, p.a, p.b));
            }

    std::set<Point> forgotten;
    std::set<Point> fused;
    for (const auto& [p, fate] : fates) {
        switch (fate.kind) {
        case detail::FlagFateKind::Fuse: {
            if (fused.count(p))
                break;
            const auto partner_it = fates.find(fate.partner);
            if (partner_it == fates.end() ||
                partner_it->second.kind != detail::FlagFateKind::Fuse ||
                !(partner_it->second.partner == p))
                throw std::logic_error("stabilize: asymmetric flag matching");
            t.edges.emplace_back(p, fate.partner);
            fused.insert(p);
            fused.insert(fate.partner);
            break;
        }
        case detail::FlagFateKind::BecomeMark: {
            auto& vert = t.vertices[t.vertex_of(p)];
            vert.points.erase(p);
            vert.points.insert(Point::mark(fate.label));
            break;
        }
        case detail::FlagFateKind::Forget:
            forgotten.insert(p);
            break;
        }
    }

    // Forget free points, contracting three-pointed rational vertices.
    const auto edge_with = [&t](const Point& p) {
        for (size_t i = 0; i < t.edges.size(); ++i)
            if (t.edges[i].first == p || t.edges[i].second == p)
                return static_cast<int>(i) + 1;
        return 0;
    };
    while (!forgotten.empty()) {
        const Point p  = *forgotten.begin();
        const int   vi = t.vertex_of(p);
        auto&       v  = t.vertices[vi];
        if (v.dim() >= 1)
            return std::nullopt;  // fiber direction: the pushforward vanishes
        if (v.genus != 0 || v.points.size() != 3)
            throw std::logic_error("stabilize: cannot forget on this vertex");
        forgotten.erase(p);
        v.points.erase(p);
        const Point x = *v.points.begin();
        const Point y = *std::next(v.points.begin());

        const auto splice = [&](const Point& from) -> Point {
            const int ei = edge_with(from) - 1;
            if (ei < 0)
                throw std::logic_error("stabilize: expected an edge endpoint");
            const auto [a, b] = t.edges[ei];
            t.edges.erase(t.edges.begin() + ei);
            return a == from ? b : a;
        };
        const bool xf = forgotten.count(x) > 0, yf = forgotten.count(y) > 0;
        const bool xe = edge_with(x) > 0, ye = edge_with(y) > 0;
        if (xf && yf)
            throw std::logic_error("stabilize: component contracts to nothing");
        if (xe && ye) {
            const int exi = edge_with(x) - 1, eyi = edge_with(y) - 1;
            if (exi == eyi)
                throw std::logic_error("stabilize: cannot contract a loop");
            const Point mx = splice(x);
            const Point my = splice(y);
            t.edges.emplace_back(mx, my);
        } else if ((xe && yf) || (ye && xf)) {
            const Point far = splice(xe ? x : y);
            forgotten.erase(xe ? y : x);
            forgotten.insert(far);
        } else if (xe || ye) {
            const Point far  = splice(xe ? x : y);
            const Point kept = xe ? y : x;
            if (kept.kind != Point::Kind::Mark)
                throw std::logic_error("stabilize: unexpected surviving point");
            t.vertices[t.vertex_of(far)].points.insert(kept);
            t.vertices[t.vertex_of(far)].points.erase(far);
            // the far point is consumed by the arriving mark
        } else {
            throw std::logic_error("stabilize: unsupported contraction");
        }
        t.vertices.erase(t.vertices.begin() + vi);
    }

    // Assemble the dual graph.
    FinalGraph out;
    std::map<Point, int> owner;
    for (size_t v = 0; v < t.vertices.size(); ++v) {
        FinalVertex fv;
        fv.genus = t.vertices[v].genus;
        for (const auto& p : t.vertices[v].points) {
            if (p.kind == Point::Kind::Mark)
                fv.marks.push_back(p.a);
            else
                owner[p] = static_cast<int>(v);
        }
        std::sort(fv.marks.begin(), fv.marks.end());
        out.vertices.push_back(std::move(fv));
    }
    std::map<Point, int> uses;
    for (const auto& [a, b] : t.edges) {
        const auto ia = owner.find(a), ib = owner.find(b);
        if (ia == owner.end() || ib == owner.end())
            throw std::logic_error("stabilize: edge endpoint vanished");
        ++uses[a];
        ++uses[b];
        out.edges.emplace_back(std::min(ia->second, ib->second),
                               std::max(ia->second, ib->second));
    }
    for (const auto& [p, v] : owner)
        if (uses[p] != 1)
            throw std::logic_error("stabilize: dangling node point");

    // Connectivity of the result.
    if (!out.vertices.empty()) {
        std::vector<int> parent(out.vertices.size());
        std::iota(parent.begin(), parent.end(), 0);
        const auto find = [&](int x) {
            while (parent[x] != x)
                x = parent[x] = parent[parent[x]];
            return x;
        };
        for (const auto& [a, b] : out.edges)
            parent[find(a)] = find(b);
        for (size_t v = 1; v < out.vertices.size(); ++v)
            if (find(static_cast<int>(v)) != find(0))
                throw std::logic_error("stabilize: image graph disconnected");
    }
    return std::make_pair(t.coeff, std::move(out));
}

/** @brief Image of a fixed locus in the target space with its covering
 *         degree: 0 when the stabilization map contracts moduli (a free end
 *         sits on a vertex with moduli), otherwise the number of
 *         interchangeable chains mapping onto the same image edges. */
struct LocusImage {
    FinalGraph image;
    Integer    degree = 0;
};

inline LocusImage pushforward_locus(const FixedLocusGraph& g)
{
    DecoratedStratum s;
    s.coeff = 1;
    for (size_t v = 0; v < g.vertices.size(); ++v) {
        if (!g.is_contracted(static_cast<int>(v)))
            continue;
        DecoratedVertex vert;
        vert.genus = g.vertices[v].genus;
        for (int m : g.vertices[v].marks)
            vert.points.insert(Point::mark(m));
        for (int e : g.incident_edges(static_cast<int>(v)))
            vert.points.insert(
                Point::flag(e, g.vertices[v].side));
        s.vertices.push_back(std::move(vert));
    }

    LocusImage out;
    // Fibered directions kill the pushforward: detect them via stabilize.
    bool fibered = false;
    auto pushed  = stabilize(s, &g);
    if (!pushed) {
        fibered = true;
        // Rebuild the skeleton ignoring moduli: drop each forgotten free end
        // by brute force — remove the flag whose chain ends free, then let
        // stabilize contract what remains.
        DecoratedStratum trimmed = s;
        for (auto& vert : trimmed.vertices) {
            for (auto it = vert.points.begin(); it != vert.points.end();) {
                if (it->kind == Point::Kind::Flag &&
                    detail::resolve_flag(g, it->a, it->b).kind ==
                        detail::FlagFateKind::Forget)
                    it = vert.points.erase(it);
                else
                    ++it;
            }
        }
        pushed = stabilize(trimmed, &g);
        if (!pushed)
            throw std::logic_error("pushforward_locus: skeleton still fibered");
    }
    out.image = pushed->second;

    if (fibered) {
        out.degree = 0;
        return out;
    }
    // Interchangeable chains: parallel image edges coming from distinct
    // chains multiply the degree by their count factorial; a chain closing
    // onto a single vertex contributes its half-edge swap.
    std::map<std::pair<int, int>, int> parallel;
    int                                loop_chains = 0;
    std::map<Point, int>               owner;
    for (size_t v = 0; v < s.vertices.size(); ++v)
        for (const auto& p : s.vertices[v].points)
            if (p.kind == Point::Kind::Flag)
                owner[p] = static_cast<int>(v);
    std::set<Point> seen;
    for (const auto& [p, vi] : owner) {
        if (seen.count(p))
            continue;
        const auto fate = detail::resolve_flag(g, p.a, p.b);
        if (fate.kind != detail::FlagFateKind::Fuse)
            continue;
        seen.insert(p);
        seen.insert(fate.partner);
        const int a = owner.at(p), b = owner.at(fate.partner);
        if (a == b)
            ++loop_chains;
        else
            ++parallel[{std::min(a, b), std::max(a, b)}];
    }
    out.degree = 1;
    for (const auto& [key, count] : parallel)
        out.degree *= factorial(count);
    for (int i = 0; i < loop_chains; ++i)
        out.degree *= 2;
    return out;
}

/** @brief Decorated strata of a fixed locus realizing a tautological class:
 *         one stratum per monomial, psi exponents placed at the matching
 *         flags and lambda on the genus-one vertex. */
inline std::vector<DecoratedStratum> initial_strata(const FixedLocusGraph& g,
                                                    const TautElement&     cls)
{
    const auto space = parametrizing_space(g);
    if (cls.is_zero())
        return {};
    if (cls.context() && !(*cls.context() == *space.context))
        throw std::invalid_argument(
            "initial_strata: class does not live on this locus");

    DecoratedStratum base;
    base.coeff = 1;
    std::vector<int> vertex_slot(g.vertices.size(), -1);
    for (size_t f = 0; f < space.factor_vertex.size(); ++f) {
        const int       v = space.factor_vertex[f];
        DecoratedVertex vert;
        vert.genus = g.vertices[v].genus;
        for (int m : g.vertices[v].marks)
            vert.points.insert(Point::mark(m));
        for (int e : g.incident_edges(v))
            vert.points.insert(Point::flag(e, g.vertices[v].side));
        vertex_slot[v] = static_cast<int>(base.vertices.size());
        base.vertices.push_back(std::move(vert));
    }

    std::vector<DecoratedStratum> out;
    for (const auto& [mono, q] : cls.monomials()) {
        DecoratedStratum s = base;
        s.coeff            = q;
        for (size_t vi = 0; vi + 1 < mono.size(); ++vi) {
            if (mono[vi] == 0)
                continue;
            const auto& flag = space.flags[vi];
            const int   slot = vertex_slot[flag.vertex];
            s.vertices[slot].psi[Point::flag(
                flag.edge, g.vertices[flag.vertex].side)] += mono[vi];
        }
        if (!mono.empty() && mono.back() > 0) {
            if (space.context->lambda_factor < 0)
                throw std::logic_error(
                    "initial_strata: lambda without a genus-one factor");
            s.vertices[space.context->lambda_factor].lambda = mono.back();
        }
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace tautrel
