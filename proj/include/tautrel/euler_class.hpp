#pragma once

/** @file euler_class.hpp
 *  @brief Normal-bundle Euler classes of fixed loci and contribution classes.
 *
 *  The torus acts on the target line with tangent weight +hbar at the origin
 *  and -hbar at infinity.  The Euler class of the virtual normal bundle of a
 *  fixed locus factors into hbar-polynomials with tautological-class
 *  coefficients:
 *
 *  numerator
 *    - one smoothing factor (t_side/d - psi) per flag of a contracted vertex,
 *    - one node-smoothing scalar (1/d1 + 1/d2) per valence-2 point,
 *    - one cover-deformation factor (-1)^d (d!)^2 hbar^{2d} / d^{2d} per edge;
 *
 *  denominator
 *    - one combined factor Lambda_g(t_side) * t_side^{valence-1} per
 *      contracted vertex, where Lambda_1(t) = t - lambda and Lambda_0 = 1
 *      (omitted when the whole factor is 1),
 *    - one weight t_side/d per unmarked valence-1 point (marked ones
 *      contribute 1).
 *
 *  The contribution class of a labelled locus at depth k is the hbar^0
 *  coefficient of (restricted insertion) * hbar^k / e(normal), computed
 *  exactly with windowed Laurent series.
 */

#include "tautrel/hbar_series.hpp"
#include "tautrel/locus_graph.hpp"

namespace tautrel {

/** @brief Deliberate perturbations used to probe that the final relation
 *         genuinely depends on every ingredient of the weight calculus. */
struct PerturbationOptions {
    bool flip_deg2_edge_sign = false;  ///< negate the degree-2 cover factor
    bool flip_tangent_sign   = false;  ///< use +hbar instead of -hbar at infinity
    Rational insertion_scale = 1;      ///< rescale each evaluation class
};

struct EulerFactor {
    HbarSeries<TautElement> value;
    std::string             rendered;
};

struct EulerFactorization {
    ParametrizingSpace       space;
    std::vector<EulerFactor> numerator;
    std::vector<EulerFactor> denominator;
};

namespace detail {

inline std::string monomial_names(const Monomial& m)
{
    std::string out;
    for (size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0)
            continue;
        if (!out.empty())
            out += "*";
        out += (i + 1 == m.size()) ? "L" : "v" + std::to_string(i);
        if (m[i] > 1)
            out += "^" + std::to_string(m[i]);
    }
    return out;
}

inline std::string render_term(const TautElement& coeff, int exp)
{
    const std::string hb = exp == 0   ? ""
                           : exp == 1 ? "hbar"
                                      : "hbar^" + std::to_string(exp);
    std::string cs;
    if (coeff.is_scalar()) {
        cs = to_fraction_string(coeff.scalar_part());
    } else if (coeff.monomials().size() == 1) {
        const auto& [mono, q] = *coeff.monomials().begin();
        const std::string names = monomial_names(mono);
        if (q == 1)
            cs = names;
        else if (q == -1)
            cs = "-" + names;
        else
            cs = to_fraction_string(q) + "*" + names;
    } else {
        cs = "(" + coeff.to_string() + ")";
    }
    if (hb.empty())
        return cs;
    if (cs == "1")
        return hb;
    if (cs == "-1")
        return "-" + hb;
    return cs + "*" + hb;
}

/// Human-readable polynomial form, highest hbar power first.
inline std::string render_series(const HbarSeries<TautElement>& s)
{
    std::string out;
    for (auto it = s.terms.rbegin(); it != s.terms.rend(); ++it) {
        std::string piece = render_term(it->second, it->first);
        if (out.empty())
            out = std::move(piece);
        else if (!piece.empty() && piece[0] == '-')
            out += " - " + piece.substr(1);
        else
            out += " + " + piece;
    }
    if (out.empty())
        out = "0";
    return "(" + out + ")";
}

} // namespace detail

/** @brief Factorized Euler class of the virtual normal bundle of a locus. */
inline EulerFactorization euler_normal(const FixedLocusGraph&     g,
                                       const PerturbationOptions& opts = {})
{
    EulerFactorization out;
    out.space      = parametrizing_space(g);
    const auto ctx = out.space.context;

    const auto weight_sign = [&](int side) {
        return side == 0 ? 1 : (opts.flip_tangent_sign ? 1 : -1);
    };
    const auto push = [](std::vector<EulerFactor>&  list,
                         HbarSeries<TautElement>&& value) {
        std::string rendered = detail::render_series(value);
        list.push_back({std::move(value), std::move(rendered)});
    };

    // Smoothing directions at the flags, grouped by moduli factor.
    for (size_t f = 0; f < ctx->factors.size(); ++f) {
        for (size_t vi = 0; vi < ctx->vars.size(); ++vi) {
            if (ctx->vars[vi].factor != static_cast<int>(f))
                continue;
            const auto& flag = out.space.flags[vi];
            const int   side = g.vertices[flag.vertex].side;
            const int   deg  = g.edges[flag.edge].degree;
            auto        s    = series_add(
                HbarSeries<TautElement>::monomial(
                    1, TautElement::scalar(Rational(weight_sign(side), deg))),
                HbarSeries<TautElement>::monomial(
                    0, -TautElement::psi(ctx, static_cast<int>(vi))));
            push(out.numerator, std::move(s));
        }
    }
    // Node smoothings at valence-2 points.
    for (size_t v = 0; v < g.vertices.size(); ++v) {
        if (g.is_contracted(static_cast<int>(v)) ||
            g.valence(static_cast<int>(v)) != 2)
            continue;
        const auto     inc = g.incident_edges(static_cast<int>(v));
        const Rational c   = Rational(1, g.edges[inc[0]].degree) +
                           Rational(1, g.edges[inc[1]].degree);
        push(out.numerator,
             HbarSeries<TautElement>::monomial(0, TautElement::scalar(c)));
    }
    // Cover deformations, one per edge.
    for (const auto& e : g.edges) {
        Rational c = rational_pow(Rational(-1), e.degree) *
                     rational_pow(Rational(factorial(e.degree)), 2) /
                     rational_pow(Rational(e.degree), 2 * e.degree);
        if (opts.flip_deg2_edge_sign && e.degree == 2)
            c = -c;
        push(out.numerator, HbarSeries<TautElement>::monomial(
                                2 * e.degree, TautElement::scalar(c)));
    }

    // Combined vertex factor per contracted vertex.
    for (size_t f = 0; f < ctx->factors.size(); ++f) {
        const int v    = out.space.factor_vertex[f];
        const int side = g.vertices[v].side;
        const int val  = g.valence(v);
        const int sgn  = weight_sign(side);
        if (g.vertices[v].genus == 0 && val == 1)
            continue;  // the factor is exactly 1
        auto s = HbarSeries<TautElement>::monomial(
            val - 1, TautElement::scalar(rational_pow(Rational(sgn), val - 1)));
        if (g.vertices[v].genus == 1) {
            const auto lin = series_add(
                HbarSeries<TautElement>::monomial(
                    1, TautElement::scalar(Rational(sgn))),
                HbarSeries<TautElement>::monomial(0, -TautElement::lambda(ctx)));
            s = series_mul(s, lin);
        }
        push(out.denominator, std::move(s));
    }
    // Weights of unmarked valence-1 points.
    for (size_t v = 0; v < g.vertices.size(); ++v) {
        if (g.is_contracted(static_cast<int>(v)))
            continue;
        if (g.valence(static_cast<int>(v)) != 1 ||
            g.vertices[v].mark_count != 0)
            continue;
        const auto inc = g.incident_edges(static_cast<int>(v));
        const int  deg = g.edges[inc[0]].degree;
        push(out.denominator,
             HbarSeries<TautElement>::monomial(
                 1, TautElement::scalar(
                        Rational(weight_sign(g.vertices[v].side), deg))));
    }
    return out;
}

/** @brief Restriction of the point-class insertions to a labelled locus.
 *
 *  pattern[i] is the target fixed point (0 or 1) whose class is inserted at
 *  mark i+1.  A mark sitting over the wrong fixed point kills the whole
 *  restriction; otherwise each mark contributes its tangent weight, giving
 *  (+hbar)^{#side 0} * (-hbar)^{#side infinity}.
 */
inline HbarSeries<TautElement>
restrict_insertion(const FixedLocusGraph& g, const std::vector<int>& pattern,
                   const Rational& scale = 1)
{
    if (static_cast<int>(pattern.size()) != g.total_marks)
        throw std::invalid_argument(
            "restrict_insertion: pattern length must equal the mark count");
    int placed = 0;
    int sign   = 1;
    for (const auto& v : g.vertices) {
        for (int m : v.marks) {
            ++placed;
            if (v.side != pattern[m - 1])
                return HbarSeries<TautElement>::zero();
            if (v.side == 1)
                sign = -sign;
        }
    }
    if (placed != g.total_marks)
        throw std::logic_error(
            "restrict_insertion: graph does not carry all mark labels");
    return HbarSeries<TautElement>::monomial(
        g.total_marks,
        TautElement::scalar(Rational(sign) *
                            rational_pow(scale, g.total_marks)));
}

/** @brief The hbar^0 coefficient of insertion * hbar^k / e(normal) on a
 *         labelled locus: the class this locus feeds into the relation. */
inline TautElement contribution_class(const FixedLocusGraph&     g,
                                      const std::vector<int>&    pattern,
                                      int                        k,
                                      const PerturbationOptions& opts = {})
{
    if (k < 0)
        throw std::invalid_argument("contribution_class: negative depth");
    const auto insertion = restrict_insertion(g, pattern, opts.insertion_scale);
    if (insertion.terms.empty())
        return TautElement::zero();

    const auto fact = euler_normal(g, opts);

    auto numerator = series_mul(
        insertion, HbarSeries<TautElement>::monomial(k, TautElement::one()));
    for (const auto& f : fact.denominator)
        numerator = series_mul(numerator, f.value);

    auto denominator = HbarSeries<TautElement>::monomial(0, TautElement::one());
    for (const auto& f : fact.numerator)
        denominator = series_mul(denominator, f.value);

    const int  top     = numerator.terms.rbegin()->first;
    const auto inverse = series_invert(denominator, Window{-top - 2, kWindowAllHigh});
    return coefficient(series_mul(numerator, inverse), 0);
}

} // namespace tautrel
