#pragma once

/** @file hbar_series.hpp
 *  @brief Exact Laurent series in the equivariant parameter hbar.
 *
 *  A fixed-point contribution is a ratio of polynomials in hbar whose
 *  coefficients live in a ring of tautological classes; the quantity we
 *  ultimately extract is a single Laurent coefficient of that ratio.  This
 *  file provides the series arithmetic: sparse storage keyed by the hbar
 *  exponent, together with an explicit *trust window* [low, high].
 *
 *  Window semantics: the stored terms are exactly correct for every
 *  exponent inside the window; outside the window the series is unknown
 *  (an inversion truncated to finitely many descending powers, say).  The
 *  sentinels kWindowAllLow / kWindowAllHigh mean "no unknown tail on that
 *  side".  Multiplication and addition propagate windows conservatively,
 *  and reading a coefficient outside the window is an error rather than a
 *  silent zero.
 *
 *  Inversion pivots on the highest-power term, whose coefficient must be a
 *  unit; the geometric series runs downward and stops either when it
 *  terminates exactly (nilpotent lower part, the generic situation for
 *  positive-degree tautological classes) or when it falls below the
 *  requested window.
 */

#include "tautrel/rational.hpp"

#include <limits>
#include <map>
#include <stdexcept>

namespace tautrel {

/** @brief Coefficient-ring operations used by the series layer.
 *  The default works for any field-like scalar (e.g. Rational); rings with
 *  nilpotents (tautological classes) specialize this template. */
template <class Coeff>
struct RingTraits {
    static Coeff zero() { return Coeff(0); }
    static Coeff one() { return Coeff(1); }
    static bool  is_zero(const Coeff& c) { return c == Coeff(0); }
    static bool  is_unit(const Coeff& c) { return c != Coeff(0); }
    static Coeff invert_unit(const Coeff& c) { return Coeff(1) / c; }
};

/// Window sentinels: "no unknown tail below / above".
inline constexpr int kWindowAllLow  = std::numeric_limits<int>::min() / 4;
inline constexpr int kWindowAllHigh = std::numeric_limits<int>::max() / 4;

/** @brief Requested trust window for an inversion. */
struct Window {
    int low  = kWindowAllLow;
    int high = kWindowAllHigh;
};

/** @brief Sparse exact Laurent series in hbar with a trust window. */
template <class Coeff>
struct HbarSeries {
    /// exponent -> nonzero coefficient, only exponents inside the window
    std::map<int, Coeff> terms;
    int low  = kWindowAllLow;   ///< smallest trusted exponent
    int high = kWindowAllHigh;  ///< largest trusted exponent

    HbarSeries() = default;

    /** @brief The zero series, fully trusted. */
    static HbarSeries zero() { return HbarSeries(); }

    /** @brief A single term c * hbar^power (fully trusted polynomial). */
    static HbarSeries monomial(int power, Coeff c)
    {
        HbarSeries s;
        if (!RingTraits<Coeff>::is_zero(c))
            s.terms.emplace(power, std::move(c));
        return s;
    }

    /** @brief The constant series 1. */
    static HbarSeries one() { return monomial(0, RingTraits<Coeff>::one()); }

    bool has_lower_tail() const { return low != kWindowAllLow; }
    bool has_upper_tail() const { return high != kWindowAllHigh; }

    /** @brief Drop stored zeros and any term that drifted outside the window. */
    void normalize()
    {
        for (auto it = terms.begin(); it != terms.end();) {
            if (it->first < low || it->first > high ||
                RingTraits<Coeff>::is_zero(it->second))
                it = terms.erase(it);
            else
                ++it;
        }
    }
};

/** @brief Trusted coefficient of hbar^k.
 *  @throws std::out_of_range when k lies outside the trust window. */
template <class Coeff>
const Coeff& coefficient(const HbarSeries<Coeff>& a, int k)
{
    static const Coeff zero = RingTraits<Coeff>::zero();
    if (k < a.low || k > a.high)
        throw std::out_of_range(
            "coefficient: exponent " + std::to_string(k) +
            " lies outside the trust window [" + std::to_string(a.low) + ", " +
            std::to_string(a.high) + "]");
    const auto it = a.terms.find(k);
    return it == a.terms.end() ? zero : it->second;
}

namespace detail {

/// Saturating window addition (sentinel-aware).
inline int window_add(int a, int b)
{
    if (a <= kWindowAllLow || b <= kWindowAllLow)
        return kWindowAllLow;
    if (a >= kWindowAllHigh || b >= kWindowAllHigh)
        return kWindowAllHigh;
    return a + b;
}

} // namespace detail

template <class Coeff>
HbarSeries<Coeff> series_add(const HbarSeries<Coeff>& a, const HbarSeries<Coeff>& b)
{
    HbarSeries<Coeff> c;
    c.low  = std::max(a.low, b.low);
    c.high = std::min(a.high, b.high);
    c.terms = a.terms;
    for (const auto& [p, v] : b.terms) {
        auto [it, inserted] = c.terms.emplace(p, v);
        if (!inserted)
            it->second = it->second + v;
    }
    c.normalize();
    return c;
}

template <class Coeff>
HbarSeries<Coeff> series_negate(HbarSeries<Coeff> a)
{
    for (auto& [p, v] : a.terms)
        v = -v;
    return a;
}

template <class Coeff>
HbarSeries<Coeff> series_sub(const HbarSeries<Coeff>& a, const HbarSeries<Coeff>& b)
{
    return series_add(a, series_negate(b));
}

/** @brief Product with conservative window propagation.
 *
 *  Unknown tails multiply into the known part: a lower tail of one factor
 *  shifted by the top of the other factor bounds where the product stops
 *  being trustworthy (and symmetrically above).  Opposite-side tails would
 *  pollute every exponent, so that combination is rejected outright.
 */
template <class Coeff>
HbarSeries<Coeff> series_mul(const HbarSeries<Coeff>& a, const HbarSeries<Coeff>& b)
{
    if (a.terms.empty() && !a.has_lower_tail() && !a.has_upper_tail())
        return HbarSeries<Coeff>::zero();
    if (b.terms.empty() && !b.has_lower_tail() && !b.has_upper_tail())
        return HbarSeries<Coeff>::zero();
    if ((a.has_lower_tail() && b.has_upper_tail()) ||
        (a.has_upper_tail() && b.has_lower_tail()))
        throw std::logic_error(
            "series_mul: factors carry unknown tails on opposite sides; "
            "no coefficient of the product would be trustworthy");

    HbarSeries<Coeff> c;
    int clow  = kWindowAllLow;
    int chigh = kWindowAllHigh;
    // Lower trust bound: known(a) * lower-tail(b), known(b) * lower-tail(a),
    // and lower-tail * lower-tail.
    if (b.has_lower_tail() && !a.terms.empty())
        clow = std::max(clow, detail::window_add(a.terms.rbegin()->first, b.low));
    if (a.has_lower_tail() && !b.terms.empty())
        clow = std::max(clow, detail::window_add(b.terms.rbegin()->first, a.low));
    if (a.has_lower_tail() && b.has_lower_tail())
        clow = std::max(clow, detail::window_add(a.low, b.low) - 1);
    // Upper trust bound, mirror image.
    if (b.has_upper_tail() && !a.terms.empty())
        chigh = std::min(chigh, detail::window_add(a.terms.begin()->first, b.high));
    if (a.has_upper_tail() && !b.terms.empty())
        chigh = std::min(chigh, detail::window_add(b.terms.begin()->first, a.high));
    if (a.has_upper_tail() && b.has_upper_tail())
        chigh = std::min(chigh, detail::window_add(a.high, b.high) + 1);

    c.low  = clow;
    c.high = chigh;
    for (const auto& [i, ci] : a.terms)
        for (const auto& [j, cj] : b.terms) {
            const int k = detail::window_add(i, j);
            if (k < clow || k > chigh)
                continue;
            Coeff prod = ci * cj;
            if (RingTraits<Coeff>::is_zero(prod))
                continue;
            auto [it, inserted] = c.terms.emplace(k, prod);
            if (!inserted)
                it->second = it->second + prod;
        }
    c.normalize();
    return c;
}

template <class Coeff>
HbarSeries<Coeff> series_scale(HbarSeries<Coeff> a, const Coeff& s)
{
    if (RingTraits<Coeff>::is_zero(s)) {
        a.terms.clear();
        return a;
    }
    for (auto& [p, v] : a.terms)
        v = v * s;
    a.normalize();
    return a;
}

/** @brief Exact inverse of a fully trusted series, restricted to a window.
 *
 *  The input must have no unknown tails and a unit top coefficient.  The
 *  inverse is the descending geometric series around the top term; when the
 *  lower part is nilpotent the expansion terminates and the result is exact
 *  (infinite window), otherwise terms are produced down to window.low and
 *  the result's window records exactly what was computed.
 *
 *  @throws std::invalid_argument for the zero series, a non-unit top
 *          coefficient, untrusted input, or an inversion that does not
 *          terminate and was given no finite window.
 */
template <class Coeff>
HbarSeries<Coeff> series_invert(const HbarSeries<Coeff>& a, Window window = {})
{
    using Traits = RingTraits<Coeff>;
    if (a.has_lower_tail() || a.has_upper_tail())
        throw std::invalid_argument(
            "series_invert: input carries unknown tails; invert exact series only");
    if (a.terms.empty())
        throw std::invalid_argument("series_invert: the zero series has no inverse");

    const int   top_power = a.terms.rbegin()->first;
    const Coeff top_coeff = a.terms.rbegin()->second;
    if (!Traits::is_unit(top_coeff))
        throw std::invalid_argument(
            "series_invert: top coefficient is not a unit of the coefficient ring");
    const Coeff top_inv = Traits::invert_unit(top_coeff);

    // a = c * hbar^H * (1 - u) with u supported in negative shifts only.
    HbarSeries<Coeff> u;
    for (const auto& [p, v] : a.terms)
        if (p != top_power)
            u.terms.emplace(p - top_power, -(v * top_inv));

    HbarSeries<Coeff> geometric = HbarSeries<Coeff>::one();
    HbarSeries<Coeff> power     = HbarSeries<Coeff>::one();
    const int  shifted_low = detail::window_add(window.low, top_power);
    bool       exact       = u.terms.empty();
    const long iteration_cap =
        window.low <= kWindowAllLow ? 512L
                                    : 8L + static_cast<long>(top_power) - window.low;
    for (long j = 1; !exact; ++j) {
        power = series_mul(power, u);
        if (power.terms.empty()) {
            exact = true;
            break;
        }
        if (power.terms.rbegin()->first < shifted_low)
            break;  // everything below the requested window from here on
        geometric = series_add(geometric, power);
        if (j > iteration_cap)
            throw std::invalid_argument(
                "series_invert: expansion does not terminate; "
                "pass a finite window.low");
    }

    HbarSeries<Coeff> result;
    for (const auto& [p, v] : geometric.terms)
        result.terms.emplace(p - top_power, v * top_inv);
    result.low  = exact ? kWindowAllLow : window.low;
    result.high = window.high;
    result.normalize();
    return result;
}

} // namespace tautrel
