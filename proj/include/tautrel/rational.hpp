#pragma once

/** @file rational.hpp
 *  @brief Exact rational scalars used throughout the library.
 *
 *  Every quantity in the relation pipeline is an exact rational number;
 *  no floating point appears anywhere.  The arithmetic itself comes from
 *  boost::multiprecision::cpp_rational (arbitrary precision, header only);
 *  this file adds the small amount of glue the rest of the library needs:
 *  parsing and printing in canonical "p/q" form, and a couple of exact
 *  combinatorial helpers.
 */

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace tautrel {

using Rational = boost::multiprecision::cpp_rational;
using Integer  = boost::multiprecision::cpp_int;

/** @brief Render a rational in canonical form: "p" if integral, else "p/q"
 *         with q > 0 and gcd(p,q) = 1 (cpp_rational keeps it reduced). */
inline std::string to_fraction_string(const Rational& r)
{
    if (denominator(r) == 1)
        return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

/** @brief Parse "p" or "p/q" (optional leading '-', no whitespace).
 *  @throws std::invalid_argument on malformed input or zero denominator. */
inline Rational rational_from_string(std::string_view text)
{
    if (text.empty())
        throw std::invalid_argument("rational_from_string: empty input");
    const auto slash = text.find('/');
    try {
        if (slash == std::string_view::npos)
            return Rational(Integer(std::string(text)));
        Integer p{std::string(text.substr(0, slash))};
        Integer q{std::string(text.substr(slash + 1))};
        if (q == 0)
            throw std::invalid_argument("zero denominator");
        return Rational(p, q);
    } catch (const std::runtime_error& e) {
        throw std::invalid_argument("rational_from_string: cannot parse '" +
                                    std::string(text) + "': " + e.what());
    }
}

/** @brief Exact n! for small n. */
inline Integer factorial(int n)
{
    if (n < 0)
        throw std::domain_error("factorial: negative argument");
    Integer out = 1;
    for (int i = 2; i <= n; ++i)
        out *= i;
    return out;
}

/** @brief Exact binomial coefficient C(n,k); zero outside 0 <= k <= n. */
inline Integer binomial(int n, int k)
{
    if (k < 0 || k > n)
        return 0;
    k = std::min(k, n - k);
    Integer out = 1;
    for (int i = 1; i <= k; ++i) {
        out *= (n - k + i);
        out /= i;
    }
    return out;
}

/** @brief Integer power of a rational with non-negative exponent. */
inline Rational rational_pow(const Rational& base, int exp)
{
    if (exp < 0)
        throw std::domain_error("rational_pow: negative exponent");
    Rational out = 1;
    for (int i = 0; i < exp; ++i)
        out *= base;
    return out;
}

} // namespace tautrel
