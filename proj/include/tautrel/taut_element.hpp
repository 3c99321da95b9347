#pragma once

/** @file taut_element.hpp
 *  @brief Truncated polynomial ring of tautological classes on a fixed-locus
 *         parametrizing space.
 *
 *  A fixed locus is parametrized by a product of moduli factors; the classes
 *  that appear in its normal-bundle Euler class are cotangent classes at the
 *  flags (one variable per flag sitting on a contracted factor) and the
 *  genus-one Hodge class.  TautElement stores an exact-rational polynomial
 *  in those variables, truncated by everything that vanishes for dimension
 *  reasons:
 *
 *    - the Hodge class squares to zero,
 *    - a monomial of total degree above the parametrizing-space dimension
 *      vanishes,
 *    - a monomial whose degree on a single factor (its flags' exponents,
 *      plus the Hodge exponent if the factor is the genus-one one) exceeds
 *      that factor's dimension vanishes.
 *
 *  The truncation makes every element with vanishing constant term
 *  nilpotent, which is what lets the series layer invert Euler classes
 *  exactly.  Monomials are keyed by their exponent vector (flag variables
 *  in order, Hodge exponent last); the map's ascending lexicographic order
 *  is also the canonical rendering order.
 */

#include "tautrel/hbar_series.hpp"
#include "tautrel/rational.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace tautrel {

/** @brief One moduli factor M(genus, points) of a parametrizing space. */
struct FactorSpace {
    int genus  = 0;  ///< 0 or 1
    int points = 0;  ///< special points: marks plus flags

    int dim() const { return 3 * genus - 3 + points; }

    std::string name() const
    {
        return "M(" + std::to_string(genus) + "," + std::to_string(points) + ")";
    }

    bool operator==(const FactorSpace&) const = default;
};

/** @brief Shared immutable description of a parametrizing space's variables. */
struct VarContext {
    /** A cotangent-class variable: which factor it lives on, plus the
     *  role descriptor used for canonical ordering and printing. */
    struct PsiVar {
        std::string descriptor;
        int         factor = 0;
        bool        operator==(const PsiVar&) const = default;
    };

    std::vector<FactorSpace> factors;
    std::vector<PsiVar>      vars;
    int                      lambda_factor = -1;  ///< genus-one factor index, -1 if none

    int total_dim() const
    {
        int d = 0;
        for (const auto& f : factors)
            d += f.dim();
        return d;
    }

    bool operator==(const VarContext&) const = default;
};

/// Exponent vector: one slot per psi variable, then the Hodge exponent last.
using Monomial = std::vector<int>;

/** @brief Exact polynomial of tautological classes with automatic truncation.
 *
 *  A default-constructed or scalar element carries no context and can be
 *  combined with any element; contexts of two operands must otherwise agree.
 */
class TautElement {
public:
    TautElement() = default;

    explicit TautElement(const Rational& scalar_value) { *this = scalar(scalar_value); }
    TautElement(int scalar_value) : TautElement(Rational(scalar_value)) {}

    static TautElement scalar(const Rational& value)
    {
        TautElement e;
        if (value != 0)
            e.coeffs_.emplace(Monomial{}, value);
        return e;
    }

    static TautElement zero() { return TautElement(); }
    static TautElement one() { return scalar(1); }

    /** @brief The class of the var_index-th cotangent variable. */
    static TautElement psi(std::shared_ptr<const VarContext> ctx, int var_index)
    {
        if (!ctx || var_index < 0 || var_index >= static_cast<int>(ctx->vars.size()))
            throw std::out_of_range("TautElement::psi: no such variable");
        Monomial m(ctx->vars.size() + 1, 0);
        m[var_index] = 1;
        TautElement e;
        e.ctx_ = std::move(ctx);
        e.coeffs_.emplace(std::move(m), Rational(1));
        e.truncate();
        return e;
    }

    /** @brief The genus-one Hodge class. */
    static TautElement lambda(std::shared_ptr<const VarContext> ctx)
    {
        if (!ctx || ctx->lambda_factor < 0)
            throw std::logic_error(
                "TautElement::lambda: parametrizing space has no genus-one factor");
        Monomial m(ctx->vars.size() + 1, 0);
        m.back() = 1;
        TautElement e;
        e.ctx_ = std::move(ctx);
        e.coeffs_.emplace(std::move(m), Rational(1));
        e.truncate();
        return e;
    }

    /** @brief Build directly from monomial data (exponent vector -> coefficient). */
    static TautElement from_monomials(std::shared_ptr<const VarContext> ctx,
                                      std::map<Monomial, Rational> coeffs)
    {
        TautElement e;
        e.ctx_    = std::move(ctx);
        e.coeffs_ = std::move(coeffs);
        e.truncate();
        return e;
    }

    const std::shared_ptr<const VarContext>& context() const { return ctx_; }
    const std::map<Monomial, Rational>&      monomials() const { return coeffs_; }

    bool is_zero() const { return coeffs_.empty(); }

    bool is_scalar() const
    {
        if (coeffs_.empty())
            return true;
        if (coeffs_.size() > 1)
            return false;
        const Monomial& m = coeffs_.begin()->first;
        return std::all_of(m.begin(), m.end(), [](int e) { return e == 0; });
    }

    Rational scalar_part() const
    {
        for (const auto& [m, c] : coeffs_)
            if (std::all_of(m.begin(), m.end(), [](int e) { return e == 0; }))
                return c;
        return 0;
    }

    /** @brief True when every monomial has the same total degree (also
     *         reports that degree; the zero element is homogeneous of
     *         degree -1 by convention). */
    bool is_homogeneous(int* degree_out = nullptr) const
    {
        int degree = -1;
        for (const auto& [m, c] : coeffs_) {
            const int d = std::accumulate(m.begin(), m.end(), 0);
            if (degree == -1)
                degree = d;
            else if (degree != d)
                return false;
        }
        if (degree_out)
            *degree_out = degree;
        return true;
    }

    friend TautElement operator+(const TautElement& a, const TautElement& b)
    {
        TautElement out;
        out.ctx_ = merged_context(a, b);
        out.coeffs_ = widen(a, out.ctx_);
        for (auto& [m, c] : widen(b, out.ctx_)) {
            auto [it, inserted] = out.coeffs_.emplace(m, c);
            if (!inserted)
                it->second += c;
        }
        out.truncate();
        return out;
    }

    friend TautElement operator-(const TautElement& a, const TautElement& b)
    {
        return a + (-b);
    }

    TautElement operator-() const
    {
        TautElement out = *this;
        for (auto& [m, c] : out.coeffs_)
            c = -c;
        return out;
    }

    friend TautElement operator*(const TautElement& a, const TautElement& b)
    {
        TautElement out;
        out.ctx_    = merged_context(a, b);
        const auto  am = widen(a, out.ctx_);
        const auto  bm = widen(b, out.ctx_);
        for (const auto& [ma, ca] : am)
            for (const auto& [mb, cb] : bm) {
                Monomial m(std::max(ma.size(), mb.size()), 0);
                for (size_t i = 0; i < ma.size(); ++i)
                    m[i] += ma[i];
                for (size_t i = 0; i < mb.size(); ++i)
                    m[i] += mb[i];
                auto [it, inserted] = out.coeffs_.emplace(std::move(m), ca * cb);
                if (!inserted)
                    it->second += ca * cb;
            }
        out.truncate();
        return out;
    }

    friend TautElement operator*(const Rational& s, const TautElement& a)
    {
        TautElement out = a;
        if (s == 0)
            return TautElement();
        for (auto& [m, c] : out.coeffs_)
            c *= s;
        return out;
    }

    friend TautElement operator*(const TautElement& a, const Rational& s) { return s * a; }

    friend bool operator==(const TautElement& a, const TautElement& b)
    {
        if (a.coeffs_.empty() && b.coeffs_.empty())
            return true;
        const auto ctx = merged_context(a, b);
        return widen(a, ctx) == widen(b, ctx);
    }

    /** @brief True when the constant term is nonzero, i.e. the element is a
     *         unit of the truncated ring. */
    bool is_unit() const { return scalar_part() != 0; }

    /** @brief Exact inverse of a unit: finite geometric series, terminating
     *         because positive-degree classes are nilpotent under truncation. */
    TautElement invert_unit() const
    {
        const Rational c0 = scalar_part();
        if (c0 == 0)
            throw std::invalid_argument(
                "TautElement::invert_unit: constant term vanishes");
        const Rational    c0inv = Rational(1) / c0;
        const TautElement u     = c0inv * (*this - scalar(c0));  // nilpotent part
        TautElement       sum   = one();
        TautElement       pw    = one();
        const int         cap   = (ctx_ ? ctx_->total_dim() : 0) + 2;
        for (int j = 1; j <= cap; ++j) {
            pw = pw * u;
            if (pw.is_zero())
                break;
            sum = sum + (((j % 2 == 0) ? Rational(1) : Rational(-1)) * pw);
        }
        return c0inv * sum;
    }

    /** @brief Canonical rendering: monomials in ascending lexicographic order
     *         of their exponent vector, each as "<coeff>*<vars>" with the
     *         Hodge class printed last as "L"; a bare scalar prints as its
     *         rational value and the zero element as "0". */
    std::string to_string() const
    {
        if (coeffs_.empty())
            return "0";
        std::string out;
        for (const auto& [m, c] : coeffs_) {
            if (!out.empty())
                out += " + ";
            std::string vars;
            for (size_t i = 0; i + 1 < m.size(); ++i) {
                if (m[i] == 0)
                    continue;
                vars += "*v" + std::to_string(i);
                if (m[i] > 1)
                    vars += "^" + std::to_string(m[i]);
            }
            if (!m.empty() && m.back() > 0) {
                vars += "*L";
                if (m.back() > 1)
                    vars += "^" + std::to_string(m.back());
            }
            out += to_fraction_string(c) + vars;
        }
        return out;
    }

private:
    /// Two operands may combine when either is context-free or contexts agree.
    static std::shared_ptr<const VarContext> merged_context(const TautElement& a,
                                                            const TautElement& b)
    {
        if (!a.ctx_)
            return b.ctx_;
        if (!b.ctx_)
            return a.ctx_;
        if (a.ctx_ == b.ctx_ || *a.ctx_ == *b.ctx_)
            return a.ctx_;
        throw std::logic_error(
            "TautElement: cannot combine classes from different parametrizing spaces");
    }

    /// Re-key monomials to the width of ctx (scalars have empty keys).
    static std::map<Monomial, Rational> widen(const TautElement&                       a,
                                              const std::shared_ptr<const VarContext>& ctx)
    {
        const size_t width = ctx ? ctx->vars.size() + 1 : 0;
        std::map<Monomial, Rational> out;
        for (const auto& [m, c] : a.coeffs_) {
            Monomial key = m;
            if (key.size() < width)
                key.resize(width, 0);
            out.emplace(std::move(key), c);
        }
        return out;
    }

    /// Apply the vanishing rules and drop zero coefficients.
    void truncate()
    {
        for (auto it = coeffs_.begin(); it != coeffs_.end();) {
            if (it->second == 0) {
                it = coeffs_.erase(it);
                continue;
            }
            const Monomial& m = it->first;
            bool            dead = false;
            if (!m.empty()) {
                if (!ctx_)
                    throw std::logic_error(
                        "TautElement: non-scalar monomial without a context");
                const int lambda_exp = m.back();
                if (lambda_exp > 0 && ctx_->lambda_factor < 0)
                    throw std::logic_error(
                        "TautElement: Hodge class on a space without a genus-one factor");
                if (lambda_exp >= 2)
                    dead = true;
                const int total = std::accumulate(m.begin(), m.end(), 0);
                if (total > ctx_->total_dim())
                    dead = true;
                if (!dead) {
                    std::vector<int> local(ctx_->factors.size(), 0);
                    for (size_t i = 0; i + 1 < m.size(); ++i)
                        local[ctx_->vars[i].factor] += m[i];
                    if (ctx_->lambda_factor >= 0)
                        local[ctx_->lambda_factor] += lambda_exp;
                    for (size_t f = 0; f < local.size(); ++f)
                        if (local[f] > ctx_->factors[f].dim()) {
                            dead = true;
                            break;
                        }
                }
            }
            it = dead ? coeffs_.erase(it) : std::next(it);
        }
    }

    std::shared_ptr<const VarContext> ctx_;
    std::map<Monomial, Rational>      coeffs_;
};

/** @brief Series-coefficient operations for tautological classes. */
template <>
struct RingTraits<TautElement> {
    static TautElement zero() { return TautElement::zero(); }
    static TautElement one() { return TautElement::one(); }
    static bool        is_zero(const TautElement& c) { return c.is_zero(); }
    static bool        is_unit(const TautElement& c) { return c.is_unit(); }
    static TautElement invert_unit(const TautElement& c) { return c.invert_unit(); }
};

} // namespace tautrel
