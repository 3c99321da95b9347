#include "tautrel/taut_element.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace tautrel;

namespace {

/// Parametrizing space of the locus with an elliptic factor M(1,2) over 0 and
/// a rational factor M(0,4) over infinity: variables v0, v1 on the rational
/// factor, v2 on the elliptic one.
std::shared_ptr<const VarContext> sample_context()
{
    auto ctx = std::make_shared<VarContext>();
    ctx->factors = {FactorSpace{1, 2}, FactorSpace{0, 4}};
    ctx->vars    = {{"psi(g0,s1,far=C(1,2),d1)", 1},
                    {"psi(g0,s1,far=P1,d1)", 1},
                    {"psi(g1,s0,far=C(0,4),d1)", 0}};
    ctx->lambda_factor = 0;
    return ctx;
}

} // namespace

TEST_CASE("scalars need no context and mix with classes")
{
    const auto ctx = sample_context();
    const auto v0  = TautElement::psi(ctx, 0);
    const auto two = TautElement::scalar(2);
    const auto sum = two * v0 + TautElement::scalar(1);
    CHECK(sum.to_string() == "1 + 2*v0");
    CHECK(sum.is_unit());
    CHECK(!sum.is_scalar());
    CHECK(sum.scalar_part() == 1);
}

TEST_CASE("the Hodge class squares to zero")
{
    const auto ctx = sample_context();
    const auto L   = TautElement::lambda(ctx);
    CHECK((L * L).is_zero());
    CHECK(!(L * TautElement::psi(ctx, 0)).is_zero());
}

TEST_CASE("per-factor dimension truncation")
{
    const auto ctx = sample_context();
    const auto v0  = TautElement::psi(ctx, 0);
    const auto v1  = TautElement::psi(ctx, 1);
    const auto v2  = TautElement::psi(ctx, 2);
    const auto L   = TautElement::lambda(ctx);
    // The rational factor M(0,4) is a curve: any local degree two dies.
    CHECK((v0 * v0).is_zero());
    CHECK((v0 * v1).is_zero());
    // The elliptic factor M(1,2) has dimension two.
    CHECK(!(v2 * v2).is_zero());
    CHECK(!(v2 * L).is_zero());
    CHECK((v2 * v2 * L).is_zero());  // local degree three on a surface
    // Mixed-factor products survive up to the total dimension (three).
    CHECK(!(v0 * v2 * L).is_zero());
    CHECK((v0 * v2 * v2 * L).is_zero());
}

TEST_CASE("units invert exactly")
{
    const auto ctx = sample_context();
    const auto v2  = TautElement::psi(ctx, 2);
    const auto L   = TautElement::lambda(ctx);
    const auto a   = TautElement::scalar(Rational(-2)) + v2 + L;
    REQUIRE(a.is_unit());
    const auto inv = a.invert_unit();
    CHECK(a * inv == TautElement::one());
    CHECK_THROWS_AS(v2.invert_unit(), std::invalid_argument);
}

TEST_CASE("rendering follows the canonical monomial order")
{
    const auto ctx = sample_context();
    const auto v0  = TautElement::psi(ctx, 0);
    const auto v1  = TautElement::psi(ctx, 1);
    const auto v2  = TautElement::psi(ctx, 2);
    const auto L   = TautElement::lambda(ctx);
    const auto cls = L + v0 + v1 - v2;
    CHECK(cls.to_string() == "1*L + -1*v2 + 1*v1 + 1*v0");
    CHECK(TautElement::scalar(Rational(-8, 3)).to_string() == "-8/3");
    CHECK(TautElement::zero().to_string() == "0");
    int degree = 0;
    CHECK(cls.is_homogeneous(&degree));
    CHECK(degree == 1);
    CHECK(!(cls + TautElement::scalar(3)).is_homogeneous());
}

TEST_CASE("contexts must agree")
{
    const auto a = TautElement::psi(sample_context(), 0);
    auto other   = std::make_shared<VarContext>();
    other->factors = {FactorSpace{0, 5}};
    other->vars    = {{"psi(g0,s0,far=P0,d1)", 0}, {"psi(g0,s0,far=P1,d1)", 0}};
    const auto b   = TautElement::psi(std::move(other), 1);
    CHECK_THROWS_AS(a + b, std::logic_error);
    CHECK_THROWS_AS(a * b, std::logic_error);
}

TEST_CASE("series over tautological classes invert Euler-style factors")
{
    const auto ctx = sample_context();
    const auto v2  = TautElement::psi(ctx, 2);
    const auto L   = TautElement::lambda(ctx);
    using TS       = HbarSeries<TautElement>;

    // (hbar - L): nilpotent lower part, so the inverse is exact.
    const TS den = series_add(TS::monomial(1, TautElement::one()),
                              TS::monomial(0, -L));
    const TS inv = series_invert(den);
    CHECK(!inv.has_lower_tail());
    CHECK(coefficient(inv, -1) == TautElement::one());
    CHECK(coefficient(inv, -2) == L);
    CHECK(coefficient(inv, -3).is_zero());

    // (hbar - v2)^-1 terminates at the third power on this surface factor.
    const TS flag = series_add(TS::monomial(1, TautElement::one()),
                               TS::monomial(0, -v2));
    const TS finv = series_invert(flag);
    CHECK(!finv.has_lower_tail());
    CHECK(coefficient(finv, -3) == v2 * v2);
    CHECK(coefficient(finv, -4).is_zero());
    const TS prod = series_mul(flag, finv);
    CHECK(coefficient(prod, 0) == TautElement::one());
    CHECK(coefficient(prod, -2).is_zero());
}
