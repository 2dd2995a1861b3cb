#include <catch2/catch_amalgamated.hpp>

#include "logfrob/error.hpp"
#include "logfrob/forms.hpp"

using namespace logfrob;

namespace {
IVec iv(std::initializer_list<int> xs)
{
    IVec v(static_cast<int>(xs.size()));
    int i = 0;
    for (int x : xs)
        v(i++) = x;
    return v;
}
} // namespace

TEST_CASE("exterior derivative in graded normal form")
{
    Fp::set_prime(5);
    SECTION("constants are closed")
    {
        FormSum one = FormSum::constant(2, Fp(1));
        REQUIRE(one.d().is_zero());
    }
    SECTION("d(t1 dlog t2) = dt1 ^ dlog t2")
    {
        // x^{(1,0)} (x) e2  ->  x^{(1,0)} (x) e1 ^ e2
        FormSum f = FormSum::monomial(2, {1, 0}, 0b10u, Fp(1));
        FormSum df = f.d();
        REQUIRE(df ==
                FormSum::monomial(2, {1, 0}, 0b11u, Fp(1)));
    }
    SECTION("d squares to zero")
    {
        FormSum f = FormSum::monomial(2, {1, 1}, 0u, Fp(3));
        REQUIRE(f.d().d().is_zero());
        FormSum g = FormSum::monomial(2, {2, 3}, 0b01u, Fp(1)) +
                    FormSum::monomial(2, {4, 1}, 0b10u, Fp(2));
        REQUIRE(g.d().d().is_zero());
    }
    SECTION("wedge is graded commutative")
    {
        FormSum a = FormSum::monomial(2, {1, 0}, 0b01u, Fp(2));
        FormSum b = FormSum::monomial(2, {0, 1}, 0b10u, Fp(3));
        REQUIRE(a.wedge(b) == b.wedge(a) * Fp(-1));
        FormSum fa = FormSum::monomial(2, {1, 1}, 0u, Fp(2));
        REQUIRE(fa.wedge(b) == b.wedge(fa));
    }
}

TEST_CASE("poincare residues")
{
    Fp::set_prime(5);
    Fan a2;
    a2.n = 2;
    a2.rays = {iv({1, 0}), iv({0, 1})};
    a2.max_cones = {{0, 1}};
    DivisorSet both{{0, 1}};
    ChartContext ctx = make_context(a2, {0, 1}, both, nullptr);

    SECTION("residue of dlog t1 along t1 = 0 is 1")
    {
        FormSum f = FormSum::monomial(2, {0, 0}, 0b01u, Fp(1));
        FormSum r = residue(ctx, f, {0});
        REQUIRE(r.n() == 1);
        REQUIRE(r == FormSum::constant(1, Fp(1)));
    }
    SECTION("residue strips the first log factor")
    {
        FormSum f = FormSum::monomial(2, {0, 0}, 0b11u, Fp(1));
        FormSum r = residue(ctx, f, {0});
        // dlog t1 ^ dlog t2 -> dlog t2 restricted to the divisor
        REQUIRE(r == FormSum::monomial(1, {0}, 0b1u, Fp(1)));
    }
    SECTION("residue kills lower weight")
    {
        // dt1 ^ dlog t2 = x^{(1,0)} dlog t1 ^ dlog t2 lies in W_1 and has
        // no dlog t1 factor at t1 = 0
        FormSum f = FormSum::monomial(2, {1, 0}, 0b11u, Fp(1));
        FormSum r = residue(ctx, f, {0}, /*enforce_level=*/true);
        REQUIRE(r.is_zero());
    }
    SECTION("weight level enforcement")
    {
        // dlog t1 ^ dlog t2 sits in W_2 only; the strict-domain residue
        // along one component rejects it
        FormSum f = FormSum::monomial(2, {0, 0}, 0b11u, Fp(1));
        try {
            residue(ctx, f, {0}, /*enforce_level=*/true);
            FAIL("expected NotInWeightLevel");
        } catch (const Error& e) {
            REQUIRE(e.code() == "NotInWeightLevel");
        }
    }
    SECTION("rays outside the divisor are a bad face")
    {
        ChartContext ctx2 = make_context(a2, {0, 1}, DivisorSet{{0}},
                                         nullptr);
        FormSum f = FormSum::monomial(2, {0, 0}, 0b01u, Fp(1));
        try {
            residue(ctx2, f, {1});
            FAIL("expected BadFace");
        } catch (const Error& e) {
            REQUIRE(e.code() == "BadFace");
        }
    }
}

TEST_CASE("graded weight decomposition")
{
    Fp::set_prime(5);
    SECTION("level zero is the identity on no-log forms")
    {
        Fan a2;
        a2.n = 2;
        a2.rays = {iv({1, 0}), iv({0, 1})};
        a2.max_cones = {{0, 1}};
        ChartContext ctx =
            make_context(a2, {0, 1}, DivisorSet{{0, 1}}, nullptr);
        GrDecomposition g = gr_weight_decompose(ctx, iv({1, 1}), 1, 0);
        REQUIRE(g.strata.size() == 1);
        REQUIRE(g.strata[0].empty());
        REQUIRE(g.source.dim() == g.target_dims[0]);
    }
    SECTION("P1 boundary: level one splits into the two points")
    {
        Fan f;
        f.n = 1;
        f.rays = {iv({1}), iv({-1})};
        f.max_cones = {{0}, {1}};
        DivisorSet both{{0, 1}};
        // on the chart of the first cone the only divisor ray is 0
        ChartContext ctx = make_context(f, {0}, both, nullptr);
        GrDecomposition g = gr_weight_decompose(ctx, iv({0}), 1, 1);
        REQUIRE(g.source.dim() == 1);
        REQUIRE(g.strata.size() == 1);
        REQUIRE(rank_of(g.matrix) == 1);
    }
    SECTION("level above the divisor count is empty")
    {
        Fan a2;
        a2.n = 2;
        a2.rays = {iv({1, 0}), iv({0, 1})};
        a2.max_cones = {{0, 1}};
        ChartContext ctx =
            make_context(a2, {0, 1}, DivisorSet{{0}}, nullptr);
        GrDecomposition g = gr_weight_decompose(ctx, iv({0, 1}), 2, 2);
        REQUIRE(g.source.dim() == 0);
        int total = 0;
        for (int d : g.target_dims)
            total += d;
        REQUIRE(total == 0);
    }
    SECTION("bijectivity across a window of weights and levels")
    {
        Fan a2;
        a2.n = 2;
        a2.rays = {iv({1, 0}), iv({0, 1})};
        a2.max_cones = {{0, 1}};
        ChartContext ctx =
            make_context(a2, {0, 1}, DivisorSet{{0, 1}}, nullptr);
        for (int mx = -1; mx <= 2; ++mx)
            for (int my = -1; my <= 2; ++my)
                for (int i = 0; i <= 2; ++i)
                    for (int l = 0; l <= i; ++l)
                        REQUIRE_NOTHROW(gr_weight_decompose(
                            ctx, iv({mx, my}), i, l));
    }
}
