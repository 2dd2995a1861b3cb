#include <catch2/catch_amalgamated.hpp>

#include "logfrob/error.hpp"
#include "logfrob/toric.hpp"
#include "oracle.hpp"

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

Fan p1_fan()
{
    Fan f;
    f.n = 1;
    f.rays = {iv({1}), iv({-1})};
    f.max_cones = {{0}, {1}};
    return f;
}

Fan p2_fan()
{
    Fan f;
    f.n = 2;
    f.rays = {iv({1, 0}), iv({0, 1}), iv({-1, -1})};
    f.max_cones = {{0, 1}, {1, 2}, {0, 2}};
    return f;
}

} // namespace

TEST_CASE("fan validation")
{
    Fp::set_prime(5);
    SECTION("projective line")
    {
        auto rep = validate(p1_fan(), 5);
        REQUIRE(rep.smooth);
        REQUIRE(rep.complete);
        REQUIRE(rep.n == 1);
        REQUIRE(rep.dim_less_p);
    }
    SECTION("projective plane")
    {
        auto rep = validate(p2_fan(), 5);
        REQUIRE(rep.smooth);
        REQUIRE(rep.complete);
        REQUIRE(rep.n == 2);
    }
    SECTION("non-smooth cone is rejected")
    {
        Fan f;
        f.n = 2;
        f.rays = {iv({1, 0}), iv({1, 2})};
        f.max_cones = {{0, 1}};
        try {
            validate(f, 5);
            FAIL("expected NotSmooth");
        } catch (const Error& e) {
            REQUIRE(e.code() == "NotSmooth");
        }
    }
    SECTION("open fan is rejected")
    {
        Fan f;
        f.n = 2;
        f.rays = {iv({1, 0}), iv({0, 1})};
        f.max_cones = {{0, 1}};
        try {
            validate(f, 5);
            FAIL("expected NotComplete");
        } catch (const Error& e) {
            REQUIRE(e.code() == "NotComplete");
        }
    }
    SECTION("non-primitive ray is a parse error")
    {
        Fan f;
        f.n = 1;
        f.rays = {iv({2}), iv({-1})};
        f.max_cones = {{0}, {1}};
        try {
            check_fan_wellformed(f);
            FAIL("expected SpecParseError");
        } catch (const Error& e) {
            REQUIRE(e.code() == "SpecParseError");
        }
    }
}

TEST_CASE("form spaces on affine charts")
{
    Fp::set_prime(5);
    Fan a1;
    a1.n = 1;
    a1.rays = {iv({1})};
    a1.max_cones = {{0}};
    DivisorSet with_d{{0}};
    DivisorSet no_d{{}};

    SECTION("dlog t is a log form at weight zero")
    {
        ChartContext ctx = make_context(a1, {0}, with_d, nullptr);
        REQUIRE(form_space(ctx, iv({0}), 1).dim() == 1);
    }
    SECTION("dt/t is not regular without the divisor")
    {
        ChartContext ctx = make_context(a1, {0}, no_d, nullptr);
        REQUIRE(form_space(ctx, iv({0}), 1).dim() == 0);
    }
    SECTION("dt is regular")
    {
        ChartContext ctx = make_context(a1, {0}, no_d, nullptr);
        REQUIRE(form_space(ctx, iv({1}), 1).dim() == 1);
    }
}

TEST_CASE("weight filtration slices")
{
    Fp::set_prime(5);
    Fan a1;
    a1.n = 1;
    a1.rays = {iv({1})};
    a1.max_cones = {{0}};
    SECTION("one log direction")
    {
        ChartContext ctx = make_context(a1, {0}, DivisorSet{{0}}, nullptr);
        REQUIRE(weight_slice(ctx, iv({0}), 1, 0).dim() == 0);
        REQUIRE(weight_slice(ctx, iv({0}), 1, 1).dim() == 1);
    }
    SECTION("two log directions on the plane")
    {
        Fan a2;
        a2.n = 2;
        a2.rays = {iv({1, 0}), iv({0, 1})};
        a2.max_cones = {{0, 1}};
        ChartContext ctx =
            make_context(a2, {0, 1}, DivisorSet{{0, 1}}, nullptr);
        REQUIRE(weight_slice(ctx, iv({0, 0}), 2, 0).dim() == 0);
        REQUIRE(weight_slice(ctx, iv({0, 0}), 2, 1).dim() == 0);
        REQUIRE(weight_slice(ctx, iv({0, 0}), 2, 2).dim() == 1);
        // W_l is the whole space for l >= degree
        REQUIRE(weight_slice(ctx, iv({0, 0}), 2, 5).dim() ==
                form_space(ctx, iv({0, 0}), 2).dim());
    }
    SECTION("cross-validation against the coordinate enumeration")
    {
        Fan a2;
        a2.n = 2;
        a2.rays = {iv({1, 0}), iv({0, 1})};
        a2.max_cones = {{0, 1}};
        for (int dmask = 0; dmask < 4; ++dmask) {
            DivisorSet D{{}};
            std::vector<bool> dv(2, false);
            for (int j = 0; j < 2; ++j)
                if (dmask & (1 << j)) {
                    D.rays_in_divisor.push_back(j);
                    dv[j] = true;
                }
            ChartContext ctx = make_context(a2, {0, 1}, D, nullptr);
            for (int mx = -2; mx <= 2; ++mx) {
                for (int my = -2; my <= 2; ++my) {
                    for (int i = 0; i <= 2; ++i) {
                        IVec m = iv({mx, my});
                        int got = form_space(ctx, m, i).dim();
                        int want =
                            oracle::chart_form_dim(a2.rays, dv, m, i);
                        REQUIRE(got == want);
                        for (int l = 0; l <= 2; ++l) {
                            int gotw = weight_slice(ctx, m, i, l).dim();
                            int wantw = oracle::chart_form_dim(
                                a2.rays, dv, m, i, l);
                            REQUIRE(gotw == wantw);
                        }
                    }
                }
            }
        }
    }
    SECTION("top log forms are one-dimensional over the dual cone")
    {
        Fan f = p2_fan();
        DivisorSet all{{0, 1, 2}};
        ChartContext ctx = make_context(f, f.max_cones[0], all, nullptr);
        for (int mx = 0; mx <= 2; ++mx)
            for (int my = 0; my <= 2; ++my)
                REQUIRE(form_space(ctx, iv({mx, my}), 2).dim() == 1);
    }
    SECTION("cross-validation on every chart of the plane")
    {
        Fan f = p2_fan();
        for (const auto& cone : f.max_cones) {
            for (int dmask = 0; dmask < 8; ++dmask) {
                DivisorSet D{{}};
                for (int j = 0; j < 3; ++j)
                    if (dmask & (1 << j))
                        D.rays_in_divisor.push_back(j);
                ChartContext ctx = make_context(f, cone, D, nullptr);
                std::vector<Eigen::VectorXi> rays = ctx.rays;
                std::vector<bool> dv = ctx.in_divisor;
                for (int mx = -2; mx <= 2; ++mx)
                    for (int my = -2; my <= 2; ++my)
                        for (int i = 0; i <= 2; ++i) {
                            IVec m = iv({mx, my});
                            REQUIRE(form_space(ctx, m, i).dim() ==
                                    oracle::chart_form_dim(rays, dv, m,
                                                           i));
                            for (int l = 0; l <= i; ++l)
                                REQUIRE(weight_slice(ctx, m, i, l).dim() ==
                                        oracle::chart_form_dim(rays, dv,
                                                               m, i, l));
                        }
            }
        }
    }
}

TEST_CASE("hodge filtration slices")
{
    Fp::set_prime(5);
    Fan a2;
    a2.n = 2;
    a2.rays = {iv({1, 0}), iv({0, 1})};
    a2.max_cones = {{0, 1}};
    ChartContext ctx = make_context(a2, {0, 1}, DivisorSet{{0, 1}}, nullptr);
    IVec m = iv({0, 0});
    for (int i = 0; i <= 2; ++i) {
        // Fil^0 keeps everything, Fil^{i+1} kills degree i
        REQUIRE(hodge_slice(ctx, m, i, 0).dim() ==
                form_space(ctx, m, i).dim());
        REQUIRE(hodge_slice(ctx, m, i, i).dim() ==
                form_space(ctx, m, i).dim());
        REQUIRE(hodge_slice(ctx, m, i, i + 1).dim() == 0);
    }
}

TEST_CASE("weight support boxes")
{
    Fp::set_prime(5);
    SECTION("P1 with no twist")
    {
        auto support = weight_support(p1_fan(), nullptr, 3);
        REQUIRE(support.size() == 7);
        REQUIRE(support.front()(0) == -3);
        REQUIRE(support.back()(0) == 3);
    }
    SECTION("P1 twisted by O(2)")
    {
        Twist tw{{0, 2}};
        auto support = weight_support(p1_fan(), &tw, 3);
        REQUIRE(support.front()(0) == -3);
        REQUIRE(support.back()(0) == 5);
    }
    SECTION("P2 box count")
    {
        auto support = weight_support(p2_fan(), nullptr, 2);
        REQUIRE(support.size() == 25);
    }
}

TEST_CASE("ampleness by strict convexity")
{
    Fp::set_prime(5);
    Fan f = p2_fan();
    REQUIRE(is_ample(f, Twist{{1, 0, 0}}));
    REQUIRE(is_ample(f, Twist{{2, 0, 0}}));
    REQUIRE_FALSE(is_ample(f, Twist{{0, 0, 0}}));
    REQUIRE_FALSE(is_ample(f, Twist{{-3, 0, 0}}));
    REQUIRE(is_ample(p1_fan(), Twist{{1, 0}}));
}

TEST_CASE("toric morphism chart assignment")
{
    Fp::set_prime(5);
    // projection P1 x P1 -> P1
    Fan src;
    src.n = 2;
    src.rays = {iv({1, 0}), iv({-1, 0}), iv({0, 1}), iv({0, -1})};
    src.max_cones = {{0, 2}, {0, 3}, {1, 2}, {1, 3}};
    ToricMorphism f;
    f.lattice_map = IMat(1, 2);
    f.lattice_map << 1, 0;
    f.source = src;
    f.target = p1_fan();
    f.source_divisor = DivisorSet{{0, 1, 2, 3}};
    f.target_divisor = DivisorSet{{0, 1}};
    auto chi = chart_assignment(f);
    REQUIRE(chi.size() == 4);
    REQUIRE(chi[0] == 0);
    REQUIRE(chi[2] == 1);

    // preimage condition violated: target divisor pulled back to rays
    // outside the source divisor
    f.source_divisor = DivisorSet{{2, 3}};
    try {
        chart_assignment(f);
        FAIL("expected NoChartAssignment");
    } catch (const Error& e) {
        REQUIRE(e.code() == "NoChartAssignment");
    }
}
