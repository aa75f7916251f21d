#include <random>

#include "catch_amalgamated.hpp"
#include "fixture_catalog.hpp"
#include "taffin/distcalc.hpp"

using namespace taffin;

namespace {

struct Ctx {
    OrbitData od;
    CoeffField F;
    explicit Ctx(const fixtures::Fixture& f) : od(validate(f.A, f.mu)), F(od.N) {}
};

// partial products of the defining infinite product of (1-x)^a_{q^2}, an
// independent stabilization oracle for the log-series expansion
TruncSeries partial_product(const CoeffField& F, long a, int M, int D) {
    TruncSeries acc({"x"}, {{0, 2 * D}}, regions::x_small);
    acc.add_term({0}, F.one());
    auto linear = [&](long qexp) {
        TruncSeries s({"x"}, {{0, 2 * D}}, regions::x_small);
        s.add_term({0}, F.one());
        s.add_term({2}, -F.q_pow2(2 * qexp));
        return s;
    };
    for (int n = 0; n <= M; ++n) {
        acc = acc * linear(-a + 1 + 2 * n);
        acc = acc * inverse_unit(linear(a + 1 + 2 * n), F);
    }
    return acc;
}

}  // namespace

TEST_CASE("q-deformed binomial expansion") {
    CoeffField F(2);
    SECTION("a = 1 telescopes to 1 - x") {
        TruncSeries s = qdef_binom_expand(F, 1, 12);
        CHECK(s.coeff({0}).is_one());
        CHECK(s.coeff({2}) == -F.one());
        for (int n = 2; n <= 12; ++n) CHECK(s.coeff({2 * n}).is_zero());
    }
    SECTION("a = 0 is 1") {
        TruncSeries s = qdef_binom_expand(F, 0, 8);
        CHECK(s.coeff({0}).is_one());
        for (int n = 1; n <= 8; ++n) CHECK(s.coeff({2 * n}).is_zero());
    }
    SECTION("a = 2 equals (1 - q^{-1}x)(1 - qx)") {
        TruncSeries s = qdef_binom_expand(F, 2, 10);
        CHECK(s.coeff({2}) == -(F.q_pow2(2) + F.q_pow2(-2)));
        CHECK(s.coeff({4}).is_one());
        for (int n = 3; n <= 10; ++n) CHECK(s.coeff({2 * n}).is_zero());
    }
    SECTION("log/exp inverse") {
        for (long a : {-2L, -1L, 1L, 2L, 3L}) {
            TruncSeries prod = qdef_binom_expand(F, a, 12) * qdef_binom_expand(F, -a, 12);
            CHECK(prod.coeff({0}).is_one());
            for (int n = 1; n <= 12; ++n) CHECK(prod.coeff({2 * n}).is_zero());
        }
    }
    SECTION("partial products converge q-adically to the expansion") {
        // The defining product converges only coefficientwise: the difference from the
        // log-series expansion has strictly growing q-adic valuation in M.
        int D = 6;
        for (long a : {-2L, -1L, 1L, 2L}) {
            TruncSeries s = qdef_binom_expand(F, a, D);
            std::vector<long> minval;
            for (int M : {4, 6, 8}) {
                TruncSeries pm = partial_product(F, a, M, D);
                long mv = 1000;
                for (int n = 1; n <= D; ++n) {
                    CoeffElem diff = pm.coeff({2 * n}) - s.coeff({2 * n});
                    if (!diff.is_zero()) mv = std::min(mv, diff.v_valuation());
                }
                minval.push_back(mv);
                CHECK(mv >= 2 * M);  // tail factors start at q^{2M+...}
            }
            CHECK(minval[0] < minval[1]);
            CHECK(minval[1] < minval[2]);
        }
    }
}

TEST_CASE("closed-form products") {
    SECTION("A2 flip, i=j=1") {
        Ctx c(fixtures::a2_flip());
        TruncSeries s = closed_form_product(c.od, c.F, 0, 0, 0, 10);
        CHECK(s.coeff({0}).is_one());
        CHECK(s.coeff({2}) == c.F.one() + c.F.q_pow2(2) + c.F.q_pow2(-2));
    }
    SECTION("A3 flip, i=j=1 (d_ii = 0 branch)") {
        Ctx c(fixtures::a3_flip());
        TruncSeries s = closed_form_product(c.od, c.F, 0, 0, 0, 10);
        // 1/((1-qx)(1-q^{-1}x)): coefficient of x is q + q^{-1}
        CHECK(s.coeff({2}) == c.F.q_pow2(2) + c.F.q_pow2(-2));
    }
    SECTION("dual route: closed form vs factorwise") {
        for (const auto& f : {fixtures::a2_flip(), fixtures::a3_flip(), fixtures::a2_untwisted()}) {
            Ctx c(f);
            int D = 20;
            for (int i : c.od.reps)
                for (int j = 0; j < c.od.nu; ++j) {
                    if (!c.od.same_orbit(i, j)) continue;
                    TruncSeries a = closed_form_product(c.od, c.F, i, j, 0, D);
                    TruncSeries b = factorwise_product(c.od, c.F, i, j, 0, D);
                    for (int n = 0; n <= D; ++n) CHECK(a.coeff({2 * n}) == b.coeff({2 * n}));
                }
        }
    }
    SECTION("q-shifted argument") {
        Ctx c(fixtures::a2_flip());
        TruncSeries base = closed_form_product(c.od, c.F, 0, 0, 0, 6);
        TruncSeries shifted = closed_form_product(c.od, c.F, 0, 0, 2, 6);
        for (int n = 0; n <= 6; ++n) CHECK(shifted.coeff({2 * n}) == base.coeff({2 * n}) * c.F.q_pow2(2 * n));
    }
}

TEST_CASE("delta proposition") {
    SECTION("A2 flip, i=j=1") {
        Ctx c(fixtures::a2_flip());
        auto res = check_delta_prop(c.od, c.F, 0, 0, 12);
        INFO(res.witness);
        CHECK(res.pass);
        CHECK(res.coefficients_checked == 25);
    }
    SECTION("A3 flip, i=j=1 and i=j=2") {
        Ctx c(fixtures::a3_flip());
        auto r1 = check_delta_prop(c.od, c.F, 0, 0, 12);
        INFO(r1.witness);
        CHECK(r1.pass);
        auto r2 = check_delta_prop(c.od, c.F, 1, 1, 12);
        INFO(r2.witness);
        CHECK(r2.pass);
    }
    SECTION("distinct orbits: both sides vanish") {
        Ctx c(fixtures::a3_flip());
        auto res = check_delta_prop(c.od, c.F, 0, 1, 10);
        INFO(res.witness);
        CHECK(res.pass);
    }
    SECTION("same orbit, distinct nodes") {
        Ctx c(fixtures::a3_flip());
        auto res = check_delta_prop(c.od, c.F, 0, 2, 10);
        INFO(res.witness);
        CHECK(res.pass);
    }
    SECTION("untwisted diagonal") {
        Ctx c(fixtures::a1_untwisted());
        auto res = check_delta_prop(c.od, c.F, 0, 0, 12);
        INFO(res.witness);
        CHECK(res.pass);
    }
}

TEST_CASE("CGJT lemma") {
    CoeffField F(2);
    SECTION("single pole gives the delta function") {
        auto res = check_cgjt(F, {F.one()}, {-1}, 10);
        INFO(res.witness);
        CHECK(res.pass);
    }
    SECTION("no poles: polynomials agree") {
        auto res = check_cgjt(F, {F.q_pow2(2), F.q_pow2(-2)}, {2, 1}, 10);
        INFO(res.witness);
        CHECK(res.pass);
    }
    SECTION("two poles at q and q^{-1}") {
        auto res = check_cgjt(F, {F.q_pow2(2), F.q_pow2(-2)}, {-1, -1}, 10);
        INFO(res.witness);
        CHECK(res.pass);
    }
    SECTION("degenerate constants rejected") {
        CHECK_THROWS_AS(check_cgjt(F, {F.one(), F.one()}, {-1, -1}, 5), degenerate_constants);
        CHECK_THROWS_AS(check_cgjt(F, {F.zero()}, {-1}, 5), degenerate_constants);
        CHECK_THROWS_AS(check_cgjt(F, {F.one()}, {-2}, 5), degenerate_constants);
    }
    SECTION("randomized instances, constants of the form zeta^j v^m") {
        std::mt19937 rng(424242u);
        int done = 0;
        while (done < 50) {
            int t = static_cast<int>(rng() % 3) + 1;
            std::vector<CoeffElem> cs;
            std::vector<long> as;
            bool ok = true;
            for (int u = 0; u < t; ++u) {
                int ze = static_cast<int>(rng() % 4);
                int ve = static_cast<int>(rng() % 7) - 3;
                CoeffElem c = F.monomial(ze, ve);
                for (auto& prev : cs)
                    if (prev == c) ok = false;
                cs.push_back(c);
                as.push_back(static_cast<long>(rng() % 4) - 1);
            }
            if (!ok) continue;
            auto res = check_cgjt(F, cs, as, 15);
            INFO(res.witness);
            CHECK(res.pass);
            ++done;
        }
    }
}

TEST_CASE("three-variable antisymmetrized identity") {
    CoeffField F(1);
    SECTION("exact polynomial route") { CHECK(check_ps0_poly(F)); }
    SECTION("truncated region route") { CHECK(check_ps0_series(F, 8)); }
}

TEST_CASE("Serre scalar identity") {
    CoeffField F(2);
    for (auto [di, dii] : {std::pair{1, 1}, std::pair{1, 2}, std::pair{2, 2}}) {
        for (int t : {1, -1}) {
            INFO("d_i=" << di << " d_ii=" << dii << " t=" << t);
            CHECK(check_serre_scalar(F, di, dii, t));
        }
    }
    SECTION("guards") {
        CHECK_THROWS_AS(check_serre_scalar(F, 1, 0, 1), inapplicable);
        CHECK_THROWS_AS(check_serre_scalar(F, 2, 3, 1), inapplicable);
    }
}

TEST_CASE("region discipline") {
    CoeffField F(2);
    TruncSeries a({"x"}, {{0, 4}}, regions::x_small);
    a.add_term({0}, F.one());
    TruncSeries b({"x"}, {{0, 4}}, regions::x_large);
    b.add_term({0}, F.one());
    CHECK_THROWS_AS(a + b, region_mismatch);
    CHECK_THROWS_AS(a * b, region_mismatch);
    TruncSeries c({"y"}, {{0, 4}}, regions::x_small);
    c.add_term({0}, F.one());
    CHECK_THROWS_AS(a + c, region_mismatch);
}

TEST_CASE("window is absorbing") {
    CoeffField F(2);
    TruncSeries a({"x"}, {{0, 6}}, regions::x_small);
    a.add_term({4}, F.one());
    TruncSeries p = a * a;  // x^2 * x^2 = x^4 falls outside the window
    CHECK(p.is_zero());
    a.add_term({8}, F.one());  // direct insertion outside the window is dropped
    CHECK(a.coeff({8}).is_zero());
}
