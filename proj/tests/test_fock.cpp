#include "catch_amalgamated.hpp"
#include "fixture_catalog.hpp"
#include "taffin/fock.hpp"

using namespace taffin;

namespace {

Algebra make(const fixtures::Fixture& f) { return Algebra(f.A, f.mu); }

FockVector vac(const Algebra& alg) {
    return FockVector::basis(alg.F, FockKey{HMonomial{}, LatticePoint{RootVec::zero(alg.od.nu)}});
}

}  // namespace

TEST_CASE("bracket constants") {
    SECTION("A2 flip, i=j=1, m=1") {
        Algebra alg = make(fixtures::a2_flip());
        CoeffElem expect = alg.F.q_pow2(2) + alg.F.q_pow2(-2) + alg.F.one();
        CHECK(alg.heis_bracket_constant(0, 0, 1) == expect);
    }
    SECTION("A3 flip fixed node vanishes at odd m") {
        Algebra alg = make(fixtures::a3_flip());
        for (long m = 1; m <= 9; m += 2) {
            CHECK(alg.heis_bracket_constant(1, 1, m).is_zero());
            CHECK(alg.heis_bracket_constant(1, 1, -m).is_zero());
        }
        CHECK_FALSE(alg.heis_bracket_constant(1, 1, 2).is_zero());
    }
    SECTION("untwisted m=1 is [a_ij]_q") {
        Algebra alg = make(fixtures::a2_untwisted());
        CHECK(alg.heis_bracket_constant(0, 1, 1) == alg.F.q_integer(-1));
    }
    SECTION("zero mode") {
        Algebra alg = make(fixtures::a2_flip());
        CHECK_THROWS_AS(alg.heis_bracket_constant(0, 0, 0), zero_mode);
    }
}

TEST_CASE("alpha action") {
    SECTION("single contraction") {
        Algebra alg = make(fixtures::a2_flip());
        FockVector v = apply_alpha(alg, 0, -1, vac(alg));
        FockVector out = apply_alpha(alg, 0, 1, v);
        FockVector expect = vac(alg) * (alg.F.q_pow2(2) + alg.F.q_pow2(-2) + alg.F.one());
        CHECK(out == expect);
    }
    SECTION("vacuum annihilation") {
        Algebra alg = make(fixtures::a2_flip());
        for (long m = 1; m <= 4; ++m) CHECK(apply_alpha(alg, 0, m, vac(alg)).is_zero());
    }
    SECTION("level constraint kills the operator") {
        Algebra alg = make(fixtures::a3_flip());
        CHECK(apply_alpha(alg, 1, -1, vac(alg)).is_zero());
        CHECK_FALSE(apply_alpha(alg, 1, -2, vac(alg)).is_zero());
        FockVector v = apply_alpha(alg, 0, -1, vac(alg));
        CHECK(apply_alpha(alg, 1, 1, v).is_zero());
    }
    SECTION("rotated index scales by xi^m") {
        Algebra alg = make(fixtures::a2_flip());
        FockVector base = apply_alpha(alg, 0, -3, vac(alg));
        FockVector rot = apply_alpha(alg, 1, -3, vac(alg));
        CHECK(rot == base * alg.F.from_cyclo(alg.F.xi(-3)));
    }
}

TEST_CASE("commutator as operator difference equals the constant") {
    // [alpha_{i,m}, alpha_{j,n}] = delta_{m+n,0} c_{ij}(m) Id on the degree <= 3 basis
    for (const auto& f : {fixtures::a2_flip(), fixtures::a3_flip(), fixtures::a2_untwisted()}) {
        Algebra alg = make(f);
        auto basis = fock_basis(alg, 3, default_lattice_support(alg.od, 1));
        for (int i : alg.od.reps)
            for (int j : alg.od.reps)
                for (long m = 1; m <= 3; ++m)
                    for (long n = -3; n <= 3; ++n) {
                        if (n == 0) continue;
                        for (const auto& key : basis) {
                            FockVector v = FockVector::basis(alg.F, key);
                            FockVector lhs = apply_alpha(alg, i, m, apply_alpha(alg, j, n, v)) -
                                             apply_alpha(alg, j, n, apply_alpha(alg, i, m, v));
                            FockVector rhs;
                            if (m + n == 0) rhs = v * alg.heis_bracket_constant(i, j, m);
                            INFO(f.name << " i=" << i << " j=" << j << " m=" << m << " n=" << n << " on " << key.str());
                            CHECK(lhs == rhs);
                        }
                    }
    }
}

TEST_CASE("antisymmetry of the bracket constants") {
    for (const auto& f : {fixtures::a2_flip(), fixtures::a3_flip(), fixtures::a4_flip()}) {
        Algebra alg = make(f);
        for (int i = 0; i < alg.od.nu; ++i)
            for (int j = 0; j < alg.od.nu; ++j)
                for (long m = 1; m <= 4; ++m)
                    CHECK(alg.heis_bracket_constant(i, j, m) == -alg.heis_bracket_constant(j, i, -m));
    }
}

TEST_CASE("lattice action") {
    Algebra alg = make(fixtures::a2_flip());
    RootVec a1 = alg.od.alpha(0), a2 = alg.od.alpha(1);
    SECTION("commuting applications differ by the commutator map") {
        FockVector x = apply_lattice(alg, a1, apply_lattice(alg, a2, vac(alg)));
        FockVector y = apply_lattice(alg, a2, apply_lattice(alg, a1, vac(alg)));
        CHECK(x == y * alg.F.from_cyclo(commutator_map(alg.od, alg.F, a1, a2)));
    }
    SECTION("e_0 is the identity") {
        CHECK(apply_lattice(alg, RootVec::zero(2), vac(alg)) == vac(alg));
    }
    SECTION("e_{a_1} t_{a_1} with trivial cocycle value") {
        FockVector t1 = apply_lattice(alg, a1, vac(alg));
        FockVector t2 = apply_lattice(alg, a1, t1);
        FockKey expect{HMonomial{}, LatticePoint{a1 + a1}};
        REQUIRE(t2.size() == 1);
        CHECK(t2.terms().begin()->first == expect);
        CHECK(t2.terms().begin()->second.is_one());
    }
    SECTION("associativity against the 2-cocycle") {
        std::vector<RootVec> pts = {a1, a2, a1 + a2, RootVec::zero(2) - a1};
        for (const auto& x : pts)
            for (const auto& y : pts)
                for (const auto& z : pts) {
                    FockVector t = FockVector::basis(alg.F, FockKey{HMonomial{}, LatticePoint{z}});
                    FockVector lhs = apply_lattice(alg, x, apply_lattice(alg, y, t));
                    FockVector rhs = apply_lattice(alg, x + y, t) * alg.eps_coeff(x, y);
                    CHECK(lhs == rhs);
                }
    }
}

TEST_CASE("grading exponents") {
    SECTION("A2 flip") {
        Algebra alg = make(fixtures::a2_flip());
        CHECK(grading_exponent(alg, alg.od.alpha(0), alg.od.alpha(0)) == 1);
        CHECK(alg.od.form_alpha0_self(0) == 1);  // shift 1/2 for the X operator
    }
    SECTION("A3 flip fixed node") {
        Algebra alg = make(fixtures::a3_flip());
        CHECK(alg.od.form_alpha0_self(1) == 4);
    }
    SECTION("beta = 0") {
        Algebra alg = make(fixtures::a3_flip());
        CHECK(grading_exponent(alg, alg.od.alpha(0), RootVec::zero(3)) == 0);
    }
}

TEST_CASE("basis enumeration") {
    SECTION("vacuum only") {
        Algebra alg = make(fixtures::a2_flip());
        auto b = fock_basis(alg, 0, {RootVec::zero(2)});
        REQUIRE(b.size() == 1);
        CHECK(b[0].m.f.empty());
    }
    SECTION("A2 flip degree 2") {
        Algebra alg = make(fixtures::a2_flip());
        auto b = fock_basis(alg, 2, {RootVec::zero(2)});
        CHECK(b.size() == 4);  // 1, a_{1,-1}, a_{1,-2}, a_{1,-1}^2
    }
    SECTION("A3 flip degree 2 respects levels") {
        Algebra alg = make(fixtures::a3_flip());
        auto b = fock_basis(alg, 2, {RootVec::zero(3)});
        CHECK(b.size() == 5);  // 1, a_{1,-1}, a_{1,-2}, a_{1,-1}^2, a_{2,-2}
    }
    SECTION("serialized forms") {
        Algebra alg = make(fixtures::a3_flip());
        auto b = fock_basis(alg, 2, {alg.od.alpha(0)});
        bool found = false;
        for (auto& k : b)
            if (k.str() == "a[1,-1]^2 * t[1,0,0]") found = true;
        CHECK(found);
    }
}
