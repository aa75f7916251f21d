#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "taffin/cartan.hpp"
#include "taffin/distcalc.hpp"
#include "taffin/mpoly.hpp"

namespace taffin {

enum class RelId { Q0, Q1, Q2, Q3, Q4, Q5, Q6, Q7, Q8, Q9, Q10, Q4p, Q5p, Q6p, H1, Q9p };

inline std::string rel_name(RelId id) {
    switch (id) {
        case RelId::Q0: return "Q0";
        case RelId::Q1: return "Q1";
        case RelId::Q2: return "Q2";
        case RelId::Q3: return "Q3";
        case RelId::Q4: return "Q4";
        case RelId::Q5: return "Q5";
        case RelId::Q6: return "Q6";
        case RelId::Q7: return "Q7";
        case RelId::Q8: return "Q8";
        case RelId::Q9: return "Q9";
        case RelId::Q10: return "Q10";
        case RelId::Q4p: return "Q4p";
        case RelId::Q5p: return "Q5p";
        case RelId::Q6p: return "Q6p";
        case RelId::H1: return "H1";
        case RelId::Q9p: return "Q9p";
    }
    return "?";
}

inline std::optional<RelId> rel_parse(const std::string& s) {
    static const std::map<std::string, RelId> tab{
        {"Q0", RelId::Q0},   {"Q1", RelId::Q1},   {"Q2", RelId::Q2},   {"Q3", RelId::Q3},
        {"Q4", RelId::Q4},   {"Q5", RelId::Q5},   {"Q6", RelId::Q6},   {"Q7", RelId::Q7},
        {"Q8", RelId::Q8},   {"Q9", RelId::Q9},   {"Q10", RelId::Q10}, {"Q4p", RelId::Q4p},
        {"Q5p", RelId::Q5p}, {"Q6p", RelId::Q6p}, {"H1", RelId::H1},   {"Q9p", RelId::Q9p}};
    auto it = tab.find(s);
    if (it == tab.end()) return std::nullopt;
    return it->second;
}

enum class QiKind { q, q_di, q_di_si };

inline std::string qi_name(QiKind k) {
    switch (k) {
        case QiKind::q: return "q";
        case QiKind::q_di: return "q^{d_i}";
        case QiKind::q_di_si: return "q^{d_i/s_i}";
    }
    return "?";
}

/// F_ij^s(z, w) = prod_{k in Gamma_ij} (z - xi^k q^{s a_{i mu^k(j)}} w), variables (z, w).
inline MPoly build_F(const OrbitData& od, const CoeffField& F, int i, int j, int s) {
    MPoly acc = MPoly::constant(2, F.one());
    for (int k : od.gamma[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) {
        long a = od.a_mu(i, k, j);
        MPoly f(2);
        f.add_term({1, 0}, F.one());
        f.add_term({0, 1}, -(F.from_cyclo(F.xi(k)) * F.q_pow2(2 * s * a)));
        acc = acc * f;
    }
    return acc;
}

/// G_ij^s(z, w) = prod_{k in Gamma_ij} (q^{s a_{i mu^k(j)}} z - xi^k w).
inline MPoly build_G(const OrbitData& od, const CoeffField& F, int i, int j, int s) {
    MPoly acc = MPoly::constant(2, F.one());
    for (int k : od.gamma[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) {
        long a = od.a_mu(i, k, j);
        MPoly f(2);
        f.add_term({1, 0}, F.q_pow2(2 * s * a));
        f.add_term({0, 1}, -F.from_cyclo(F.xi(k)));
        acc = acc * f;
    }
    return acc;
}

/// Univariate specializations G^+_ij(1,x), F^+_ij(1,x) as polynomials in x.
inline std::pair<MPoly, MPoly> g_fraction(const OrbitData& od, const CoeffField& F, int i, int j) {
    MPoly num = MPoly::constant(1, F.one());
    MPoly den = MPoly::constant(1, F.one());
    for (int k : od.gamma[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) {
        long a = od.a_mu(i, k, j);
        MPoly n(1), d(1);
        n.add_term({0}, F.q_pow2(2 * a));
        n.add_term({1}, -F.from_cyclo(F.xi(k)));
        d.add_term({0}, F.one());
        d.add_term({1}, -(F.from_cyclo(F.xi(k)) * F.q_pow2(2 * a)));
        num = num * n;
        den = den * d;
    }
    return {num, den};
}

/// g_ij(x) = G^+_ij(1,x)/F^+_ij(1,x) expanded for |x| < 1, to order D.
inline TruncSeries expand_g(const OrbitData& od, const CoeffField& F, int i, int j, int D) {
    if (D < 0) throw index_out_of_range("expand_g: negative order");
    auto [num, den] = g_fraction(od, F, i, j);
    TruncSeries ns({"x"}, {{0, 2 * D}}, regions::x_small);
    for (const auto& [e, c] : num.terms()) ns.add_term({2 * e[0]}, c);
    TruncSeries ds({"x"}, {{0, 2 * D}}, regions::x_small);
    for (const auto& [e, c] : den.terms()) ds.add_term({2 * e[0]}, c);
    return ns * inverse_unit(ds, F);
}

/// p_ij^s(z,w) = (z^{d_ii} + q^{-s d_ii} w^{d_ii}) (q^{2s d_ij} z^{d_ij} - w^{d_ij}) / (q^{2s d_i} z^{d_i} - w^{d_i}).
inline MPoly build_p_ij(const OrbitData& od, const CoeffField& F, int i, int j, int s) {
    if (od.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] >= 0 || od.same_orbit(i, j))
        throw inapplicable("p_ij: needs a_ij < 0 and i not in the orbit of j");
    int dii = od.d[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
    int dij = od.d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    int di = od.d_plus[static_cast<std::size_t>(i)];
    if (dij % di != 0)
        throw invariant_violation("p_ij: d_i does not divide d_ij");
    MPoly first(2);
    first.add_term({dii, 0}, F.one());
    first.add_term({0, dii}, F.q_pow2(-2 * s * dii));
    MPoly num(2);
    num.add_term({dij, 0}, F.q_pow2(4 * s * dij));
    num.add_term({0, dij}, -F.one());
    MPoly den(2);
    den.add_term({di, 0}, F.q_pow2(4 * s * di));
    den.add_term({0, di}, -F.one());
    return first * divexact(num, den);
}

/// Trivariate Serre kernel from raw invariants; t is the reading of the paper's
/// "-/+" pair (the x^eps relation uses t = -eps).
inline MPoly build_p_i_raw(const CoeffField& F, int d_i, int d_ii, int t) {
    if (d_ii <= 0) throw inapplicable("p_i: needs d_ii > 0");
    if (d_ii % d_i != 0) throw invariant_violation("p_i: d_i does not divide d_ii");
    MPoly acc = serre_first_factor(F, d_ii, t);
    auto pair_factor = [&](int a, int b, int d, const CoeffElem& cb) {
        MPoly p(3);
        MPoly::Key e(3, 0);
        e[static_cast<std::size_t>(a)] = d;
        p.add_term(e, F.one());
        MPoly::Key f(3, 0);
        f[static_cast<std::size_t>(b)] = d;
        p.add_term(f, cb);
        return p;
    };
    for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b) {
            MPoly num = pair_factor(a, b, d_ii, -F.one()) * pair_factor(a, b, d_ii, -F.q_pow2(4 * t * d_ii));
            MPoly den = pair_factor(a, b, d_i, -F.one()) * pair_factor(a, b, d_i, -F.q_pow2(4 * t * d_i));
            acc = acc * divexact(num, den);
        }
    return acc;
}

inline MPoly build_p_i(const OrbitData& od, const CoeffField& F, int i, int t) {
    return build_p_i_raw(F, od.d_plus[static_cast<std::size_t>(i)], od.d[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)], t);
}

/// (1/m) sum_k xi^{mk} [m a_{i mu^k(j)}]_q [m]_{q^c} with the level-1 value [m]_{q^c} -> [m]_q.
inline CoeffElem hform_constant(const OrbitData& od, const CoeffField& F, int i, int j, long m) {
    if (m == 0) throw zero_mode("hform_constant: m = 0");
    CoeffElem sum = F.zero();
    for (int k = 0; k < od.N; ++k) {
        long a = od.a_mu(i, k, j);
        if (a == 0) continue;
        sum = sum + F.from_cyclo(F.xi(m * k)) * F.q_integer(m * a);
    }
    return sum * F.from_rat(rat_frac(1, m)) * F.q_integer(m);
}

/// Constant in [h_{i,m}, x^eps_{j,n}] = c * x^eps_{j,m+n} at c = 1:
/// eps (1/m) sum_k xi^{mk} [m a_{i mu^k(j)}]_q v^{-eps |m|}.
inline CoeffElem hx_constant(const OrbitData& od, const CoeffField& F, int i, int j, long m, int eps) {
    if (m == 0) throw zero_mode("hx_constant: m = 0");
    CoeffElem sum = F.zero();
    for (int k = 0; k < od.N; ++k) {
        long a = od.a_mu(i, k, j);
        if (a == 0) continue;
        sum = sum + F.from_cyclo(F.xi(m * k)) * F.q_integer(m * a);
    }
    long absm = m < 0 ? -m : m;
    return sum * F.from_rat(rat_frac(eps, m)) * F.v_pow(-eps * absm);
}

struct DeltaTermSpec {
    int k = 0;
    Scale arg_plus;   // q^c xi^k at c = 1
    Scale arg_minus;  // q^{-c} xi^k at c = 1
};

struct RelationInstance {
    RelId id;
    int i = -1, j = -1;  // 0-based indices, -1 when not applicable
    int sign = 0;        // current sign eps where applicable
    std::string note;

    MPoly F_poly{2}, G_poly{2};            // Q8
    MPoly p2{2};                           // Q9
    CoeffElem two_qdij;                    // Q9
    MPoly p3{3};                           // Q10
    std::vector<DeltaTermSpec> deltas;     // Q7
    CoeffElem q7_pref;                     // Q7
    std::map<long, CoeffElem> constants;   // Q4p/H1/Q5p/Q6p: mode -> constant
    std::vector<CoeffElem> q9p_binomials;  // Q9p: r -> binomial
    Rat a_check_ij{0};                     // Q9p

    std::string instance_str() const {
        std::string s;
        if (i >= 0) s += "i=" + std::to_string(i + 1);
        if (j >= 0) s += (s.empty() ? "" : ",") + std::string("j=") + std::to_string(j + 1);
        if (sign != 0) s += (s.empty() ? "" : ",") + std::string("sign=") + (sign > 0 ? "+" : "-");
        return s;
    }
};

struct CatalogOptions {
    bool include_q9p = false;
    int hwindow = 3;        // window for the (Q4')-(Q6') mode constants
    QiKind qi = QiKind::q;  // interpretation of the undefined symbol q_i in (Q7)
};

inline CoeffElem q7_prefactor(const OrbitData& od, const CoeffField& F, int i, QiKind qi) {
    long di = od.d_plus[static_cast<std::size_t>(i)];
    long dii = od.d[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
    long e2 = 2;  // doubled exponent of q_i in v
    switch (qi) {
        case QiKind::q: e2 = 2; break;
        case QiKind::q_di: e2 = 2 * di; break;
        case QiKind::q_di_si: {
            long si_num = di + dii;  // s_i = 1 + d_ii/d_i, so d_i/s_i = d_i^2/(d_i + d_ii)
            if ((2 * di * di) % si_num != 0) throw inapplicable("q_i = q^{d_i/s_i}: non half-integer exponent");
            e2 = 2 * di * di / si_num;
            break;
        }
    }
    return (F.v_pow(e2) - F.v_pow(-e2)).inverse();
}

/// Relation catalog over orbit representatives (plus rotated partners where the
/// relation genuinely mixes orbits).
inline std::vector<RelationInstance> emit_catalog(const OrbitData& od, const CoeffField& F, const CatalogOptions& opt = {}) {
    if (!check_linking(od).ok) throw inapplicable("emit_catalog: linking condition fails");
    std::vector<RelationInstance> out;
    const auto& reps = od.reps;

    for (int i = 0; i < od.nu; ++i) {
        RelationInstance r;
        r.id = RelId::Q0;
        r.i = i;
        r.note = "X rotation holds by construction; Phi and k are checked directly";
        out.push_back(std::move(r));
    }
    {
        RelationInstance r;
        r.id = RelId::Q1;
        out.push_back(std::move(r));
    }
    for (int i : reps)
        for (int j : reps)
            for (int s : {1, -1}) {
                RelationInstance r;
                r.id = RelId::Q2;
                r.i = i;
                r.j = j;
                r.sign = s;
                out.push_back(std::move(r));
            }
    for (int i : reps)
        for (int s : {1, -1}) {
            RelationInstance r;
            r.id = RelId::Q3;
            r.i = i;
            r.sign = s;
            out.push_back(std::move(r));
        }
    for (int i : reps)
        for (int j : reps) {
            RelationInstance r;
            r.id = RelId::Q4;
            r.i = i;
            r.j = j;
            out.push_back(std::move(r));
        }
    for (RelId id : {RelId::H1, RelId::Q4p})
        for (int i : reps)
            for (int j : reps) {
                RelationInstance r;
                r.id = id;
                r.i = i;
                r.j = j;
                if (id == RelId::Q4p) r.note = "h-form of (Q4); identical to (H1) under h -> alpha at c = 1";
                for (long m = 1; m <= opt.hwindow; ++m) {
                    r.constants[m] = hform_constant(od, F, i, j, m);
                    r.constants[-m] = hform_constant(od, F, i, j, -m);
                }
                out.push_back(std::move(r));
            }
    for (RelId id : {RelId::Q5, RelId::Q6})
        for (int i : reps)
            for (int j : reps)
                for (int s : {1, -1}) {
                    RelationInstance r;
                    r.id = id;
                    r.i = i;
                    r.j = j;
                    r.sign = s;
                    out.push_back(std::move(r));
                }
    for (RelId id : {RelId::Q5p, RelId::Q6p})
        for (int i : reps)
            for (int j : reps)
                for (int s : {1, -1}) {
                    RelationInstance r;
                    r.id = id;
                    r.i = i;
                    r.j = j;
                    r.sign = s;
                    for (long m = 1; m <= opt.hwindow; ++m) {
                        long mm = id == RelId::Q5p ? m : -m;
                        r.constants[mm] = hx_constant(od, F, i, j, mm, s);
                    }
                    out.push_back(std::move(r));
                }
    for (int i : reps)
        for (int j = 0; j < od.nu; ++j) {
            RelationInstance r;
            r.id = RelId::Q7;
            r.i = i;
            r.j = j;
            r.q7_pref = q7_prefactor(od, F, i, opt.qi);
            r.note = "q_i interpreted as " + qi_name(opt.qi);
            for (int k = 0; k < od.N; ++k)
                if (od.mu_pow(k, j) == i) r.deltas.push_back({k, Scale{2 * k, 2}, Scale{2 * k, -2}});
            out.push_back(std::move(r));
        }
    for (int i : reps)
        for (int j = 0; j < od.nu; ++j)
            for (int s : {1, -1}) {
                RelationInstance r;
                r.id = RelId::Q8;
                r.i = i;
                r.j = j;
                r.sign = s;
                r.F_poly = build_F(od, F, i, j, s);
                r.G_poly = build_G(od, F, i, j, s);
                out.push_back(std::move(r));
            }
    for (int i : reps) {
        for (int oid = 0; oid < static_cast<int>(reps.size()); ++oid) {
            if (od.orbit_id[static_cast<std::size_t>(i)] == oid) continue;
            int jpick = -1;
            for (int j = 0; j < od.nu; ++j)
                if (od.orbit_id[static_cast<std::size_t>(j)] == oid && od.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] < 0) {
                    jpick = j;
                    break;
                }
            if (jpick < 0) continue;
            for (int s : {1, -1}) {
                RelationInstance r;
                r.id = RelId::Q9;
                r.i = i;
                r.j = jpick;
                r.sign = s;
                r.p2 = build_p_ij(od, F, i, jpick, s);
                r.two_qdij = F.q_integer(2, 2 * od.d[static_cast<std::size_t>(i)][static_cast<std::size_t>(jpick)]);
                out.push_back(std::move(r));
            }
        }
    }
    for (int i : reps) {
        if (od.d[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] == 0) continue;
        for (int s : {1, -1}) {
            RelationInstance r;
            r.id = RelId::Q10;
            r.i = i;
            r.sign = s;
            r.p3 = build_p_i(od, F, i, -s);  // x^eps pairs with t = -eps
            out.push_back(std::move(r));
        }
    }
    if (opt.include_q9p) {
        FoldedMatrix fm = folded_matrix(od);
        for (std::size_t ii = 0; ii < fm.reps.size(); ++ii)
            for (std::size_t jj = 0; jj < fm.reps.size(); ++jj) {
                if (ii == jj) continue;
                const Rat& aij = fm.a_check[ii][jj];
                if (aij >= 0) continue;
                if (aij.get_den() != 1) continue;  // folded entry not integral: no (Q9') form
                RelationInstance r;
                r.id = RelId::Q9p;
                r.i = fm.reps[ii];
                r.j = fm.reps[jj];
                r.note = "unverified-equivalence";
                r.a_check_ij = aij;
                long n9 = 1 - aij.get_num().get_si();
                long di = od.d_plus[static_cast<std::size_t>(fm.reps[ii])];
                Rat si = fm.s[ii];
                // base q^{d_i/s_i}: doubled v-exponent 2 d_i / s_i
                Rat base2 = Rat(2 * di) / si;
                if (base2.get_den() != 1) continue;
                for (long rr = 0; rr <= n9; ++rr) r.q9p_binomials.push_back(F.gauss_binom(n9, rr, base2.get_num().get_si()));
                out.push_back(std::move(r));
            }
    }
    return out;
}

}  // namespace taffin
