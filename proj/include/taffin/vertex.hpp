#pragma once

#include <functional>
#include <map>
#include <tuple>
#include <vector>

#include "taffin/distcalc.hpp"
#include "taffin/fock.hpp"

namespace taffin {

/// Creation polynomial: element of the symmetric algebra acting by multiplication.
using FockPoly = std::map<HMonomial, CoeffElem>;

/// X^{sign}_{rep}(zeta^{ze} v^{ve} z); rotated indices enter through the scale
/// via x_{mu(i)}(z) = x_i(xi^{-1} z).
struct CurrentHandle {
    int rep = 0;
    int sign = 1;
    Scale arg;
};

inline CurrentHandle make_current(const Algebra& alg, int i, int sign, Scale extra = {}) {
    int rep = alg.od.rep_of[static_cast<std::size_t>(i)];
    int rot = alg.od.rot_of[static_cast<std::size_t>(i)];
    return CurrentHandle{rep, sign, Scale{extra.ze - 2 * rot, extra.ve}};
}

namespace detail {

inline CoeffElem scale_pow(const CoeffField& F, Scale c, long e2) {
    // (zeta^{ze} v^{ve})^{e2/2}; the exponent must come out integral
    if ((static_cast<long>(c.ze) * e2) % 2 != 0 || (static_cast<long>(c.ve) * e2) % 2 != 0)
        throw invariant_violation("scale_pow: fractional exponent");
    return F.from_cyclo(F.zeta(static_cast<long>(c.ze) * e2 / 2)) * F.v_pow(static_cast<long>(c.ve) * e2 / 2);
}

}  // namespace detail

/// exp(sum_{r>0} u(r) alpha_{idx,r} z^{-r}) applied to v; returns a -> coefficient of z^{-a}.
/// Annihilation nilpotence makes the expansion finite.
inline std::map<int, FockVector> exp_annihilate(const Algebra& alg, int idx,
                                                const std::function<CoeffElem(long)>& u, const FockVector& v) {
    std::map<int, FockVector> out;
    out[0] = v;
    std::map<int, FockVector> cur;
    cur[0] = v;
    long depth = 0;
    int rep = alg.od.rep_of[static_cast<std::size_t>(idx)];
    while (!cur.empty()) {
        ++depth;
        std::map<int, FockVector> next;
        for (const auto& [a, vec] : cur) {
            int maxdeg = 0;
            for (const auto& [k, c] : vec.terms()) maxdeg = std::max(maxdeg, k.m.degree());
            for (long r = 1; r <= maxdeg; ++r) {
                if (!alg.level_allowed(rep, r)) continue;
                FockVector w = apply_alpha(alg, idx, r, vec);
                if (w.is_zero()) continue;
                CoeffElem ur = u(r);
                if (ur.is_zero()) continue;
                w = w * (ur * alg.F.from_rat(rat_frac(1, depth)));
                int key = a + static_cast<int>(r);
                auto it = next.find(key);
                if (it == next.end())
                    next.emplace(key, std::move(w));
                else
                    it->second = it->second + w;
            }
        }
        for (auto it = next.begin(); it != next.end();) {
            if (it->second.is_zero())
                it = next.erase(it);
            else
                ++it;
        }
        for (const auto& [a, vec] : next) {
            auto it = out.find(a);
            if (it == out.end())
                out.emplace(a, vec);
            else
                it->second = it->second + vec;
        }
        cur = std::move(next);
    }
    return out;
}

/// Degree-b part of exp(sum_{r>0} w(r) alpha_{idx,-r} z^r) as a creation polynomial.
inline FockPoly exp_create_degree(const Algebra& alg, int idx, const std::function<CoeffElem(long)>& w, int b) {
    int rep = alg.od.rep_of[static_cast<std::size_t>(idx)];
    int rot = alg.od.rot_of[static_cast<std::size_t>(idx)];
    std::vector<FockPoly> E(static_cast<std::size_t>(b) + 1);
    E[0][HMonomial{}] = alg.F.one();
    for (int n = 1; n <= b; ++n) {
        FockPoly acc;
        for (long r = 1; r <= n; ++r) {
            if (!alg.level_allowed(rep, r)) continue;
            CoeffElem wr = w(r);
            if (wr.is_zero()) continue;
            // alpha_{idx,-r} = xi^{-rot r} alpha_{rep,-r}
            CoeffElem f = wr * alg.F.from_rat(r) * alg.F.from_cyclo(alg.F.xi(-static_cast<long>(rot) * r));
            for (const auto& [m, c] : E[static_cast<std::size_t>(n - r)]) {
                HMonomial nm = m.with_factor(rep, static_cast<int>(r));
                CoeffElem add = c * f;
                auto it = acc.find(nm);
                if (it == acc.end())
                    acc.emplace(std::move(nm), std::move(add));
                else
                    it->second = it->second + add;
            }
        }
        for (auto& [m, c] : acc) c = c * alg.F.from_rat(rat_frac(1, n));
        for (auto it = acc.begin(); it != acc.end();) {
            if (it->second.is_zero())
                it = acc.erase(it);
            else
                ++it;
        }
        E[static_cast<std::size_t>(n)] = std::move(acc);
    }
    return E[static_cast<std::size_t>(b)];
}

inline FockVector poly_apply(const FockPoly& p, const FockVector& v) {
    FockVector out;
    for (const auto& [pm, pc] : p)
        for (const auto& [k, c] : v.terms()) {
            HMonomial m = k.m;
            for (const auto& f : pm.f) m = m.with_factor(f.first, f.second);
            out.add_term(FockKey{m, k.t}, pc * c);
        }
    return out;
}

namespace detail {

/// Cached degree-b creation part of E_-(s alpha_idx, zeta^{ze} v^{ve} z).
inline const FockPoly& eminus_poly(const Algebra& alg, int idx, int s, Scale c, int b) {
    std::array<long, 6> key{0 /* E kind */, idx, s, c.ze, c.ve, b};
    auto it = alg.create_cache.find(key);
    if (it != alg.create_cache.end()) return it->second;
    auto w = [&](long r) { return alg.F.from_rat(s) * scale_pow(alg.F, c, 2 * r) / alg.F.q_integer(r); };
    return alg.create_cache.emplace(key, exp_create_degree(alg, idx, w, b)).first->second;
}

}  // namespace detail

/// The spec-level E operator: E_{+}(s alpha_i, c z) (pm = +1) or E_{-}(s alpha_i, c z)
/// (pm = -1) applied to v; keys are z-exponents (E_+ contributes -a <= 0, E_- b >= 0).
inline std::map<int, FockVector> apply_E(const Algebra& alg, int pm, int i, int s, Scale c, const FockVector& v,
                                         int lo, int hi) {
    std::map<int, FockVector> out;
    if (pm > 0) {
        auto u = [&](long r) {
            return alg.F.from_rat(-s) * detail::scale_pow(alg.F, c, -2 * r) / alg.F.q_integer(r);
        };
        for (auto& [a, vec] : exp_annihilate(alg, i, u, v))
            if (-a >= lo && -a <= hi) out.emplace(-a, std::move(vec));
        return out;
    }
    for (int b = std::max(lo, 0); b <= hi; ++b) {
        FockVector r = poly_apply(detail::eminus_poly(alg, i, s, c, b), v);
        if (!r.is_zero()) out.emplace(b, std::move(r));
    }
    return out;
}

/// Phi^{sign}_i(c z) mode action; Phi^+ takes the coefficient of z^{-m}, Phi^- of z^{+m}.
inline FockVector apply_Phi_mode(const Algebra& alg, int i, int sign, int m, const FockVector& v, Scale c = {}) {
    if (m < 0) throw negative_mode("apply_Phi_mode: m < 0");
    const CoeffField& F = alg.F;
    CoeffElem qfac = F.q_pow2(2) - F.q_pow2(-2);  // q - q^{-1}
    FockVector out;
    if (sign > 0) {
        auto u = [&](long r) { return qfac * detail::scale_pow(F, c, -2 * r); };
        auto modes = exp_annihilate(alg, i, u, v);
        auto it = modes.find(m);
        if (it == modes.end()) return out;
        for (const auto& [k, cc] : it->second.terms()) {
            long e = alg.od.form_alpha0(i, k.t.beta);
            out.add_term(k, cc * F.q_pow2(2 * e));
        }
        return out;
    }
    auto w = [&](long r) { return -qfac * detail::scale_pow(F, c, 2 * r); };
    FockPoly p = exp_create_degree(alg, i, w, m);
    FockVector applied = poly_apply(p, v);
    for (const auto& [k, cc] : applied.terms()) {
        long e = alg.od.form_alpha0(i, k.t.beta);
        out.add_term(k, cc * F.q_pow2(-2 * e));
    }
    return out;
}

/// k_alpha acts diagonally as q^{sign <alpha_(0)|beta>}.
inline FockVector apply_k(const Algebra& alg, const RootVec& alpha, int sign, const FockVector& v) {
    FockVector out;
    RootVec a0 = alg.od.alpha0(alpha);
    for (const auto& [k, c] : v.terms()) out.add_term(k, c * alg.F.q_pow2(2 * sign * alg.od.form(a0, k.t.beta)));
    return out;
}

/// epsilon_i^2 = d_i [d_i]_q / [2]_{q^{d_ii/2}} when d_ii > 0, else d_i [d_i]_q.
inline CoeffElem epsilon_sq(const Algebra& alg, int i) {
    int rep = alg.od.rep_of[static_cast<std::size_t>(i)];
    long di = alg.od.d_plus[static_cast<std::size_t>(rep)];
    long dii = alg.od.d[static_cast<std::size_t>(rep)][static_cast<std::size_t>(rep)];
    CoeffElem base = alg.F.from_rat(di) * alg.F.q_integer(di);
    if (dii > 0) base = base / (alg.F.q_pow2(dii) + alg.F.q_pow2(-dii));
    return base;
}

/// All modes of X^{sign}_{rep}(c z) on v with doubled mode in [lo2, hi2].
/// X = E_-(s a_i, q^{-s/2} c z) E_+(s a_i, q^{s/2} c z) e_{s a_i} (c z)^{s a_{i(0)} + <a_{i(0)}|a_i>/2}.
inline std::map<int, FockVector> apply_X_modes(const Algebra& alg, const CurrentHandle& h, const FockVector& v,
                                               int lo2, int hi2) {
    std::map<int, FockVector> out;
    const CoeffField& F = alg.F;
    int rep = h.rep;
    int s = h.sign;
    long h_self = alg.od.form_alpha0_self(rep);
    RootVec salpha = s * alg.od.alpha(rep);

    Scale cplus{h.arg.ze, h.arg.ve + s};   // E_+ argument scale
    Scale cminus{h.arg.ze, h.arg.ve - s};  // E_- argument scale
    auto u = [&](long r) { return F.from_rat(-s) * detail::scale_pow(F, cplus, -2 * r) / F.q_integer(r); };

    for (const auto& [key, coeff] : v.terms()) {
        long s2 = 2 * s * alg.od.form_alpha0(rep, key.t.beta) + h_self;  // doubled diagonal exponent
        CoeffElem c0 = coeff * alg.eps_coeff(salpha, key.t.beta) * detail::scale_pow(F, h.arg, s2);
        FockVector base;
        base.add_term(FockKey{key.m, LatticePoint{salpha + key.t.beta}}, c0);
        auto eplus = exp_annihilate(alg, rep, u, base);
        for (const auto& [a, vec] : eplus) {
            // z-exponent: s2/2 - a + b = -m  =>  2b = 2a - m2 - s2
            for (int m2 = lo2; m2 <= hi2; ++m2) {
                long b2 = 2L * a - m2 - s2;
                if (b2 < 0 || b2 % 2 != 0) continue;
                const FockPoly& p = detail::eminus_poly(alg, rep, s, cminus, static_cast<int>(b2 / 2));
                if (p.empty()) continue;
                FockVector r = poly_apply(p, vec);
                if (r.is_zero()) continue;
                auto it = out.find(m2);
                if (it == out.end())
                    out.emplace(m2, std::move(r));
                else
                    it->second = it->second + r;
            }
        }
    }
    for (auto it = out.begin(); it != out.end();) {
        if (it->second.is_zero())
            it = out.erase(it);
        else
            ++it;
    }
    return out;
}

inline FockVector apply_X_mode(const Algebra& alg, const CurrentHandle& h, int m2, const FockVector& v) {
    auto modes = apply_X_modes(alg, h, v, m2, m2);
    auto it = modes.find(m2);
    return it == modes.end() ? FockVector() : it->second;
}

/// One factor of a normal-ordered product.
struct XSpec {
    int idx = 0;   // any index; reduced to (rep, rotation scale)
    int sign = 1;
    Scale arg;     // additional argument scale
};

/// Normal-ordered product of up to three X factors applied to v: all creation parts
/// left, then annihilation parts, then lattice operators, then the diagonal monomials
/// (with the cross terms produced by moving the diagonals to the right).
/// Returns (doubled modes of z_1..z_n) -> coefficient vector. An optional window on
/// the total doubled mode prunes tuples outside a diagonal band.
inline std::map<std::vector<int>, FockVector> normal_ordered_apply(const Algebra& alg, const std::vector<XSpec>& specs,
                                                                   const FockVector& v,
                                                                   const std::vector<std::pair<int, int>>& win2,
                                                                   std::pair<int, int> total_win2 = {-1 << 28, 1 << 28}) {
    if (specs.empty() || specs.size() > 3) throw unsupported_arity("normal_ordered_apply: arity must be 1..3");
    if (win2.size() != specs.size()) throw index_out_of_range("normal_ordered_apply: window arity mismatch");
    const CoeffField& F = alg.F;
    std::size_t n = specs.size();

    std::vector<CurrentHandle> hs;
    hs.reserve(n);
    for (const auto& sp : specs) hs.push_back(make_current(alg, sp.idx, sp.sign, sp.arg));

    std::map<std::vector<int>, FockVector> out;
    for (const auto& [key, coeff] : v.terms()) {
        // diagonal doubled exponents on the original sector, plus the cross terms
        std::vector<long> E2(n);
        for (std::size_t j = 0; j < n; ++j) {
            long e = 2 * hs[j].sign * alg.od.form_alpha0(hs[j].rep, key.t.beta) + alg.od.form_alpha0_self(hs[j].rep);
            for (std::size_t k = j + 1; k < n; ++k)
                e += 2L * hs[j].sign * hs[k].sign * alg.od.form_alpha0(hs[j].rep, alg.od.alpha(hs[k].rep));
            E2[j] = e;
        }
        // lattice operators, rightmost first
        CoeffElem c0 = coeff;
        RootVec beta = key.t.beta;
        for (std::size_t j = n; j-- > 0;) {
            RootVec sa = hs[j].sign * alg.od.alpha(hs[j].rep);
            c0 = c0 * alg.eps_coeff(sa, beta);
            beta = sa + beta;
        }
        for (std::size_t j = 0; j < n; ++j) c0 = c0 * detail::scale_pow(F, hs[j].arg, E2[j]);
        if (c0.is_zero()) continue;

        // annihilation exponentials, rightmost factor first
        std::map<std::vector<int>, FockVector> layer;
        {
            FockVector base;
            base.add_term(FockKey{key.m, LatticePoint{beta}}, c0);
            layer.emplace(std::vector<int>(n, 0), std::move(base));
        }
        for (std::size_t j = n; j-- > 0;) {
            Scale cplus{hs[j].arg.ze, hs[j].arg.ve + hs[j].sign};
            auto u = [&](long r) {
                return F.from_rat(-hs[j].sign) * detail::scale_pow(F, cplus, -2 * r) / F.q_integer(r);
            };
            std::map<std::vector<int>, FockVector> next;
            for (const auto& [mk, vec] : layer) {
                for (auto& [a, res] : exp_annihilate(alg, hs[j].rep, u, vec)) {
                    std::vector<int> nk = mk;
                    nk[j] = a;
                    auto it = next.find(nk);
                    if (it == next.end())
                        next.emplace(std::move(nk), std::move(res));
                    else
                        it->second = it->second + res;
                }
            }
            layer = std::move(next);
        }
        // creation exponentials per requested mode tuple
        std::vector<int> m2(n);
        std::function<void(std::size_t, const FockVector&, const std::vector<int>&)> emit =
            [&](std::size_t j, const FockVector& vec, const std::vector<int>& as) {
                if (j == n) {
                    auto it = out.find(m2);
                    if (it == out.end())
                        out.emplace(m2, vec);
                    else
                        it->second = it->second + vec;
                    return;
                }
                int partial = 0;
                for (std::size_t k = 0; k < j; ++k) partial += m2[k];
                int rest_lo = 0, rest_hi = 0;
                for (std::size_t k = j + 1; k < n; ++k) {
                    rest_lo += win2[k].first;
                    rest_hi += win2[k].second;
                }
                Scale cminus{hs[j].arg.ze, hs[j].arg.ve - hs[j].sign};
                for (m2[j] = win2[j].first; m2[j] <= win2[j].second; ++m2[j]) {
                    if (partial + m2[j] + rest_hi < total_win2.first || partial + m2[j] + rest_lo > total_win2.second)
                        continue;
                    long b2 = 2L * as[j] - m2[j] - E2[j];
                    if (b2 < 0 || b2 % 2 != 0) continue;
                    const FockPoly& p = detail::eminus_poly(alg, hs[j].rep, hs[j].sign, cminus, static_cast<int>(b2 / 2));
                    if (p.empty()) continue;
                    FockVector r = poly_apply(p, vec);
                    if (r.is_zero()) continue;
                    emit(j + 1, r, as);
                }
            };
        for (const auto& [as, vec] : layer) emit(0, vec, as);
    }
    for (auto it = out.begin(); it != out.end();) {
        if (it->second.is_zero())
            it = out.erase(it);
        else
            ++it;
    }
    return out;
}

}  // namespace taffin
