#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "taffin/cartan.hpp"
#include "taffin/coeff.hpp"
#include "taffin/errors.hpp"

namespace taffin {

/// Product of creation operators prod alpha_{i,-n}: sorted (rep index, level) factors.
struct HMonomial {
    std::vector<std::pair<int, int>> f;  // (rep, level > 0), sorted, repeats allowed

    int degree() const {
        int s = 0;
        for (auto& [i, n] : f) s += n;
        return s;
    }

    HMonomial with_factor(int rep, int level) const {
        HMonomial m = *this;
        m.f.emplace_back(rep, level);
        std::sort(m.f.begin(), m.f.end());
        return m;
    }

    HMonomial without_index(std::size_t pos) const {
        HMonomial m = *this;
        m.f.erase(m.f.begin() + static_cast<std::ptrdiff_t>(pos));
        return m;
    }

    friend bool operator==(const HMonomial& a, const HMonomial& b) { return a.f == b.f; }
    friend bool operator<(const HMonomial& a, const HMonomial& b) { return a.f < b.f; }

    std::string str() const {
        if (f.empty()) return "1";
        std::ostringstream os;
        for (std::size_t k = 0; k < f.size();) {
            std::size_t l = k;
            while (l < f.size() && f[l] == f[k]) ++l;
            if (k) os << "*";
            os << "a[" << f[k].first + 1 << "," << -f[k].second << "]";
            if (l - k > 1) os << "^" << l - k;
            k = l;
        }
        return os.str();
    }
};

struct LatticePoint {
    RootVec beta;
    friend bool operator==(const LatticePoint& a, const LatticePoint& b) { return a.beta == b.beta; }
    friend bool operator<(const LatticePoint& a, const LatticePoint& b) { return a.beta < b.beta; }
    std::string str() const {
        std::ostringstream os;
        os << "t[";
        for (std::size_t i = 0; i < beta.c.size(); ++i) os << (i ? "," : "") << beta.c[i];
        os << "]";
        return os.str();
    }
};

struct FockKey {
    HMonomial m;
    LatticePoint t;
    friend bool operator==(const FockKey& a, const FockKey& b) { return a.m == b.m && a.t == b.t; }
    friend bool operator<(const FockKey& a, const FockKey& b) {
        if (a.t < b.t) return true;
        if (b.t < a.t) return false;
        return a.m < b.m;
    }
    std::string str() const { return m.str() + " * " + t.str(); }
};

/// Finite linear combination of (monomial x lattice point) basis elements.
class FockVector {
public:
    FockVector() = default;

    static FockVector basis(const CoeffField& F, FockKey k) {
        FockVector v;
        v.t_.emplace(std::move(k), F.one());
        return v;
    }

    bool is_zero() const { return t_.empty(); }
    const std::map<FockKey, CoeffElem>& terms() const { return t_; }
    std::size_t size() const { return t_.size(); }

    void add_term(const FockKey& k, const CoeffElem& c) {
        if (c.is_zero()) return;
        auto it = t_.find(k);
        if (it == t_.end()) {
            t_.emplace(k, c);
        } else {
            it->second = it->second + c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }

    friend FockVector operator+(const FockVector& a, const FockVector& b) {
        FockVector r = a;
        for (const auto& [k, c] : b.t_) r.add_term(k, c);
        return r;
    }
    friend FockVector operator-(const FockVector& a, const FockVector& b) {
        FockVector r = a;
        for (const auto& [k, c] : b.t_) r.add_term(k, -c);
        return r;
    }
    friend FockVector operator*(const FockVector& a, const CoeffElem& s) {
        FockVector r;
        if (s.is_zero()) return r;
        for (const auto& [k, c] : a.t_) r.t_.emplace(k, c * s);
        return r;
    }
    friend bool operator==(const FockVector& a, const FockVector& b) { return a.t_ == b.t_; }
    friend bool operator!=(const FockVector& a, const FockVector& b) { return !(a.t_ == b.t_); }

    std::string str() const {
        if (t_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [k, c] : t_) {
            if (!first) os << " + ";
            first = false;
            os << "(" << c.str() << ")*" << k.str();
        }
        return os.str();
    }

private:
    std::map<FockKey, CoeffElem> t_;
};

/// Session context for one (A, mu) pair: field, orbit data, cocycle and caches.
class Algebra {
public:
    Algebra(const Gcm& A, const DiagramAut& mu)
        : od(validate(A, mu)), F(od.N), eps(Cocycle::build(od, F)) {}

    OrbitData od;
    CoeffField F;
    Cocycle eps;

    /// [alpha_{i,m}, alpha_{j,-m}] constant at level 1:
    /// (1/m) sum_k xi^{mk} [m <alpha_i | mu^k alpha_j>]_q [m]_q.
    const CoeffElem& heis_bracket_constant(int i, int j, long m) const {
        if (m == 0) throw zero_mode("heis_bracket_constant: m = 0");
        auto key = std::make_tuple(i, j, m);
        auto it = heis_cache_.find(key);
        if (it != heis_cache_.end()) return it->second;
        CoeffElem sum = F.zero();
        for (int k = 0; k < od.N; ++k) {
            long a = od.a_mu(i, k, j);
            if (a == 0) continue;
            sum = sum + F.from_cyclo(F.xi(m * k)) * F.q_integer(m * a);
        }
        sum = sum * F.from_rat(rat_frac(1, m)) * F.q_integer(m);
        return heis_cache_.emplace(key, std::move(sum)).first->second;
    }

    /// Levels of alpha_{i,m} are constrained to multiples of d_i = N/N_i.
    bool level_allowed(int rep, long m) const {
        long d = od.d_plus[static_cast<std::size_t>(rep)];
        return m % d == 0;
    }

    CoeffElem eps_coeff(const RootVec& a, const RootVec& b) const { return F.from_cyclo(eps.eps(F, a, b)); }

    /// memo for creation-exponential polynomials, keyed by (kind, rep, sign, ze, ve, degree)
    mutable std::map<std::array<long, 6>, std::map<HMonomial, CoeffElem>> create_cache;

private:
    mutable std::map<std::tuple<int, int, long>, CoeffElem> heis_cache_;
};

/// alpha_{i,m} for any index i (non-representatives reduce by alpha_{mu(i),m} = xi^m alpha_{i,m}).
inline FockVector apply_alpha(const Algebra& alg, int i, long m, const FockVector& v) {
    if (m == 0) throw zero_mode("apply_alpha: m = 0");
    int rep = alg.od.rep_of[static_cast<std::size_t>(i)];
    int rot = alg.od.rot_of[static_cast<std::size_t>(i)];
    FockVector out;
    if (!alg.level_allowed(rep, m)) return out;
    CoeffElem rot_factor = alg.F.from_cyclo(alg.F.xi(static_cast<long>(rot) * m));
    if (m < 0) {
        for (const auto& [k, c] : v.terms())
            out.add_term(FockKey{k.m.with_factor(rep, static_cast<int>(-m)), k.t}, c * rot_factor);
        return out;
    }
    for (const auto& [k, c] : v.terms()) {
        for (std::size_t pos = 0; pos < k.m.f.size(); ++pos) {
            if (pos > 0 && k.m.f[pos] == k.m.f[pos - 1]) continue;  // combine equal factors once
            auto [jrep, n] = k.m.f[pos];
            if (n != m) continue;
            long mult = 0;
            for (const auto& g : k.m.f)
                if (g == k.m.f[pos]) ++mult;
            const CoeffElem& bracket = alg.heis_bracket_constant(rep, jrep, m);
            if (bracket.is_zero()) continue;
            out.add_term(FockKey{k.m.without_index(pos), k.t}, c * rot_factor * bracket * alg.F.from_rat(mult));
        }
    }
    return out;
}

/// e_alpha: t_beta -> eps(alpha, beta) t_{alpha + beta}, extended linearly.
inline FockVector apply_lattice(const Algebra& alg, const RootVec& alpha, const FockVector& v) {
    FockVector out;
    for (const auto& [k, c] : v.terms()) {
        FockKey nk{k.m, LatticePoint{alpha + k.t.beta}};
        out.add_term(nk, c * alg.eps_coeff(alpha, k.t.beta));
    }
    return out;
}

/// <alpha_{(0)} | beta> (the z^{alpha_(0)} grading exponent on the t_beta sector).
inline long grading_exponent(const Algebra& alg, const RootVec& alpha, const RootVec& beta) {
    return alg.od.form(alg.od.alpha0(alpha), beta);
}

/// All level-admissible monomials of degree <= B over representatives, paired with the
/// given lattice support. Deterministic order.
inline std::vector<FockKey> fock_basis(const Algebra& alg, int B, const std::vector<RootVec>& support) {
    std::vector<HMonomial> monos;
    HMonomial cur;
    // factors in nondecreasing (rep, level) order to enumerate each multiset once
    std::function<void(std::size_t, int)> rec = [&](std::size_t rep_pos, int budget) {
        monos.push_back(cur);
        for (std::size_t rp = rep_pos; rp < alg.od.reps.size(); ++rp) {
            int rep = alg.od.reps[rp];
            int d = alg.od.d_plus[static_cast<std::size_t>(rep)];
            int min_level = d;
            if (!cur.f.empty() && cur.f.back().first == rep) min_level = std::max(min_level, cur.f.back().second);
            for (int n = min_level; n <= budget; n += d) {
                cur.f.emplace_back(rep, n);
                rec(rp, budget - n);
                cur.f.pop_back();
            }
        }
    };
    // enumeration keeps factors sorted, so each monomial appears exactly once
    rec(0, B);
    std::sort(monos.begin(), monos.end());
    monos.erase(std::unique(monos.begin(), monos.end()), monos.end());

    std::vector<FockKey> out;
    for (const auto& beta : support)
        for (const auto& m : monos) out.push_back(FockKey{m, LatticePoint{beta}});
    std::sort(out.begin(), out.end());
    return out;
}

/// Default lattice support: {0}, plus {+-alpha_rep} at height >= 1, plus pairwise sums
/// of distinct representatives at height >= 2.
inline std::vector<RootVec> default_lattice_support(const OrbitData& od, int height) {
    std::vector<RootVec> s;
    s.push_back(RootVec::zero(od.nu));
    if (height >= 1)
        for (int i : od.reps) {
            s.push_back(od.alpha(i));
            s.push_back(RootVec::zero(od.nu) - od.alpha(i));
        }
    if (height >= 2)
        for (std::size_t a = 0; a < od.reps.size(); ++a)
            for (std::size_t b = a + 1; b < od.reps.size(); ++b)
                s.push_back(od.alpha(od.reps[a]) + od.alpha(od.reps[b]));
    return s;
}

}  // namespace taffin
