#pragma once

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "taffin/coeff.hpp"
#include "taffin/errors.hpp"

namespace taffin {

/// Element of the root lattice Q = sum Z*alpha_i, stored by coordinates.
struct RootVec {
    std::vector<int> c;

    RootVec() = default;
    explicit RootVec(std::vector<int> coords) : c(std::move(coords)) {}
    static RootVec zero(int nu) { return RootVec(std::vector<int>(static_cast<std::size_t>(nu), 0)); }
    static RootVec basis(int nu, int i) {
        RootVec r = zero(nu);
        r.c[static_cast<std::size_t>(i)] = 1;
        return r;
    }

    int height() const {
        int h = 0;
        for (int x : c) h += x < 0 ? -x : x;
        return h;
    }

    friend RootVec operator+(const RootVec& a, const RootVec& b) {
        RootVec r = a;
        for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] += b.c[i];
        return r;
    }
    friend RootVec operator-(const RootVec& a, const RootVec& b) {
        RootVec r = a;
        for (std::size_t i = 0; i < r.c.size(); ++i) r.c[i] -= b.c[i];
        return r;
    }
    friend RootVec operator*(int s, const RootVec& a) {
        RootVec r = a;
        for (auto& x : r.c) x *= s;
        return r;
    }
    friend bool operator==(const RootVec& a, const RootVec& b) { return a.c == b.c; }
    friend bool operator<(const RootVec& a, const RootVec& b) { return a.c < b.c; }

    std::string str() const {
        std::ostringstream os;
        os << "[";
        for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
        os << "]";
        return os.str();
    }
};

struct Gcm {
    std::vector<std::vector<int>> a;
    int size() const { return static_cast<int>(a.size()); }
};

struct DiagramAut {
    std::vector<int> perm;   // 0-based images: i -> perm[i]
    int declared_order = 0;  // 0 = take the actual order
};

/// Gamma sets, d-invariants, orbits and the bilinear form of a validated (A, mu) pair.
class OrbitData {
public:
    int nu = 0;
    int N = 1;
    std::vector<std::vector<int>> a;
    std::vector<int> perm;
    std::vector<std::vector<int>> mu_pow_tab;                 // [k][i] = mu^k(i), k in [0,N)
    std::vector<std::vector<std::vector<int>>> gamma;         // [i][j] -> sorted k with a_{i mu^k(j)} != 0
    std::vector<std::vector<std::vector<int>>> gamma_plus;    // a_{i mu^k(j)} > 0
    std::vector<std::vector<std::vector<int>>> gamma_minus;   // a_{i mu^k(j)} < 0
    std::vector<std::vector<int>> d;                          // d_ij = |gamma_minus[i][j]|
    std::vector<int> d_plus;                                  // d_i = |gamma_plus[i][i]|
    std::vector<int> orbit_id;
    std::vector<int> orbit_len;                               // N_i
    std::vector<int> rep_of;                                  // smallest index in the orbit
    std::vector<int> rot_of;                                  // i = mu^{rot_of[i]}(rep_of[i])
    std::vector<int> reps;                                    // sorted representatives
    std::vector<std::vector<int>> alpha0_row;                 // [i][j] = sum_k a_{mu^k(i), j}

    int mu_of(int i) const { return perm[static_cast<std::size_t>(i)]; }
    int mu_pow(int k, int i) const {
        k %= N;
        if (k < 0) k += N;
        return mu_pow_tab[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)];
    }
    int a_mu(int i, int k, int j) const { return a[static_cast<std::size_t>(i)][static_cast<std::size_t>(mu_pow(k, j))]; }
    bool same_orbit(int i, int j) const { return orbit_id[static_cast<std::size_t>(i)] == orbit_id[static_cast<std::size_t>(j)]; }

    long form(const RootVec& x, const RootVec& y) const {
        long s = 0;
        for (int i = 0; i < nu; ++i) {
            if (x.c[static_cast<std::size_t>(i)] == 0) continue;
            for (int j = 0; j < nu; ++j)
                s += static_cast<long>(x.c[static_cast<std::size_t>(i)]) * a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * y.c[static_cast<std::size_t>(j)];
        }
        return s;
    }

    RootVec mu_apply(const RootVec& x) const {
        RootVec r = RootVec::zero(nu);
        for (int i = 0; i < nu; ++i) r.c[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] += x.c[static_cast<std::size_t>(i)];
        return r;
    }

    RootVec alpha(int i) const { return RootVec::basis(nu, i); }

    RootVec alpha0(const RootVec& x) const {
        RootVec r = RootVec::zero(nu);
        RootVec cur = x;
        for (int k = 0; k < N; ++k) {
            r = r + cur;
            cur = mu_apply(cur);
        }
        return r;
    }

    /// <alpha_{i(0)} | beta>
    long form_alpha0(int i, const RootVec& beta) const {
        long s = 0;
        for (int j = 0; j < nu; ++j) s += static_cast<long>(alpha0_row[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) * beta.c[static_cast<std::size_t>(j)];
        return s;
    }

    /// <alpha_{i(0)} | alpha_i> = 2 d_i - d_ii
    long form_alpha0_self(int i) const { return alpha0_row[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)]; }
};

inline OrbitData validate(const Gcm& A, const DiagramAut& mu) {
    int nu = A.size();
    if (nu == 0) throw not_simply_laced("empty Cartan matrix");
    for (int i = 0; i < nu; ++i) {
        if (static_cast<int>(A.a[static_cast<std::size_t>(i)].size()) != nu) throw not_simply_laced("Cartan matrix is not square");
        for (int j = 0; j < nu; ++j) {
            int v = A.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (i == j) {
                if (v != 2) throw not_simply_laced("diagonal entry != 2");
            } else if (v != 0 && v != -1) {
                throw not_simply_laced("off-diagonal entry not in {0,-1}");
            }
            if ((A.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] == 0) != (A.a[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] == 0))
                throw not_simply_laced("zero pattern not symmetric");
        }
    }
    if (static_cast<int>(mu.perm.size()) != nu) throw not_automorphism("permutation size mismatch");
    std::vector<char> seen(static_cast<std::size_t>(nu), 0);
    for (int i = 0; i < nu; ++i) {
        int p = mu.perm[static_cast<std::size_t>(i)];
        if (p < 0 || p >= nu || seen[static_cast<std::size_t>(p)]) throw not_automorphism("not a permutation");
        seen[static_cast<std::size_t>(p)] = 1;
    }
    for (int i = 0; i < nu; ++i)
        for (int j = 0; j < nu; ++j)
            if (A.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] !=
                A.a[static_cast<std::size_t>(mu.perm[static_cast<std::size_t>(i)])][static_cast<std::size_t>(mu.perm[static_cast<std::size_t>(j)])])
                throw not_automorphism("a_{ij} != a_{mu(i)mu(j)}");

    // exact order of the permutation
    int N = 1;
    {
        std::vector<int> cur(mu.perm);
        std::vector<int> id(static_cast<std::size_t>(nu));
        std::iota(id.begin(), id.end(), 0);
        while (cur != id) {
            std::vector<int> next(static_cast<std::size_t>(nu));
            for (int i = 0; i < nu; ++i) next[static_cast<std::size_t>(i)] = mu.perm[static_cast<std::size_t>(cur[static_cast<std::size_t>(i)])];
            cur = std::move(next);
            ++N;
            if (N > nu + 1) throw not_automorphism("order computation overflow");
        }
    }
    if (mu.declared_order != 0 && mu.declared_order != N)
        throw not_automorphism("declared order does not match the exact order of mu");

    OrbitData od;
    od.nu = nu;
    od.N = N;
    od.a = A.a;
    od.perm = mu.perm;
    od.mu_pow_tab.resize(static_cast<std::size_t>(N));
    od.mu_pow_tab[0].resize(static_cast<std::size_t>(nu));
    std::iota(od.mu_pow_tab[0].begin(), od.mu_pow_tab[0].end(), 0);
    for (int k = 1; k < N; ++k) {
        od.mu_pow_tab[static_cast<std::size_t>(k)].resize(static_cast<std::size_t>(nu));
        for (int i = 0; i < nu; ++i)
            od.mu_pow_tab[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] =
                mu.perm[static_cast<std::size_t>(od.mu_pow_tab[static_cast<std::size_t>(k) - 1][static_cast<std::size_t>(i)])];
    }

    od.gamma.assign(static_cast<std::size_t>(nu), std::vector<std::vector<int>>(static_cast<std::size_t>(nu)));
    od.gamma_plus = od.gamma;
    od.gamma_minus = od.gamma;
    od.d.assign(static_cast<std::size_t>(nu), std::vector<int>(static_cast<std::size_t>(nu), 0));
    od.d_plus.assign(static_cast<std::size_t>(nu), 0);
    for (int i = 0; i < nu; ++i)
        for (int j = 0; j < nu; ++j)
            for (int k = 0; k < N; ++k) {
                int v = od.a_mu(i, k, j);
                if (v != 0) od.gamma[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].push_back(k);
                if (v > 0) od.gamma_plus[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].push_back(k);
                if (v < 0) od.gamma_minus[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].push_back(k);
            }
    for (int i = 0; i < nu; ++i) {
        od.d_plus[static_cast<std::size_t>(i)] = static_cast<int>(od.gamma_plus[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)].size());
        for (int j = 0; j < nu; ++j)
            od.d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = static_cast<int>(od.gamma_minus[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].size());
    }

    od.alpha0_row.assign(static_cast<std::size_t>(nu), std::vector<int>(static_cast<std::size_t>(nu), 0));
    for (int i = 0; i < nu; ++i)
        for (int j = 0; j < nu; ++j)
            for (int k = 0; k < N; ++k)
                od.alpha0_row[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +=
                    od.a[static_cast<std::size_t>(od.mu_pow(k, i))][static_cast<std::size_t>(j)];

    od.orbit_id.assign(static_cast<std::size_t>(nu), -1);
    od.orbit_len.assign(static_cast<std::size_t>(nu), 0);
    od.rep_of.assign(static_cast<std::size_t>(nu), -1);
    od.rot_of.assign(static_cast<std::size_t>(nu), 0);
    int oid = 0;
    for (int i = 0; i < nu; ++i) {
        if (od.orbit_id[static_cast<std::size_t>(i)] >= 0) continue;
        int len = 0;
        int cur = i;
        do {
            od.orbit_id[static_cast<std::size_t>(cur)] = oid;
            od.rep_of[static_cast<std::size_t>(cur)] = i;
            od.rot_of[static_cast<std::size_t>(cur)] = len;
            cur = mu.perm[static_cast<std::size_t>(cur)];
            ++len;
        } while (cur != i);
        for (int k = 0; k < nu; ++k)
            if (od.orbit_id[static_cast<std::size_t>(k)] == oid) od.orbit_len[static_cast<std::size_t>(k)] = len;
        od.reps.push_back(i);
        ++oid;
    }
    return od;
}

struct LinkingReport {
    bool ok = true;
    std::vector<std::pair<int, int>> offending;  // 0-based pairs
};

/// Condition (LC): Gamma_ij^- is a subgroup of Z_N for every edge a_ij < 0.
inline LinkingReport check_linking(const OrbitData& od) {
    LinkingReport rep;
    for (int i = 0; i < od.nu; ++i)
        for (int j = 0; j < od.nu; ++j) {
            if (od.a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] >= 0) continue;
            const auto& g = od.gamma_minus[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            std::set<int> s(g.begin(), g.end());
            bool ok = s.count(0) > 0;
            for (int x : g) {
                if (!ok) break;
                if (!s.count((od.N - x) % od.N)) ok = false;
                for (int y : g)
                    if (!s.count((x + y) % od.N)) { ok = false; break; }
            }
            if (!ok) {
                rep.ok = false;
                rep.offending.emplace_back(i, j);
            }
        }
    return rep;
}

/// prod_{k in Gamma_ii^-} xi^k == -1, evaluated in cyclotomic arithmetic.
inline bool check_lemma_product(const OrbitData& od, const CoeffField& F, int i) {
    if (od.d[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] == 0)
        throw inapplicable("check_lemma_product: d_ii = 0");
    Cyclo prod = Cyclo::from_rat(&F.cyclo(), 1);
    for (int k : od.gamma_minus[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)]) prod = prod * F.xi(k);
    return prod == F.minus_one();
}

struct FoldedMatrix {
    std::vector<int> reps;                     // 0-based representative indices
    std::vector<std::vector<Rat>> a_check;     // folded matrix over reps
    std::vector<Rat> s;                        // multipliers s_i
};

inline FoldedMatrix folded_matrix(const OrbitData& od) {
    FoldedMatrix fm;
    fm.reps = od.reps;
    std::size_t r = od.reps.size();
    fm.s.resize(r);
    fm.a_check.assign(r, std::vector<Rat>(r));
    for (std::size_t ii = 0; ii < r; ++ii) {
        int i = od.reps[ii];
        long di = od.d_plus[static_cast<std::size_t>(i)];
        long col = 0;
        for (int k = 0; k < od.N; ++k) col += od.a[static_cast<std::size_t>(od.mu_pow(k, i))][static_cast<std::size_t>(i)];
        fm.s[ii] = Rat(3) - Rat(col) / Rat(di);
        for (std::size_t jj = 0; jj < r; ++jj) {
            int j = od.reps[jj];
            long sum = 0;
            for (int k = 0; k < od.N; ++k) sum += od.a[static_cast<std::size_t>(od.mu_pow(k, i))][static_cast<std::size_t>(j)];
            fm.a_check[ii][jj] = fm.s[ii] * Rat(sum) / Rat(di);
        }
    }
    return fm;
}

/// Exponent e with C(alpha, beta) = zeta^e, from C = prod_k (-xi^{-k})^{<alpha | mu^k beta>}.
inline int commutator_exponent(const OrbitData& od, const RootVec& alpha, const RootVec& beta) {
    long e = 0;
    RootVec cur = beta;
    int twoN = 2 * od.N;
    for (int k = 0; k < od.N; ++k) {
        long pairing = od.form(alpha, cur);
        e += ((static_cast<long>(od.N) - 2 * k) % twoN) * pairing;
        cur = od.mu_apply(cur);
    }
    e %= twoN;
    if (e < 0) e += twoN;
    return static_cast<int>(e);
}

inline Cyclo commutator_map(const OrbitData& od, const CoeffField& F, const RootVec& alpha, const RootVec& beta) {
    return F.zeta(commutator_exponent(od, alpha, beta));
}

/// Bimultiplicative section eps of the commutator map: eps(a_i, a_j) = C(a_i, a_j) for i > j, 1 otherwise.
class Cocycle {
public:
    static Cocycle build(const OrbitData& od, const CoeffField& F) {
        Cocycle c;
        c.twoN_ = 2 * od.N;
        c.nu_ = od.nu;
        for (int i = 0; i < od.nu; ++i)
            if (commutator_exponent(od, od.alpha(i), od.alpha(i)) != 0)
                throw cocycle_obstruction("C(alpha_i, alpha_i) != 1 at i=" + std::to_string(i + 1));
        c.e_.assign(static_cast<std::size_t>(od.nu), std::vector<int>(static_cast<std::size_t>(od.nu), 0));
        for (int i = 0; i < od.nu; ++i)
            for (int j = 0; j < i; ++j)
                c.e_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = commutator_exponent(od, od.alpha(i), od.alpha(j));
        (void)F;
        return c;
    }

    int eps_exponent(const RootVec& alpha, const RootVec& beta) const {
        long e = 0;
        for (int i = 0; i < nu_; ++i) {
            if (alpha.c[static_cast<std::size_t>(i)] == 0) continue;
            for (int j = 0; j < i; ++j)
                e += static_cast<long>(e_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) * alpha.c[static_cast<std::size_t>(i)] * beta.c[static_cast<std::size_t>(j)];
        }
        e %= twoN_;
        if (e < 0) e += twoN_;
        return static_cast<int>(e);
    }

    Cyclo eps(const CoeffField& F, const RootVec& alpha, const RootVec& beta) const {
        return F.zeta(eps_exponent(alpha, beta));
    }

private:
    int twoN_ = 2;
    int nu_ = 0;
    std::vector<std::vector<int>> e_;
};

}  // namespace taffin
