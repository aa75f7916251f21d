#pragma once

#include <gmpxx.h>

#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "taffin/errors.hpp"

namespace taffin {

using Rat = mpq_class;

inline std::string rat_str(const Rat& r) { return r.get_str(); }

/// n/d as a canonical rational (gmp requires explicit canonicalization here).
inline Rat rat_frac(long n, long d) {
    Rat r(n, d);
    r.canonicalize();
    return r;
}

namespace detail {

// Dense polynomials over Q, ascending coefficients, highest coefficient nonzero.
using RatPoly = std::vector<Rat>;

inline void rp_trim(RatPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline RatPoly rp_mul(const RatPoly& a, const RatPoly& b) {
    if (a.empty() || b.empty()) return {};
    RatPoly r(a.size() + b.size() - 1, Rat(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    rp_trim(r);
    return r;
}

inline std::pair<RatPoly, RatPoly> rp_divrem(RatPoly a, const RatPoly& b) {
    if (b.empty()) throw division_by_zero("rp_divrem: zero divisor");
    RatPoly q;
    if (a.size() >= b.size()) q.assign(a.size() - b.size() + 1, Rat(0));
    const Rat& lead = b.back();
    while (a.size() >= b.size()) {
        Rat c = a.back() / lead;
        std::size_t shift = a.size() - b.size();
        q[shift] = c;
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
        rp_trim(a);
        if (a.size() < b.size()) break;
    }
    rp_trim(q);
    return {q, a};
}

// n-th cyclotomic polynomial: divide x^n - 1 by Phi_d for every proper divisor d.
inline RatPoly cyclotomic(int n) {
    RatPoly f(static_cast<std::size_t>(n) + 1, Rat(0));
    f[0] = -1;
    f[static_cast<std::size_t>(n)] = 1;
    for (int d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        auto [q, r] = rp_divrem(f, cyclotomic(d));
        if (!r.empty()) throw invariant_violation("cyclotomic: inexact division");
        f = std::move(q);
    }
    return f;
}

}  // namespace detail

/// Context for the cyclotomic field Q(zeta_n): minimal polynomial and power-reduction rows.
class CycloField {
public:
    explicit CycloField(int conductor) : n_(conductor) {
        if (n_ < 1) throw index_out_of_range("CycloField: conductor must be positive");
        minpoly_ = detail::cyclotomic(n_);
        phi_ = static_cast<int>(minpoly_.size()) - 1;
        // x^{phi+j} reduced mod minpoly, enough rows for schoolbook products and zeta powers
        int rows = std::max(phi_, n_) + 1;
        detail::RatPoly cur(minpoly_.begin(), minpoly_.end() - 1);
        for (auto& c : cur) c = -c;  // x^phi = -(lower part)
        cur.resize(static_cast<std::size_t>(phi_), Rat(0));
        for (int j = 0; j < rows; ++j) {
            pow_.push_back(cur);
            detail::RatPoly next(static_cast<std::size_t>(phi_), Rat(0));
            for (int i = 0; i + 1 < phi_; ++i) next[static_cast<std::size_t>(i) + 1] = cur[static_cast<std::size_t>(i)];
            const Rat& top = cur[static_cast<std::size_t>(phi_) - 1];
            if (top != 0)
                for (int i = 0; i < phi_; ++i) next[static_cast<std::size_t>(i)] += top * pow_[0][static_cast<std::size_t>(i)];
            cur = std::move(next);
        }
    }

    int conductor() const { return n_; }
    int degree() const { return phi_; }
    const detail::RatPoly& minpoly() const { return minpoly_; }
    // reduction of x^{degree()+j}, valid for 0 <= j <= degree()-2
    const detail::RatPoly& power_row(int j) const { return pow_.at(static_cast<std::size_t>(j)); }

private:
    int n_;
    int phi_;
    detail::RatPoly minpoly_;
    std::vector<detail::RatPoly> pow_;
};

/// Element of Q(zeta_n), reduced modulo the n-th cyclotomic polynomial.
/// The field context is borrowed; it must outlive every value. A default-constructed
/// element is the context-free zero, which any arithmetic partner adopts.
class Cyclo {
public:
    Cyclo() = default;
    Cyclo(const CycloField* F, std::vector<Rat> coeffs) : F_(F), c_(std::move(coeffs)) {
        c_.resize(static_cast<std::size_t>(F_->degree()), Rat(0));
        if (is_zero()) *this = Cyclo();
    }

    static Cyclo from_rat(const CycloField* F, const Rat& r) {
        if (r == 0) return {};
        std::vector<Rat> c(static_cast<std::size_t>(F->degree()), Rat(0));
        c[0] = r;
        return {F, std::move(c)};
    }

    static Cyclo zeta_pow(const CycloField* F, long k) {
        long n = F->conductor();
        k %= n;
        if (k < 0) k += n;
        std::vector<Rat> x(static_cast<std::size_t>(k) + 1, Rat(0));
        x.back() = 1;
        return reduce(F, std::move(x));
    }

    bool is_zero() const {
        for (const auto& v : c_)
            if (v != 0) return false;
        return true;
    }

    bool is_rational() const {
        for (std::size_t i = 1; i < c_.size(); ++i)
            if (c_[i] != 0) return false;
        return true;
    }

    Rat rational_part() const { return c_.empty() ? Rat(0) : c_[0]; }

    const CycloField* field() const { return F_; }
    const std::vector<Rat>& coeffs() const { return c_; }

    friend Cyclo operator+(const Cyclo& a, const Cyclo& b) {
        const CycloField* F = a.F_ ? a.F_ : b.F_;
        if (!F) return {};
        std::vector<Rat> r(static_cast<std::size_t>(F->degree()), Rat(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i) r[i] += a.c_[i];
        for (std::size_t i = 0; i < b.c_.size(); ++i) r[i] += b.c_[i];
        return {F, std::move(r)};
    }

    friend Cyclo operator-(const Cyclo& a, const Cyclo& b) { return a + (-b); }

    Cyclo operator-() const {
        if (!F_) return {};
        std::vector<Rat> r(c_);
        for (auto& v : r) v = -v;
        return {F_, std::move(r)};
    }

    friend Cyclo operator*(const Cyclo& a, const Cyclo& b) {
        if (a.is_zero() || b.is_zero()) return {};
        const CycloField* F = a.F_;
        int phi = F->degree();
        std::vector<Rat> prod(static_cast<std::size_t>(2 * phi - 1), Rat(0));
        for (int i = 0; i < phi; ++i) {
            if (a.c_[static_cast<std::size_t>(i)] == 0) continue;
            for (int j = 0; j < phi; ++j) {
                if (b.c_[static_cast<std::size_t>(j)] == 0) continue;
                prod[static_cast<std::size_t>(i + j)] += a.c_[static_cast<std::size_t>(i)] * b.c_[static_cast<std::size_t>(j)];
            }
        }
        return reduce(F, std::move(prod));
    }

    friend Cyclo operator*(const Cyclo& a, const Rat& s) {
        if (a.is_zero() || s == 0) return {};
        std::vector<Rat> r(a.c_);
        for (auto& v : r) v *= s;
        return {a.F_, std::move(r)};
    }

    Cyclo inverse() const {
        if (is_zero()) throw division_by_zero("Cyclo::inverse of zero");
        // extended Euclid in Q[x] against the minimal polynomial
        detail::RatPoly r0 = F_->minpoly();
        detail::RatPoly r1(c_);
        detail::rp_trim(r1);
        detail::RatPoly s0{}, s1{Rat(1)};
        while (!r1.empty()) {
            auto [q, r2] = detail::rp_divrem(r0, r1);
            detail::RatPoly s2 = s0;
            detail::RatPoly qs = detail::rp_mul(q, s1);
            s2.resize(std::max(s2.size(), qs.size()), Rat(0));
            for (std::size_t i = 0; i < qs.size(); ++i) s2[i] -= qs[i];
            detail::rp_trim(s2);
            r0 = std::move(r1);
            r1 = std::move(r2);
            s0 = std::move(s1);
            s1 = std::move(s2);
        }
        // r0 = gcd, a nonzero constant since the minimal polynomial is irreducible
        if (r0.size() != 1) throw invariant_violation("Cyclo::inverse: non-unit gcd");
        for (auto& v : s0) v /= r0[0];
        return reduce(F_, std::move(s0));
    }

    friend Cyclo operator/(const Cyclo& a, const Cyclo& b) { return a * b.inverse(); }

    friend bool operator==(const Cyclo& a, const Cyclo& b) {
        std::size_t n = std::max(a.c_.size(), b.c_.size());
        for (std::size_t i = 0; i < n; ++i) {
            const Rat& x = i < a.c_.size() ? a.c_[i] : zero_rat();
            const Rat& y = i < b.c_.size() ? b.c_[i] : zero_rat();
            if (x != y) return false;
        }
        return true;
    }
    friend bool operator!=(const Cyclo& a, const Cyclo& b) { return !(a == b); }

    // deterministic total order, used for map keys and stable serialization
    friend bool operator<(const Cyclo& a, const Cyclo& b) {
        std::size_t n = std::max(a.c_.size(), b.c_.size());
        for (std::size_t i = 0; i < n; ++i) {
            const Rat& x = i < a.c_.size() ? a.c_[i] : zero_rat();
            const Rat& y = i < b.c_.size() ? b.c_[i] : zero_rat();
            if (x != y) return x < y;
        }
        return false;
    }

    /// Canonical string form; the root of unity zeta prints as "z".
    std::string str() const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (std::size_t k = 0; k < c_.size(); ++k) {
            if (c_[k] == 0) continue;
            Rat a = c_[k];
            if (first) {
                if (a < 0) { os << "-"; a = -a; }
            } else {
                os << (a < 0 ? "-" : "+");
                if (a < 0) a = -a;
            }
            first = false;
            if (k == 0) {
                os << rat_str(a);
            } else {
                if (a != 1) os << rat_str(a) << "*";
                os << "z";
                if (k > 1) os << "^" << k;
            }
        }
        return os.str();
    }

    bool is_monomial() const {
        int cnt = 0;
        for (const auto& v : c_)
            if (v != 0) ++cnt;
        return cnt <= 1;
    }

private:
    static const Rat& zero_rat() {
        static const Rat z(0);
        return z;
    }

    static Cyclo reduce(const CycloField* F, std::vector<Rat> raw) {
        int phi = F->degree();
        detail::rp_trim(raw);
        while (raw.size() > static_cast<std::size_t>(phi)) {
            std::size_t top = raw.size() - 1;
            int j = static_cast<int>(top) - phi;
            Rat c = raw[top];
            raw.pop_back();
            if (c == 0) continue;
            const auto& row = F->power_row(j);
            for (int i = 0; i < phi; ++i) raw[static_cast<std::size_t>(i)] += c * row[static_cast<std::size_t>(i)];
            detail::rp_trim(raw);
        }
        raw.resize(static_cast<std::size_t>(phi), Rat(0));
        Cyclo out;
        bool zero = true;
        for (const auto& v : raw)
            if (v != 0) { zero = false; break; }
        if (zero) return out;
        out.F_ = F;
        out.c_ = std::move(raw);
        return out;
    }

    const CycloField* F_ = nullptr;
    std::vector<Rat> c_;  // empty means zero
};

}  // namespace taffin
