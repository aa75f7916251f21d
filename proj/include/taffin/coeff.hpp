#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "taffin/cyclo.hpp"
#include "taffin/errors.hpp"

namespace taffin {

/// Polynomial in v over Q(zeta), ascending coefficients, leading coefficient nonzero.
class VPoly {
public:
    VPoly() = default;
    explicit VPoly(std::vector<Cyclo> coeffs) : c_(std::move(coeffs)) { trim(); }

    static VPoly constant(Cyclo a) {
        VPoly p;
        if (!a.is_zero()) p.c_.push_back(std::move(a));
        return p;
    }

    static VPoly monomial(Cyclo a, int e) {
        VPoly p;
        if (a.is_zero()) return p;
        p.c_.assign(static_cast<std::size_t>(e) + 1, Cyclo());
        p.c_.back() = std::move(a);
        return p;
    }

    bool is_zero() const { return c_.empty(); }
    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
    int low() const {
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (!c_[i].is_zero()) return static_cast<int>(i);
        return -1;
    }
    const Cyclo& coeff(int e) const {
        static const Cyclo zero;
        if (e < 0 || e >= static_cast<int>(c_.size())) return zero;
        return c_[static_cast<std::size_t>(e)];
    }
    const std::vector<Cyclo>& coeffs() const { return c_; }

    bool is_one() const { return c_.size() == 1 && c_[0].is_rational() && c_[0].rational_part() == 1; }

    friend VPoly operator+(const VPoly& a, const VPoly& b) {
        std::vector<Cyclo> r(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i < a.c_.size()) r[i] = r[i] + a.c_[i];
            if (i < b.c_.size()) r[i] = r[i] + b.c_[i];
        }
        return VPoly(std::move(r));
    }

    friend VPoly operator-(const VPoly& a, const VPoly& b) {
        std::vector<Cyclo> r(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i < a.c_.size()) r[i] = r[i] + a.c_[i];
            if (i < b.c_.size()) r[i] = r[i] - b.c_[i];
        }
        return VPoly(std::move(r));
    }

    VPoly operator-() const {
        std::vector<Cyclo> r(c_.size());
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = -c_[i];
        VPoly p;
        p.c_ = std::move(r);
        return p;
    }

    friend VPoly operator*(const VPoly& a, const VPoly& b) {
        if (a.is_zero() || b.is_zero()) return {};
        std::vector<Cyclo> r(a.c_.size() + b.c_.size() - 1);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (a.c_[i].is_zero()) continue;
            for (std::size_t j = 0; j < b.c_.size(); ++j) {
                if (b.c_[j].is_zero()) continue;
                r[i + j] = r[i + j] + a.c_[i] * b.c_[j];
            }
        }
        return VPoly(std::move(r));
    }

    friend VPoly operator*(const VPoly& a, const Cyclo& s) {
        if (a.is_zero() || s.is_zero()) return {};
        std::vector<Cyclo> r(a.c_.size());
        for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.c_[i] * s;
        return VPoly(std::move(r));
    }

    VPoly shifted(int e) const {  // multiply by v^e, e >= 0
        if (is_zero() || e == 0) return *this;
        std::vector<Cyclo> r(c_.size() + static_cast<std::size_t>(e));
        for (std::size_t i = 0; i < c_.size(); ++i) r[i + static_cast<std::size_t>(e)] = c_[i];
        VPoly p;
        p.c_ = std::move(r);
        return p;
    }

    friend std::pair<VPoly, VPoly> divrem(VPoly a, const VPoly& b) {
        if (b.is_zero()) throw division_by_zero("VPoly divrem: zero divisor");
        VPoly q;
        if (a.c_.size() >= b.c_.size()) q.c_.assign(a.c_.size() - b.c_.size() + 1, Cyclo());
        Cyclo lead_inv = b.c_.back().inverse();
        while (!a.is_zero() && a.c_.size() >= b.c_.size()) {
            Cyclo c = a.c_.back() * lead_inv;
            std::size_t shift = a.c_.size() - b.c_.size();
            q.c_[shift] = c;
            for (std::size_t i = 0; i < b.c_.size(); ++i) a.c_[shift + i] = a.c_[shift + i] - c * b.c_[i];
            a.trim();
        }
        q.trim();
        return {q, a};
    }

    VPoly monic() const {
        if (is_zero()) return {};
        return *this * c_.back().inverse();
    }

    friend VPoly gcd(VPoly a, VPoly b) {
        while (!b.is_zero()) {
            auto [q, r] = divrem(std::move(a), b);
            (void)q;
            a = std::move(b);
            b = r.monic();  // keeps intermediate coefficients tame
        }
        return a.monic();
    }

    friend bool operator==(const VPoly& a, const VPoly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const VPoly& a, const VPoly& b) { return !(a.c_ == b.c_); }

    std::string str() const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (std::size_t e = 0; e < c_.size(); ++e) {
            if (c_[e].is_zero()) continue;
            std::string cs = c_[e].str();
            bool neg = cs.size() > 1 && cs[0] == '-' && c_[e].is_monomial();
            if (!first) os << (neg ? "" : "+");
            first = false;
            bool unit = cs == "1" || cs == "-1";
            bool needs_paren = !c_[e].is_monomial();
            if (e == 0) {
                os << (needs_paren ? "(" + cs + ")" : cs);
            } else {
                if (unit) {
                    if (cs == "-1") os << "-";
                } else {
                    os << (needs_paren ? "(" + cs + ")" : cs) << "*";
                }
                os << "v";
                if (e > 1) os << "^" << e;
            }
        }
        return os.str();
    }

private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    std::vector<Cyclo> c_;
};

/// Element of the coefficient field Q(zeta)(v): reduced fraction of polynomials in v,
/// denominator monic with gcd(num, den) = 1. An empty denominator stands for 1.
class CoeffElem {
public:
    CoeffElem() = default;  // zero
    CoeffElem(VPoly num, VPoly den) { assign(std::move(num), std::move(den)); }

    static CoeffElem from_poly(VPoly p) {
        CoeffElem e;
        e.num_ = std::move(p);
        return e;
    }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return den_.is_zero() && num_.is_one(); }

    const VPoly& num() const { return num_; }
    VPoly den() const {
        if (!den_.is_zero()) return den_;
        const CycloField* F = field_of(num_);
        return VPoly::constant(F ? Cyclo::from_rat(F, 1) : Cyclo());
    }
    bool den_is_one() const { return den_.is_zero(); }

    friend CoeffElem operator+(const CoeffElem& a, const CoeffElem& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.den_.is_zero() && b.den_.is_zero()) return from_poly(a.num_ + b.num_);
        CoeffElem r;
        r.assign(mul1(a.num_, b.den_) + mul1(b.num_, a.den_), mul11(a.den_, b.den_));
        return r;
    }

    friend CoeffElem operator-(const CoeffElem& a, const CoeffElem& b) { return a + (-b); }

    CoeffElem operator-() const {
        CoeffElem r = *this;
        r.num_ = -r.num_;
        return r;
    }

    friend CoeffElem operator*(const CoeffElem& a, const CoeffElem& b) {
        if (a.is_zero() || b.is_zero()) return {};
        if (a.den_.is_zero() && b.den_.is_zero()) return from_poly(a.num_ * b.num_);
        CoeffElem r;
        r.assign(a.num_ * b.num_, mul11(a.den_, b.den_));
        return r;
    }

    friend CoeffElem operator/(const CoeffElem& a, const CoeffElem& b) {
        if (b.is_zero()) throw division_by_zero("CoeffElem: division by zero");
        if (a.is_zero()) return {};
        CoeffElem r;
        r.assign(mul1(a.num_, b.den_), mul1(b.num_, a.den_));
        return r;
    }

    CoeffElem inverse() const {
        if (is_zero()) throw division_by_zero("CoeffElem: inverse of zero");
        CoeffElem r;
        r.assign(den(), num_);
        return r;
    }

    CoeffElem pow(long e) const {
        if (e < 0) return inverse().pow(-e);
        if (e == 0) {
            const CycloField* F = field_of(num_);
            if (!F) throw invariant_violation("CoeffElem::pow: 0^0");
            return from_poly(VPoly::constant(Cyclo::from_rat(F, 1)));
        }
        CoeffElem r = *this;
        CoeffElem base = *this;
        --e;
        while (e > 0) {
            if (e & 1) r = r * base;
            base = base * base;
            e >>= 1;
        }
        return r;
    }

    /// True when the canonical denominator is a power of v (a Laurent polynomial in v).
    bool is_laurent() const {
        if (den_.is_zero()) return true;
        return den_.low() == den_.degree();
    }

    /// Lowest v-exponent; defined for nonzero Laurent values.
    long v_valuation() const {
        if (is_zero()) throw invariant_violation("v_valuation of zero");
        if (!is_laurent()) throw invariant_violation("v_valuation: not a Laurent polynomial in v");
        long d = den_.is_zero() ? 0 : den_.degree();
        return num_.low() - d;
    }

    friend bool operator==(const CoeffElem& a, const CoeffElem& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const CoeffElem& a, const CoeffElem& b) { return !(a == b); }

    /// Canonical string serialization, e.g. "(v^2+1)/(v)".
    std::string str() const {
        if (is_zero()) return "0";
        if (den_.is_zero()) return num_.str();
        return "(" + num_.str() + ")/(" + den_.str() + ")";
    }

private:
    static const CycloField* field_of(const VPoly& p) {
        for (const auto& c : p.coeffs())
            if (c.field()) return c.field();
        return nullptr;
    }

    static VPoly mul1(const VPoly& p, const VPoly& den_or_one) {
        return den_or_one.is_zero() ? p : p * den_or_one;
    }
    static VPoly mul11(const VPoly& a, const VPoly& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        return a * b;
    }

    void assign(VPoly num, VPoly den) {
        if (den.is_zero()) throw division_by_zero("CoeffElem: zero denominator");
        if (num.is_zero()) {
            num_ = VPoly();
            den_ = VPoly();
            return;
        }
        if (den.degree() > 0) {
            VPoly g = gcd(num, den);
            if (g.degree() > 0) {
                num = divrem(std::move(num), g).first;
                den = divrem(std::move(den), g).first;
            }
        }
        Cyclo lead_inv = den.coeffs().back().inverse();
        num_ = num * lead_inv;
        if (den.degree() == 0) {
            den_ = VPoly();
        } else {
            den_ = den * lead_inv;
        }
    }

    VPoly num_;
    VPoly den_;  // empty means 1
};

/// The coefficient field Q(zeta_{2N})(v) with q = v^2 and xi = zeta^2.
class CoeffField {
public:
    explicit CoeffField(int N) : N_(N), cyclo_(2 * N) {}

    int N() const { return N_; }
    const CycloField& cyclo() const { return cyclo_; }

    CoeffElem zero() const { return {}; }
    CoeffElem one() const { return from_rat(1); }
    CoeffElem from_rat(const Rat& r) const { return CoeffElem::from_poly(VPoly::constant(Cyclo::from_rat(&cyclo_, r))); }
    CoeffElem from_cyclo(const Cyclo& c) const { return CoeffElem::from_poly(VPoly::constant(c)); }

    Cyclo zeta(long k = 1) const { return Cyclo::zeta_pow(&cyclo_, k); }
    Cyclo xi(long k = 1) const { return Cyclo::zeta_pow(&cyclo_, 2 * k); }
    Cyclo xi_prime(long k = 1) const { return Cyclo::zeta_pow(&cyclo_, (static_cast<long>(N_) * N_ + 2) * k); }
    Cyclo minus_one() const { return Cyclo::zeta_pow(&cyclo_, N_); }

    /// v^e for any integer e (negative exponents give fractions).
    CoeffElem v_pow(long e) const {
        if (e >= 0) return CoeffElem::from_poly(VPoly::monomial(Cyclo::from_rat(&cyclo_, 1), static_cast<int>(e)));
        return CoeffElem(VPoly::constant(Cyclo::from_rat(&cyclo_, 1)),
                         VPoly::monomial(Cyclo::from_rat(&cyclo_, 1), static_cast<int>(-e)));
    }

    /// q^{e2/2} = v^{e2}.
    CoeffElem q_pow2(long e2) const { return v_pow(e2); }

    /// zeta^{ze} v^{ve} as a field element.
    CoeffElem monomial(long ze, long ve) const { return from_cyclo(zeta(ze)) * v_pow(ve); }

    /// q-integer [n] in base q^{base2/2}; base2 = 2 gives the plain [n]_q.
    CoeffElem q_integer(long n, long base2 = 2) const {
        if (n == 0) return zero();
        long s = 1;
        if (n < 0) { s = -1; n = -n; }
        CoeffElem acc = zero();
        for (long j = 0; j < n; ++j) acc = acc + v_pow(base2 * (n - 1 - 2 * j));
        if (s < 0) acc = -acc;
        return acc;
    }

    /// Gaussian binomial [n choose r] in base q^{base2/2}.
    CoeffElem gauss_binom(long n, long r, long base2 = 2) const {
        if (r < 0 || r > n) throw index_out_of_range("gauss_binom: need 0 <= r <= n");
        CoeffElem acc = one();
        for (long k = 1; k <= r; ++k) acc = acc * q_integer(n - k + 1, base2) / q_integer(k, base2);
        return acc;
    }

private:
    int N_;
    CycloField cyclo_;
};

}  // namespace taffin
