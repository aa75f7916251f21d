#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "taffin/coeff.hpp"
#include "taffin/errors.hpp"

namespace taffin {

/// Multivariate polynomial over the coefficient field; exponents are non-negative.
class MPoly {
public:
    using Key = std::vector<int>;

    explicit MPoly(int arity = 0) : arity_(arity) {}

    static MPoly monomial(int arity, Key e, CoeffElem c) {
        MPoly p(arity);
        if (!c.is_zero()) p.t_[std::move(e)] = std::move(c);
        return p;
    }
    static MPoly constant(int arity, CoeffElem c) { return monomial(arity, Key(static_cast<std::size_t>(arity), 0), std::move(c)); }

    int arity() const { return arity_; }
    bool is_zero() const { return t_.empty(); }
    const std::map<Key, CoeffElem>& terms() const { return t_; }

    void add_term(const Key& e, const CoeffElem& c) {
        if (c.is_zero()) return;
        auto it = t_.find(e);
        if (it == t_.end()) {
            t_.emplace(e, c);
        } else {
            it->second = it->second + c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }

    CoeffElem coeff(const Key& e) const {
        auto it = t_.find(e);
        return it == t_.end() ? CoeffElem() : it->second;
    }

    friend MPoly operator+(const MPoly& a, const MPoly& b) {
        MPoly r = a;
        for (const auto& [e, c] : b.t_) r.add_term(e, c);
        return r;
    }
    friend MPoly operator-(const MPoly& a, const MPoly& b) {
        MPoly r = a;
        for (const auto& [e, c] : b.t_) r.add_term(e, -c);
        return r;
    }
    friend MPoly operator*(const MPoly& a, const MPoly& b) {
        MPoly r(a.arity_);
        for (const auto& [ea, ca] : a.t_)
            for (const auto& [eb, cb] : b.t_) {
                Key e = ea;
                for (std::size_t k = 0; k < e.size(); ++k) e[k] += eb[k];
                r.add_term(e, ca * cb);
            }
        return r;
    }
    friend MPoly operator*(const MPoly& a, const CoeffElem& s) {
        MPoly r(a.arity_);
        for (const auto& [e, c] : a.t_) r.add_term(e, c * s);
        return r;
    }
    friend bool operator==(const MPoly& a, const MPoly& b) { return a.t_ == b.t_; }

    /// Exact division; throws inexact_division when the quotient does not exist.
    friend MPoly divexact(MPoly f, const MPoly& g) {
        if (g.is_zero()) throw division_by_zero("MPoly divexact: zero divisor");
        MPoly q(f.arity_);
        while (!f.is_zero()) {
            const auto& [ef, cf] = *f.t_.rbegin();  // lex-leading term
            const auto& [eg, cg] = *g.t_.rbegin();
            Key e = ef;
            for (std::size_t k = 0; k < e.size(); ++k) {
                e[k] -= eg[k];
                if (e[k] < 0) throw inexact_division("MPoly divexact: leading term not divisible");
            }
            CoeffElem c = cf / cg;
            q.add_term(e, c);
            MPoly sub = g * MPoly::monomial(f.arity_, e, c);
            f = f - sub;
        }
        return q;
    }

    /// Rename/permute variables: result exponent vector r with r[perm[k]] = e[k].
    MPoly permuted(const std::vector<int>& perm) const {
        MPoly r(arity_);
        for (const auto& [e, c] : t_) {
            Key ne(e.size(), 0);
            for (std::size_t k = 0; k < e.size(); ++k) ne[static_cast<std::size_t>(perm[k])] = e[k];
            r.add_term(ne, c);
        }
        return r;
    }

    std::string str(const std::vector<std::string>& names) const {
        if (t_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [e, c] : t_) {
            if (!first) os << " + ";
            first = false;
            os << "(" << c.str() << ")";
            for (std::size_t k = 0; k < e.size(); ++k) {
                if (e[k] == 0) continue;
                os << "*" << names[k];
                if (e[k] != 1) os << "^" << e[k];
            }
        }
        return os.str();
    }

private:
    int arity_;
    std::map<Key, CoeffElem> t_;
};

}  // namespace taffin
