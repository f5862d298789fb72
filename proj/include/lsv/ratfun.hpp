#pragma once

#include <string>
#include <utility>

#include "lsv/errors.hpp"
#include "lsv/gaussian.hpp"
#include "lsv/polynomial.hpp"
#include "lsv/rational.hpp"

namespace lsv {

/// Element of the rational function field Q(e), stored as a canonical reduced
/// fraction of integer polynomials.
///
/// Canonical form: gcd(num, den) is a unit, den has positive leading
/// coefficient, and the integer content of the pair is 1. Two values are
/// equal iff their canonical forms are structurally equal, so operator== is
/// exact value equality.
class RatFun {
public:
    RatFun() : num_(), den_(1) {}
    RatFun(long long k) : num_(k), den_(1) {}
    RatFun(const Rational& q) : num_(q.num()), den_(q.den()) {}
    RatFun(IntPoly num) : num_(std::move(num)), den_(1) {}
    RatFun(IntPoly num, IntPoly den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero())
            throw DivisionByZeroError("RatFun: zero denominator");
        normalize();
    }

    static RatFun from_int(long long k) { return RatFun(k); }
    static RatFun from_rational(const Rational& q) { return RatFun(q); }
    /// The field generator "e".
    static RatFun epsilon() { return RatFun(IntPoly::variable()); }

    const IntPoly& num() const { return num_; }
    const IntPoly& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.degree() == 0 && num_.leading() == 1 && den_ == IntPoly(1); }

    friend RatFun operator-(const RatFun& a) {
        RatFun r;
        r.num_ = -a.num_;
        r.den_ = a.den_;
        return r;
    }

    friend RatFun operator+(const RatFun& a, const RatFun& b) {
        return RatFun(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFun operator-(const RatFun& a, const RatFun& b) {
        return RatFun(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFun operator*(const RatFun& a, const RatFun& b) {
        if (a.is_zero() || b.is_zero()) return RatFun();
        return RatFun(a.num_ * b.num_, a.den_ * b.den_);
    }

    RatFun inv() const {
        if (is_zero())
            throw DivisionByZeroError("RatFun: inverse of zero");
        return RatFun(den_, num_);
    }

    friend RatFun operator/(const RatFun& a, const RatFun& b) {
        if (b.is_zero())
            throw DivisionByZeroError("RatFun: division by zero");
        if (a.is_zero()) return RatFun();
        return RatFun(a.num_ * b.den_, a.den_ * b.num_);
    }

    RatFun& operator+=(const RatFun& b) { return *this = *this + b; }
    RatFun& operator-=(const RatFun& b) { return *this = *this - b; }
    RatFun& operator*=(const RatFun& b) { return *this = *this * b; }
    RatFun& operator/=(const RatFun& b) { return *this = *this / b; }

    friend bool operator==(const RatFun& a, const RatFun& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RatFun& a, const RatFun& b) { return !(a == b); }

    /// Exact value at e = x. Throws PoleError when the denominator vanishes.
    GaussianRational eval(const GaussianRational& x) const {
        GaussianRational d = den_.eval(x);
        if (d.is_zero())
            throw PoleError("RatFun: pole at e = " + x.str() +
                            " (denominator " + den_.str() + " vanishes)");
        return num_.eval(x) / d;
    }

    /// "p" or "p/q" with each side parenthesized unless it is a plain integer
    /// or a bare power of e, e.g. "(e^2 - 1)/(24*e)", "-1/24", "e + 1".
    std::string str() const {
        if (den_ == IntPoly(1)) return num_.str();
        return wrap(num_) + "/" + wrap(den_);
    }

private:
    IntPoly num_;
    IntPoly den_;

    static bool is_atom(const IntPoly& p) {
        int nonzero = 0;
        for (const auto& c : p.coeffs())
            if (c != 0) ++nonzero;
        if (nonzero > 1) return false;
        // single term: atom when it is a constant or a monic power of e
        if (p.degree() <= 0) return true;
        return p.leading() == 1;
    }

    static std::string wrap(const IntPoly& p) {
        std::string s = p.str();
        return is_atom(p) ? s : "(" + s + ")";
    }

    void normalize() {
        if (num_.is_zero()) {
            den_ = IntPoly(1);
            return;
        }
        IntPoly g = gcd(num_, den_);
        if (g.degree() > 0) {
            num_ = IntPoly::exact_div(num_, g);
            den_ = IntPoly::exact_div(den_, g);
        }
        // joint content 1, den leading coefficient positive
        BigInt cn = num_.content();
        BigInt cd = den_.content();
        BigInt cg = gcd(cn, cd);
        Rational scale(cn / cg, cd / cg); // lowest terms
        // num = primitive(num) * scale.num, den = primitive(den) * scale.den
        IntPoly pn = num_.primitive_part();
        IntPoly pd = den_.primitive_part();
        bool flip = num_.leading() < 0;          // primitive_part() forced leading > 0
        bool flip_d = den_.leading() < 0;
        num_ = scale.num() * pn;
        den_ = scale.den() * pd;
        if (flip) num_ = -num_;
        if (flip_d) {
            // move the denominator sign to the numerator
            num_ = -num_;
        }
    }
};

} // namespace lsv
