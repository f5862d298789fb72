#pragma once

#include <string>
#include <vector>

#include "lsv/errors.hpp"
#include "lsv/gaussian.hpp"
#include "lsv/rational.hpp"

namespace lsv {

/// Dense univariate polynomial over arbitrary-precision integers.
///
/// The variable is the deformation parameter written "e" in serialized form.
/// Coefficients are stored lowest degree first; the zero polynomial is the
/// empty coefficient sequence, so the leading coefficient is always nonzero.
class IntPoly {
public:
    IntPoly() = default;
    IntPoly(long long k) {
        if (k != 0) c_.push_back(BigInt(k));
    }
    IntPoly(BigInt k) {
        if (k != 0) c_.push_back(std::move(k));
    }
    explicit IntPoly(std::vector<BigInt> coeffs) : c_(std::move(coeffs)) { trim(); }

    /// The polynomial "e".
    static IntPoly variable() { return IntPoly(std::vector<BigInt>{BigInt(0), BigInt(1)}); }

    bool is_zero() const { return c_.empty(); }
    /// Degree; -1 for the zero polynomial.
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    BigInt coeff(std::size_t i) const { return i < c_.size() ? c_[i] : BigInt(0); }
    const BigInt& leading() const { return c_.back(); }
    const std::vector<BigInt>& coeffs() const { return c_; }

    friend IntPoly operator-(const IntPoly& a) {
        IntPoly r = a;
        for (auto& x : r.c_) x = -x;
        return r;
    }

    friend IntPoly operator+(const IntPoly& a, const IntPoly& b) {
        IntPoly r;
        r.c_.resize(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t i = 0; i < r.c_.size(); ++i)
            r.c_[i] = a.coeff(i) + b.coeff(i);
        r.trim();
        return r;
    }

    friend IntPoly operator-(const IntPoly& a, const IntPoly& b) { return a + (-b); }

    friend IntPoly operator*(const IntPoly& a, const IntPoly& b) {
        if (a.is_zero() || b.is_zero()) return IntPoly();
        IntPoly r;
        r.c_.assign(a.c_.size() + b.c_.size() - 1, BigInt(0));
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                r.c_[i + j] += a.c_[i] * b.c_[j];
        r.trim();
        return r;
    }

    friend bool operator==(const IntPoly& a, const IntPoly& b) { return a.c_ == b.c_; }
    friend bool operator!=(const IntPoly& a, const IntPoly& b) { return !(a == b); }

    /// gcd of the coefficients' absolute values; 0 for the zero polynomial.
    BigInt content() const {
        BigInt g(0);
        for (const auto& x : c_) {
            g = gcd(g, x < 0 ? BigInt(-x) : x);
            if (g == 1) break;
        }
        return g;
    }

    /// Content-free part with positive leading coefficient; zero maps to zero.
    IntPoly primitive_part() const {
        if (is_zero()) return IntPoly();
        BigInt g = content();
        if (leading() < 0) g = -g;
        IntPoly r = *this;
        for (auto& x : r.c_) x /= g;
        return r;
    }

    /// Multiplies by an integer scalar.
    friend IntPoly operator*(const BigInt& k, const IntPoly& a) {
        if (k == 0) return IntPoly();
        IntPoly r = a;
        for (auto& x : r.c_) x *= k;
        return r;
    }

    /// Exact division; throws if the divisor does not divide evenly over the integers.
    static IntPoly exact_div(const IntPoly& a, const IntPoly& b) {
        if (b.is_zero())
            throw DivisionByZeroError("IntPoly: division by zero polynomial");
        if (a.is_zero()) return IntPoly();
        if (a.degree() < b.degree())
            throw std::logic_error("IntPoly: inexact division");
        std::vector<BigInt> rem = a.c_;
        std::vector<BigInt> quo(a.c_.size() - b.c_.size() + 1, BigInt(0));
        for (int i = static_cast<int>(quo.size()) - 1; i >= 0; --i) {
            BigInt top = rem[i + b.degree()];
            if (top == 0) continue;
            if (top % b.leading() != 0)
                throw std::logic_error("IntPoly: inexact division");
            BigInt q = top / b.leading();
            quo[i] = q;
            for (std::size_t j = 0; j < b.c_.size(); ++j)
                rem[i + j] -= q * b.c_[j];
        }
        for (const auto& x : rem)
            if (x != 0) throw std::logic_error("IntPoly: inexact division");
        return IntPoly(std::move(quo));
    }

    /// Pseudo-remainder of a by b: lc(b)^(deg a - deg b + 1) * a mod b.
    static IntPoly pseudo_rem(const IntPoly& a, const IntPoly& b) {
        if (b.is_zero())
            throw DivisionByZeroError("IntPoly: pseudo-remainder by zero");
        IntPoly r = a;
        int db = b.degree();
        while (!r.is_zero() && r.degree() >= db) {
            int shift = r.degree() - db;
            BigInt lr = r.leading();
            IntPoly scaled = b.leading() * r;
            IntPoly sub;
            sub.c_.assign(shift, BigInt(0));
            for (const auto& x : b.c_) sub.c_.push_back(lr * x);
            sub.trim();
            r = scaled - sub;
        }
        return r;
    }

    GaussianRational eval(const GaussianRational& x) const {
        GaussianRational acc;
        for (std::size_t i = c_.size(); i-- > 0;)
            acc = acc * x + GaussianRational(Rational(c_[i]));
        return acc;
    }

    /// Terms in descending degree, e.g. "-2*e^2 - 2*e", "3*e + 1", "e", "0".
    std::string str() const {
        if (is_zero()) return "0";
        std::string out;
        for (int i = degree(); i >= 0; --i) {
            const BigInt& a = c_[i];
            if (a == 0) continue;
            bool first = out.empty();
            BigInt mag = a < 0 ? BigInt(-a) : a;
            if (first)
                out += a < 0 ? "-" : "";
            else
                out += a < 0 ? " - " : " + ";
            if (i == 0) {
                out += mag.str();
            } else {
                if (mag != 1) out += mag.str() + "*";
                out += i == 1 ? "e" : "e^" + std::to_string(i);
            }
        }
        return out;
    }

private:
    std::vector<BigInt> c_;

    void trim() {
        while (!c_.empty() && c_.back() == 0) c_.pop_back();
    }
};

/// A greatest common divisor over the rationals, normalized primitive with
/// positive leading coefficient. gcd(0, b) is the normalized b.
inline IntPoly gcd(const IntPoly& a, const IntPoly& b) {
    IntPoly u = a.primitive_part();
    IntPoly v = b.primitive_part();
    if (u.is_zero()) return v;
    if (v.is_zero()) return u;
    if (u.degree() < v.degree()) std::swap(u, v);
    while (!v.is_zero()) {
        IntPoly r = IntPoly::pseudo_rem(u, v).primitive_part();
        u = std::move(v);
        v = std::move(r);
    }
    return u.primitive_part();
}

} // namespace lsv
