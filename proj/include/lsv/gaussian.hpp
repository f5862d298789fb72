#pragma once

#include <cctype>
#include <string>
#include <utility>

#include "lsv/errors.hpp"
#include "lsv/rational.hpp"

namespace lsv {

/// Exact Gaussian rational a + b*i with rational a, b and i^2 = -1.
class GaussianRational {
public:
    GaussianRational() = default;
    GaussianRational(Rational re) : re_(std::move(re)) {}
    GaussianRational(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

    static GaussianRational from_int(long long n) { return GaussianRational(Rational(n)); }
    static GaussianRational from_rational(const Rational& q) { return GaussianRational(q); }
    static GaussianRational i() { return GaussianRational(Rational(0), Rational(1)); }

    const Rational& re() const { return re_; }
    const Rational& im() const { return im_; }

    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
    bool is_real() const { return im_.is_zero(); }

    /// True when 1/z is a (real) integer; used for the admissibility check on epsilon.
    bool inverse_is_integer() const {
        if (is_zero() || !im_.is_zero()) return false;
        // 1/(p/q) = q/p is an integer iff p = +-1 in lowest terms.
        return re_.num() == 1 || re_.num() == -1;
    }

    friend GaussianRational operator-(const GaussianRational& a) {
        return GaussianRational(-a.re_, -a.im_);
    }
    friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
        return GaussianRational(a.re_ + b.re_, a.im_ + b.im_);
    }
    friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
        return GaussianRational(a.re_ - b.re_, a.im_ - b.im_);
    }
    friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
        return GaussianRational(a.re_ * b.re_ - a.im_ * b.im_,
                                a.re_ * b.im_ + a.im_ * b.re_);
    }

    GaussianRational inv() const {
        if (is_zero())
            throw DivisionByZeroError("GaussianRational: inverse of zero");
        Rational n = re_ * re_ + im_ * im_;
        return GaussianRational(re_ / n, -im_ / n);
    }

    friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
        return a * b.inv();
    }

    GaussianRational& operator+=(const GaussianRational& b) { return *this = *this + b; }
    GaussianRational& operator-=(const GaussianRational& b) { return *this = *this - b; }
    GaussianRational& operator*=(const GaussianRational& b) { return *this = *this * b; }

    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) {
        return !(a == b);
    }

    /// "3/5", "-2", "2/3i", "-i", "1/2+1/3i", "1/2-1/3i", "0".
    std::string str() const {
        if (im_.is_zero()) return re_.str();
        std::string im_part;
        if (im_.is_one())
            im_part = "i";
        else if (im_ == Rational(-1))
            im_part = "-i";
        else
            im_part = im_.str() + "i";
        if (re_.is_zero()) return im_part;
        if (im_.sign() > 0) return re_.str() + "+" + im_part;
        return re_.str() + im_part; // sign carried by the numerator
    }

    /// Parses the formats produced by str(). Throws ParseError.
    static GaussianRational parse(const std::string& s);

private:
    Rational re_;
    Rational im_;
};

namespace detail {

inline Rational parse_rational_at(const std::string& s, std::size_t& pos) {
    std::size_t start = pos;
    bool neg = false;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
        neg = s[pos] == '-';
        ++pos;
    }
    std::size_t dig = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == dig) throw ParseError("expected digits", start);
    BigInt num(s.substr(dig, pos - dig));
    BigInt den(1);
    if (pos < s.size() && s[pos] == '/') {
        ++pos;
        std::size_t d2 = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == d2) throw ParseError("expected digits after '/'", pos);
        den = BigInt(s.substr(d2, pos - d2));
    }
    return Rational(neg ? -num : num, den);
}

} // namespace detail

inline GaussianRational GaussianRational::parse(const std::string& s) {
    if (s.empty()) throw ParseError("empty number", 0);
    std::size_t pos = 0;
    auto parse_part = [&](bool sign_required) -> std::pair<Rational, bool> {
        // Returns (value, was_imaginary).
        std::size_t start = pos;
        bool neg = false;
        if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
            neg = s[pos] == '-';
            ++pos;
        } else if (sign_required) {
            throw ParseError("expected '+' or '-'", pos);
        }
        if (pos < s.size() && s[pos] == 'i') {
            ++pos;
            return {neg ? Rational(-1) : Rational(1), true};
        }
        pos = start;
        Rational q = detail::parse_rational_at(s, pos);
        if (pos < s.size() && s[pos] == 'i') {
            ++pos;
            return {q, true};
        }
        return {q, false};
    };

    auto [first, first_imag] = parse_part(false);
    if (pos == s.size())
        return first_imag ? GaussianRational(Rational(0), first) : GaussianRational(first);
    if (first_imag) throw ParseError("unexpected trailing characters", pos);
    auto [second, second_imag] = parse_part(true);
    if (!second_imag) throw ParseError("expected imaginary part", pos);
    if (pos != s.size()) throw ParseError("unexpected trailing characters", pos);
    return GaussianRational(first, second);
}

} // namespace lsv
