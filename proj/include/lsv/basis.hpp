#pragma once

#include <cctype>
#include <compare>
#include <string>

#include "lsv/errors.hpp"
#include "lsv/rational.hpp"

namespace lsv {

/// Sector of the odd indices: theta = 0 (Ramond, integral) or
/// theta = 1/2 (Neveu-Schwarz, half-integral).
enum class Sector { Ramond, NeveuSchwarz };

inline int theta_doubled(Sector s) { return s == Sector::Ramond ? 0 : 1; }

inline std::string sector_theta_string(Sector s) {
    return s == Sector::Ramond ? "0" : "1/2";
}

/// Half-integer stored as its double, so all index arithmetic stays exact
/// and parity against the sector is a simple mod-2 check.
struct HalfInt {
    long long twice = 0;

    HalfInt() = default;
    explicit HalfInt(long long doubled) : twice(doubled) {}
    static HalfInt integer(long long k) { return HalfInt(2 * k); }

    bool is_integer() const { return twice % 2 == 0; }
    long long as_integer() const {
        if (!is_integer())
            throw std::logic_error("HalfInt: not an integer: " + str());
        return twice / 2;
    }
    Rational value() const { return Rational(twice, 2); }

    bool matches(Sector s) const {
        return ((twice % 2) + 2) % 2 == theta_doubled(s);
    }

    friend HalfInt operator-(HalfInt a) { return HalfInt(-a.twice); }
    friend HalfInt operator+(HalfInt a, HalfInt b) { return HalfInt(a.twice + b.twice); }
    friend HalfInt operator-(HalfInt a, HalfInt b) { return HalfInt(a.twice - b.twice); }
    friend HalfInt operator+(long long m, HalfInt r) { return HalfInt(2 * m + r.twice); }
    friend HalfInt operator+(HalfInt r, long long m) { return m + r; }
    friend auto operator<=>(HalfInt a, HalfInt b) = default;

    /// "k/2" in lowest terms: "1/2", "-3/2", or "2" for integral values.
    std::string str() const {
        if (is_integer()) return std::to_string(twice / 2);
        return std::to_string(twice) + "/2";
    }

    static HalfInt parse(const std::string& s) {
        std::size_t pos = 0;
        bool neg = false;
        if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) {
            neg = s[pos] == '-';
            ++pos;
        }
        std::size_t dig = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (dig == pos) throw ParseError("expected half-integer", pos);
        long long whole = std::stoll(s.substr(dig, pos - dig));
        long long doubled;
        if (pos < s.size() && s[pos] == '/') {
            ++pos;
            if (s.substr(pos) != "2") throw ParseError("half-integer denominator must be 2", pos);
            pos = s.size();
            doubled = whole;
        } else {
            doubled = 2 * whole;
        }
        if (pos != s.size()) throw ParseError("trailing characters in half-integer", pos);
        return HalfInt(neg ? -doubled : doubled);
    }
};

/// One basis vector of the (super-)Virasoro algebra: L(m), G(r) or the
/// central vector c.
struct BasisIndex {
    enum class Kind { L, G, C };

    Kind kind = Kind::L;
    long long payload = 0; // m for L, doubled r for G, 0 for C

    static BasisIndex L(long long m) { return {Kind::L, m}; }
    static BasisIndex G(HalfInt r) { return {Kind::G, r.twice}; }
    static BasisIndex C() { return {Kind::C, 0}; }

    long long m() const {
        if (kind != Kind::L) throw std::logic_error("BasisIndex: not an L index");
        return payload;
    }
    HalfInt r() const {
        if (kind != Kind::G) throw std::logic_error("BasisIndex: not a G index");
        return HalfInt(payload);
    }

    bool is_even() const { return kind != Kind::G; } // L and c are even, G odd

    friend auto operator<=>(const BasisIndex&, const BasisIndex&) = default;

    std::string str() const {
        switch (kind) {
        case Kind::L: return "L(" + std::to_string(payload) + ")";
        case Kind::G: return "G(" + HalfInt(payload).str() + ")";
        default: return "c";
        }
    }

    static BasisIndex parse(const std::string& s) {
        if (s == "c") return C();
        if (s.size() >= 4 && s[1] == '(' && s.back() == ')') {
            std::string inner = s.substr(2, s.size() - 3);
            if (s[0] == 'L') {
                HalfInt v = HalfInt::parse(inner);
                if (!v.is_integer()) throw ParseError("L index must be an integer", 2);
                return L(v.as_integer());
            }
            if (s[0] == 'G') return G(HalfInt::parse(inner));
        }
        throw ParseError("expected basis index 'L(m)', 'G(r)' or 'c', got '" + s + "'", 0);
    }
};

} // namespace lsv
