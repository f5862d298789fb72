#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <string>

#include "lsv/basis.hpp"
#include "lsv/errors.hpp"

namespace lsv {

enum class Parity { Even, Odd };

/// Finite formal linear combination of basis vectors with coefficients in the
/// scalar field K. Zero coefficients are never stored, so structural equality
/// of the term maps is exact value equality.
template <class K>
class Element {
public:
    Element() = default;

    static Element basis(BasisIndex b) {
        Element e;
        e.terms_.emplace(b, K::from_int(1));
        return e;
    }
    static Element term(BasisIndex b, K coeff) {
        Element e;
        e.add(b, std::move(coeff));
        return e;
    }

    const std::map<BasisIndex, K>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    K coeff(BasisIndex b) const {
        auto it = terms_.find(b);
        return it == terms_.end() ? K() : it->second;
    }

    void add(BasisIndex b, const K& c) {
        if (c.is_zero()) return;
        auto [it, inserted] = terms_.emplace(b, c);
        if (!inserted) {
            it->second += c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    friend Element operator+(const Element& a, const Element& b) {
        Element r = a;
        for (const auto& [idx, c] : b.terms_) r.add(idx, c);
        return r;
    }
    friend Element operator-(const Element& a, const Element& b) {
        Element r = a;
        for (const auto& [idx, c] : b.terms_) r.add(idx, -c);
        return r;
    }
    friend Element operator-(const Element& a) {
        Element r;
        for (const auto& [idx, c] : a.terms_) r.terms_.emplace(idx, -c);
        return r;
    }
    friend Element operator*(const K& s, const Element& a) {
        Element r;
        for (const auto& [idx, c] : a.terms_) r.add(idx, s * c);
        return r;
    }

    Element& operator+=(const Element& b) { return *this = *this + b; }
    Element& operator-=(const Element& b) { return *this = *this - b; }

    friend bool operator==(const Element& a, const Element& b) {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const Element& a, const Element& b) { return !(a == b); }

    /// Parity of a homogeneous element; nullopt for mixed ones. The zero
    /// element counts as even.
    std::optional<Parity> homogeneous_parity() const {
        bool has_even = false, has_odd = false;
        for (const auto& [idx, c] : terms_)
            (idx.is_even() ? has_even : has_odd) = true;
        if (has_even && has_odd) return std::nullopt;
        return has_odd ? Parity::Odd : Parity::Even;
    }

    /// "0", "L(1)", "4*L(0) + (1/2)*c"; non-atomic coefficients are
    /// parenthesized, coefficient 1 is omitted, -1 prints as a leading "-".
    std::string str() const {
        if (terms_.empty()) return "0";
        std::string out;
        for (const auto& [idx, c] : terms_) {
            std::string cs = c.str();
            std::string piece;
            if (cs == "1")
                piece = idx.str();
            else if (cs == "-1")
                piece = "-" + idx.str();
            else
                piece = maybe_paren(cs) + "*" + idx.str();
            if (!out.empty()) out += " + ";
            out += piece;
        }
        return out;
    }

private:
    std::map<BasisIndex, K> terms_;

    static bool plain_number(const std::string& s) {
        for (char c : s)
            if (!std::isdigit(static_cast<unsigned char>(c))) return false;
        return true;
    }

    static std::string maybe_paren(const std::string& s) {
        return plain_number(s) ? s : "(" + s + ")";
    }
};

} // namespace lsv
