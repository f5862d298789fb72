#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>

#include "lsv/basis.hpp"
#include "lsv/element.hpp"
#include "lsv/errors.hpp"
#include "lsv/rational.hpp"

namespace lsv {

/// Which coefficient family a table entry or override belongs to.
enum class CoeffFamily { f, g, h, d, phi, psi, rho, sigma };

inline const char* family_name(CoeffFamily fam) {
    switch (fam) {
    case CoeffFamily::f: return "f";
    case CoeffFamily::g: return "g";
    case CoeffFamily::h: return "h";
    case CoeffFamily::d: return "d";
    case CoeffFamily::phi: return "phi";
    case CoeffFamily::psi: return "psi";
    case CoeffFamily::rho: return "rho";
    default: return "sigma";
    }
}

/// The complete set of coefficient functions defining a candidate product on
/// the (super-)Virasoro basis.
///
/// Closed-form systems answer queries at any index. Table-backed systems hold
/// partial maps and fail loudly outside the stored window, so truncation can
/// never masquerade as a zero. Closed-form systems additionally accept
/// per-index overrides, which is how the perturbation tests poke single
/// entries.
///
/// Keys are stored as raw (long long, long long) pairs: plain integers in
/// even slots, doubled half-integers in odd slots.
template <class K>
class StructureSystem {
public:
    enum class Mode { CenterlessClosedForm, CentralClosedForm, TableBacked };

    static StructureSystem closed_form(Sector sector, bool central, K eps) {
        StructureSystem sys;
        sys.mode_ = central ? Mode::CentralClosedForm : Mode::CenterlessClosedForm;
        sys.sector_ = sector;
        sys.central_ = central;
        sys.eps_ = eps;
        if (central) sys.eps_inv_ = sys.eps_.inv();
        return sys;
    }

    static StructureSystem table_backed(Sector sector, bool central, K eps) {
        StructureSystem sys;
        sys.mode_ = Mode::TableBacked;
        sys.sector_ = sector;
        sys.central_ = central;
        sys.eps_ = eps;
        if (central) sys.eps_inv_ = sys.eps_.inv();
        return sys;
    }

    Mode mode() const { return mode_; }
    Sector sector() const { return sector_; }
    bool central() const { return central_; }
    const K& eps() const { return eps_; }

    /// Coefficient of L(m+n) in L(m)*L(n).
    K f(long long m, long long n) const {
        if (auto v = stored(CoeffFamily::f, m, n)) return *v;
        K one = K::from_int(1);
        return K::from_int(-n) * (one + eps_ * K::from_int(n)) /
               (one + eps_ * K::from_int(m + n));
    }

    /// Coefficient of G(m+r) in L(m)*G(r).
    K g(long long m, HalfInt r) const {
        check_sector(r);
        if (auto v = stored(CoeffFamily::g, m, r.twice)) return *v;
        K one = K::from_int(1);
        // -(m/2 + r)(1 + 2*eps*r) / (1 + 2*eps*(m+r))
        return K::from_rational(Rational(-(m + r.twice), 2)) *
               (one + eps_ * K::from_int(r.twice)) /
               (one + eps_ * K::from_int(2 * m + r.twice));
    }

    /// Coefficient of G(m+r) in G(r)*L(m).
    K h(HalfInt r, long long m) const {
        check_sector(r);
        if (auto v = stored(CoeffFamily::h, r.twice, m)) return *v;
        K one = K::from_int(1);
        return K::from_int(-m) * (one + eps_ * K::from_int(m)) /
               (one + eps_ * K::from_int(2 * m + r.twice));
    }

    /// Coefficient of L(r+s) in G(r)*G(s).
    K d(HalfInt r, HalfInt s) const {
        check_sector(r);
        check_sector(s);
        if (auto v = stored(CoeffFamily::d, r.twice, s.twice)) return *v;
        K one = K::from_int(1);
        return (one + eps_ * K::from_int(s.twice)) /
               (one + eps_ * K::from_int((r.twice + s.twice) / 2));
    }

    /// Central coefficient of L(m)*L(n).
    K phi(long long m, long long n) const {
        require_central("phi");
        if (auto v = stored(CoeffFamily::phi, m, n)) return *v;
        if (m + n != 0) return K();
        BigInt mm(m);
        K poly_part = K::from_rational(Rational(mm * mm * mm - mm, 24));
        K eps_part = (eps_ - eps_inv_) * K::from_rational(Rational(mm * mm, 24));
        return poly_part + eps_part;
    }

    /// Central coefficient of L(m)*G(r); identically zero in closed form.
    K psi(long long m, HalfInt r) const {
        require_central("psi");
        check_sector(r);
        if (auto v = stored(CoeffFamily::psi, m, r.twice)) return *v;
        return K();
    }

    /// Central coefficient of G(r)*L(m); identically zero in closed form.
    K rho(HalfInt r, long long m) const {
        require_central("rho");
        check_sector(r);
        if (auto v = stored(CoeffFamily::rho, r.twice, m)) return *v;
        return K();
    }

    /// Central coefficient of G(r)*G(s).
    K sigma(HalfInt r, HalfInt s) const {
        require_central("sigma");
        check_sector(r);
        check_sector(s);
        if (auto v = stored(CoeffFamily::sigma, r.twice, s.twice)) return *v;
        if (r.twice + s.twice != 0) return K();
        BigInt dr(r.twice);
        K poly_part = K::from_rational(Rational(dr * dr - 1, 24));
        K eps_part = (eps_ - eps_inv_) * K::from_rational(Rational(dr, 24));
        return poly_part + eps_part;
    }

    /// Installs an override (closed-form modes) or a table entry (table mode).
    /// Keys use the raw convention: doubled values in odd slots.
    void set_entry(CoeffFamily fam, long long a, long long b, K value) {
        entries_[fam][{a, b}] = std::move(value);
    }

    bool has_entry(CoeffFamily fam, long long a, long long b) const {
        auto fit = entries_.find(fam);
        return fit != entries_.end() && fit->second.count({a, b}) > 0;
    }

    /// Product of two basis vectors.
    Element<K> basis_product(BasisIndex x, BasisIndex y) const {
        using Kind = BasisIndex::Kind;
        if (x.kind == Kind::C || y.kind == Kind::C) {
            if (!central_)
                throw ModeError("central basis vector in a centerless system");
            return Element<K>(); // c is the annihilator
        }
        Element<K> out;
        if (x.kind == Kind::L && y.kind == Kind::L) {
            long long m = x.m(), n = y.m();
            out.add(BasisIndex::L(m + n), f(m, n));
            if (central_) out.add(BasisIndex::C(), phi(m, n));
        } else if (x.kind == Kind::L && y.kind == Kind::G) {
            long long m = x.m();
            HalfInt r = y.r();
            out.add(BasisIndex::G(m + r), g(m, r));
            if (central_) out.add(BasisIndex::C(), psi(m, r));
        } else if (x.kind == Kind::G && y.kind == Kind::L) {
            HalfInt r = x.r();
            long long m = y.m();
            out.add(BasisIndex::G(m + r), h(r, m));
            if (central_) out.add(BasisIndex::C(), rho(r, m));
        } else {
            HalfInt r = x.r(), s = y.r();
            out.add(BasisIndex::L((r + s).as_integer()), d(r, s));
            if (central_) out.add(BasisIndex::C(), sigma(r, s));
        }
        return out;
    }

private:
    Mode mode_ = Mode::CenterlessClosedForm;
    Sector sector_ = Sector::NeveuSchwarz;
    bool central_ = false;
    K eps_;
    K eps_inv_;
    std::map<CoeffFamily, std::map<std::pair<long long, long long>, K>> entries_;

    std::optional<K> stored(CoeffFamily fam, long long a, long long b) const {
        auto fit = entries_.find(fam);
        if (fit != entries_.end()) {
            auto it = fit->second.find({a, b});
            if (it != fit->second.end()) return it->second;
        }
        if (mode_ == Mode::TableBacked)
            throw OutOfWindowError(std::string("table lookup outside window: ") +
                                   family_name(fam) + "(" + std::to_string(a) + "," +
                                   std::to_string(b) + ") [raw keys]");
        return std::nullopt;
    }

    void check_sector(HalfInt r) const {
        if (!r.matches(sector_))
            throw SectorError("odd index " + r.str() + " has the wrong parity for theta = " +
                              sector_theta_string(sector_));
    }

    void require_central(const char* what) const {
        if (!central_)
            throw ModeError(std::string(what) + " is undefined in a centerless system");
    }
};

/// Bilinear extension of the basis products to whole elements.
template <class K>
Element<K> multiply(const StructureSystem<K>& sys, const Element<K>& x, const Element<K>& y) {
    Element<K> out;
    for (const auto& [bx, cx] : x.terms())
        for (const auto& [by, cy] : y.terms())
            out += (cx * cy) * sys.basis_product(bx, by);
    return out;
}

/// x*y - (-1)^(|x||y|) y*x for parity-homogeneous x, y.
template <class K>
Element<K> super_commutator(const StructureSystem<K>& sys, const Element<K>& x,
                            const Element<K>& y) {
    auto px = x.homogeneous_parity();
    auto py = y.homogeneous_parity();
    if (!px || !py)
        throw ParityError("super_commutator requires parity-homogeneous arguments");
    Element<K> xy = multiply(sys, x, y);
    Element<K> yx = multiply(sys, y, x);
    bool both_odd = *px == Parity::Odd && *py == Parity::Odd;
    return both_odd ? xy + yx : xy - yx;
}

/// (x, y, z) = (x*y)*z - x*(y*z).
template <class K>
Element<K> associator(const StructureSystem<K>& sys, const Element<K>& x, const Element<K>& y,
                      const Element<K>& z) {
    return multiply(sys, multiply(sys, x, y), z) - multiply(sys, x, multiply(sys, y, z));
}

/// The reference super-Virasoro bracket of two basis vectors. With
/// central = false the central charge terms are dropped.
template <class K>
Element<K> target_bracket(Sector sector, bool central, BasisIndex x, BasisIndex y) {
    using Kind = BasisIndex::Kind;
    Element<K> out;
    if (x.kind == Kind::C || y.kind == Kind::C) return out;
    if (x.kind == Kind::L && y.kind == Kind::L) {
        long long m = x.m(), n = y.m();
        out.add(BasisIndex::L(m + n), K::from_int(m - n));
        if (central && m + n == 0) {
            BigInt mm(m);
            out.add(BasisIndex::C(), K::from_rational(Rational(mm * mm * mm - mm, 12)));
        }
    } else if (x.kind == Kind::L && y.kind == Kind::G) {
        long long m = x.m();
        HalfInt r = y.r();
        out.add(BasisIndex::G(m + r), K::from_rational(Rational(m - r.twice, 2)));
    } else if (x.kind == Kind::G && y.kind == Kind::L) {
        HalfInt r = x.r();
        long long m = y.m();
        out.add(BasisIndex::G(m + r), K::from_rational(Rational(r.twice - m, 2)));
    } else {
        HalfInt r = x.r(), s = y.r();
        out.add(BasisIndex::L((r + s).as_integer()), K::from_int(2));
        if (central && r.twice + s.twice == 0) {
            BigInt dr(r.twice);
            out.add(BasisIndex::C(), K::from_rational(Rational(dr * dr - 1, 12)));
        }
    }
    return out;
}

/// Bilinear extension of a basis bracket to elements; used by the
/// super-Jacobi sweep which nests brackets.
template <class K, class Bracket>
Element<K> bracket_extend(const Bracket& bracket, const Element<K>& x, const Element<K>& y) {
    Element<K> out;
    for (const auto& [bx, cx] : x.terms())
        for (const auto& [by, cy] : y.terms())
            out += (cx * cy) * bracket(bx, by);
    return out;
}

} // namespace lsv
