#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "lsv/element.hpp"
#include "lsv/structure.hpp"

namespace lsv {

/// Finite index box over which identities are exhaustively instantiated.
/// Even indices range over [-N, N]; odd indices over the sector-consistent
/// half-integers r with |2r| <= 2N (Ramond) or |2r| <= 2N-1 (Neveu-Schwarz).
struct Window {
    int n = 8;
    Sector sector = Sector::NeveuSchwarz;

    std::vector<long long> even_indices() const {
        std::vector<long long> out;
        for (long long m = -n; m <= n; ++m) out.push_back(m);
        return out;
    }

    std::vector<HalfInt> odd_indices() const {
        std::vector<HalfInt> out;
        int off = theta_doubled(sector);
        long long lo = -2LL * n + off;
        for (long long d = lo; d <= 2LL * n; d += 2)
            out.push_back(HalfInt(d));
        return out;
    }

    bool contains_even(long long m) const { return -n <= m && m <= n; }
    bool contains_odd(HalfInt r) const {
        return r.matches(sector) && -2LL * n <= r.twice && r.twice <= 2LL * n;
    }

    std::vector<BasisIndex> basis(bool with_central) const {
        std::vector<BasisIndex> out;
        for (long long m : even_indices()) out.push_back(BasisIndex::L(m));
        for (HalfInt r : odd_indices()) out.push_back(BasisIndex::G(r));
        if (with_central) out.push_back(BasisIndex::C());
        return out;
    }
};

/// One failed identity instance: which identity, at which indices, with the
/// exact nonzero residual (serialized).
struct Violation {
    std::string identity;
    std::vector<std::pair<std::string, std::string>> indices; // name -> rendered value
    std::string residual;                                      // empty for unchecked entries
    std::vector<long long> sort_key;                           // raw index values
};

/// Result of a checker sweep. `violations` holds exact nonzero residuals;
/// `unchecked` lists instances a table-backed system could not evaluate
/// because an intermediate index left the stored window. An empty
/// `violations` list means every checked instance holds exactly.
struct ViolationReport {
    std::vector<Violation> violations;
    std::vector<Violation> unchecked;
    std::map<std::string, long long> checked_counts; // per identity id

    bool clean() const { return violations.empty(); }
    long long total_checked() const {
        long long t = 0;
        for (const auto& [id, c] : checked_counts) t += c;
        return t;
    }

    void sort() {
        auto less = [](const Violation& a, const Violation& b) {
            if (a.identity != b.identity) return a.identity < b.identity;
            return a.sort_key < b.sort_key;
        };
        std::sort(violations.begin(), violations.end(), less);
        std::sort(unchecked.begin(), unchecked.end(), less);
    }

    void merge(const ViolationReport& other) {
        violations.insert(violations.end(), other.violations.begin(), other.violations.end());
        unchecked.insert(unchecked.end(), other.unchecked.begin(), other.unchecked.end());
        for (const auto& [id, c] : other.checked_counts) checked_counts[id] += c;
        sort();
    }
};

namespace detail {

inline std::string render_even(long long m) { return std::to_string(m); }
inline std::string render_odd(HalfInt r) { return r.str(); }

struct InstanceRecorder {
    ViolationReport& report;
    std::string identity;
    std::vector<std::pair<std::string, std::string>> indices;
    std::vector<long long> keys;

    void index_even(const std::string& name, long long m) {
        indices.emplace_back(name, render_even(m));
        keys.push_back(m);
    }
    void index_odd(const std::string& name, HalfInt r) {
        indices.emplace_back(name, render_odd(r));
        keys.push_back(r.twice);
    }
    void outcome_checked() { report.checked_counts[identity]++; }
    void violation(const std::string& residual) {
        report.violations.push_back({identity, indices, residual, keys});
    }
    void unchecked() {
        report.unchecked.push_back({identity, indices, "", keys});
    }
};

/// Runs one identity instance. Out-of-window table lookups are recorded as
/// unchecked rather than violations; any other error propagates.
template <class Body>
void run_instance(InstanceRecorder rec, const Body& body) {
    try {
        body(rec);
        rec.outcome_checked();
    } catch (const OutOfWindowError&) {
        rec.unchecked();
    }
}

} // namespace detail

/// Scalar closure conditions forced by the sub-adjacent brackets: the three
/// centerless families and, in central mode, the three cocycle symmetries.
template <class K>
ViolationReport check_closure(const StructureSystem<K>& sys, const Window& w) {
    ViolationReport report;
    auto evens = w.even_indices();
    auto odds = w.odd_indices();

    for (long long m : evens)
        for (long long n : evens) {
            detail::InstanceRecorder rec{report, "3.2-1"};
            rec.index_even("m", m);
            rec.index_even("n", n);
            detail::run_instance(rec, [&](auto& r) {
                K res = sys.f(m, n) - sys.f(n, m) - K::from_int(m - n);
                if (!res.is_zero()) r.violation(res.str());
            });
        }

    for (long long m : evens)
        for (HalfInt r : odds) {
            detail::InstanceRecorder rec{report, "3.2-2"};
            rec.index_even("m", m);
            rec.index_odd("r", r);
            detail::run_instance(rec, [&](auto& rr) {
                K res = sys.g(m, r) - sys.h(r, m) -
                        K::from_rational(Rational(m - r.twice, 2));
                if (!res.is_zero()) rr.violation(res.str());
            });
        }

    for (HalfInt r : odds)
        for (HalfInt s : odds) {
            detail::InstanceRecorder rec{report, "3.2-3"};
            rec.index_odd("r", r);
            rec.index_odd("s", s);
            detail::run_instance(rec, [&](auto& rr) {
                K res = sys.d(r, s) + sys.d(s, r) - K::from_int(2);
                if (!res.is_zero()) rr.violation(res.str());
            });
        }

    if (sys.central()) {
        for (long long m : evens)
            for (long long n : evens) {
                detail::InstanceRecorder rec{report, "4.7-1"};
                rec.index_even("m", m);
                rec.index_even("n", n);
                detail::run_instance(rec, [&](auto& r) {
                    K target = m + n == 0
                                   ? K::from_rational(Rational(
                                         BigInt(m) * m * m - m, 12))
                                   : K();
                    K res = sys.phi(m, n) - sys.phi(n, m) - target;
                    if (!res.is_zero()) r.violation(res.str());
                });
            }
        for (HalfInt r : odds)
            for (HalfInt s : odds) {
                detail::InstanceRecorder rec{report, "4.7-2"};
                rec.index_odd("r", r);
                rec.index_odd("s", s);
                detail::run_instance(rec, [&](auto& rr) {
                    K target = r.twice + s.twice == 0
                                   ? K::from_rational(Rational(
                                         BigInt(r.twice) * r.twice - 1, 12))
                                   : K();
                    K res = sys.sigma(r, s) + sys.sigma(s, r) - target;
                    if (!res.is_zero()) rr.violation(res.str());
                });
            }
        for (long long m : evens)
            for (HalfInt r : odds) {
                detail::InstanceRecorder rec{report, "4.7-3"};
                rec.index_even("m", m);
                rec.index_odd("r", r);
                detail::run_instance(rec, [&](auto& rr) {
                    K res = sys.psi(m, r) - sys.rho(r, m);
                    if (!res.is_zero()) rr.violation(res.str());
                });
            }
    }

    report.sort();
    return report;
}

namespace detail {

/// Splits an associator-symmetry residual into its body part (L/G components)
/// and its central part, reporting them under separate identity ids.
template <class K>
void report_leftsym_residual(InstanceRecorder& rec_body, InstanceRecorder& rec_central,
                             bool central, const Element<K>& residual) {
    Element<K> body, center;
    for (const auto& [idx, c] : residual.terms()) {
        if (idx.kind == BasisIndex::Kind::C)
            center.add(idx, c);
        else
            body.add(idx, c);
    }
    if (!body.is_zero()) rec_body.violation(body.str());
    rec_body.outcome_checked();
    if (central) {
        if (!center.is_zero()) rec_central.violation(center.coeff(BasisIndex::C()).str());
        rec_central.outcome_checked();
    }
}

} // namespace detail

/// Graded symmetry of the associator in its first two arguments,
/// (x,y,z) = (-1)^(|x||y|) (y,x,z), checked as an exact element identity for
/// every basis triple with all indices in the window. Body and central parts
/// are reported under their own identity families.
template <class K>
ViolationReport check_left_symmetry(const StructureSystem<K>& sys, const Window& w) {
    ViolationReport report;
    auto evens = w.even_indices();
    auto odds = w.odd_indices();
    const bool central = sys.central();

    auto basis_L = [](long long m) { return Element<K>::basis(BasisIndex::L(m)); };
    auto basis_G = [](HalfInt r) { return Element<K>::basis(BasisIndex::G(r)); };

    auto check_triple = [&](detail::InstanceRecorder rec_body,
                            detail::InstanceRecorder rec_central, const Element<K>& x,
                            const Element<K>& y, const Element<K>& z, bool both_odd) {
        try {
            Element<K> lhs = associator(sys, x, y, z);
            Element<K> rhs = associator(sys, y, x, z);
            Element<K> residual = both_odd ? lhs + rhs : lhs - rhs;
            detail::report_leftsym_residual(rec_body, rec_central, central, residual);
        } catch (const OutOfWindowError&) {
            rec_body.unchecked();
            if (central) rec_central.unchecked();
        }
    };

    for (long long m : evens)
        for (long long n : evens)
            for (long long l : evens) {
                detail::InstanceRecorder rb{report, "3.3-1"}, rc{report, "4.8"};
                rb.index_even("m", m), rb.index_even("n", n), rb.index_even("l", l);
                rc.indices = rb.indices, rc.keys = rb.keys;
                check_triple(rb, rc, basis_L(m), basis_L(n), basis_L(l), false);
            }
    for (long long m : evens)
        for (long long n : evens)
            for (HalfInt r : odds) {
                detail::InstanceRecorder rb{report, "3.3-2"}, rc{report, "4.9"};
                rb.index_even("m", m), rb.index_even("n", n), rb.index_odd("r", r);
                rc.indices = rb.indices, rc.keys = rb.keys;
                check_triple(rb, rc, basis_L(m), basis_L(n), basis_G(r), false);
            }
    for (long long m : evens)
        for (HalfInt r : odds)
            for (long long n : evens) {
                detail::InstanceRecorder rb{report, "3.3-3"}, rc{report, "4.10"};
                rb.index_even("m", m), rb.index_odd("r", r), rb.index_even("n", n);
                rc.indices = rb.indices, rc.keys = rb.keys;
                check_triple(rb, rc, basis_L(m), basis_G(r), basis_L(n), false);
            }
    for (long long m : evens)
        for (HalfInt r : odds)
            for (HalfInt s : odds) {
                detail::InstanceRecorder rb{report, "3.3-4"}, rc{report, "4.11"};
                rb.index_even("m", m), rb.index_odd("r", r), rb.index_odd("s", s);
                rc.indices = rb.indices, rc.keys = rb.keys;
                check_triple(rb, rc, basis_L(m), basis_G(r), basis_G(s), false);
            }
    for (HalfInt r : odds)
        for (HalfInt s : odds)
            for (long long m : evens) {
                detail::InstanceRecorder rb{report, "3.3-5"}, rc{report, "4.12"};
                rb.index_odd("r", r), rb.index_odd("s", s), rb.index_even("m", m);
                rc.indices = rb.indices, rc.keys = rb.keys;
                check_triple(rb, rc, basis_G(r), basis_G(s), basis_L(m), true);
            }
    for (HalfInt r : odds)
        for (HalfInt s : odds)
            for (HalfInt t : odds) {
                detail::InstanceRecorder rb{report, "3.3-6"}, rc{report, "4.13"};
                rb.index_odd("r", r), rb.index_odd("s", s), rb.index_odd("t", t);
                rc.indices = rb.indices, rc.keys = rb.keys;
                check_triple(rb, rc, basis_G(r), basis_G(s), basis_G(t), true);
            }

    report.sort();
    return report;
}

/// super_commutator(x, y) must reproduce the reference bracket on every
/// windowed basis pair.
template <class K>
ViolationReport check_bracket_compatibility(const StructureSystem<K>& sys, const Window& w) {
    ViolationReport report;
    const bool central = sys.central();

    auto pair_tag = [](BasisIndex a, BasisIndex b) {
        auto letter = [](BasisIndex i) {
            switch (i.kind) {
            case BasisIndex::Kind::L: return 'L';
            case BasisIndex::Kind::G: return 'G';
            default: return 'c';
            }
        };
        return std::string("2.5-") + letter(a) + letter(b);
    };

    for (BasisIndex a : w.basis(central))
        for (BasisIndex b : w.basis(central)) {
            detail::InstanceRecorder rec{report, pair_tag(a, b)};
            int slot = 0;
            for (BasisIndex i : {a, b}) {
                static const char* even_names[] = {"m", "n"};
                static const char* odd_names[] = {"r", "s"};
                if (i.kind == BasisIndex::Kind::L)
                    rec.index_even(even_names[slot], i.m());
                else if (i.kind == BasisIndex::Kind::G)
                    rec.index_odd(odd_names[slot], i.r());
                ++slot;
            }
            detail::run_instance(rec, [&](auto& r) {
                Element<K> got = super_commutator(sys, Element<K>::basis(a), Element<K>::basis(b));
                Element<K> want = target_bracket<K>(w.sector, central, a, b);
                Element<K> res = got - want;
                if (!res.is_zero()) r.violation(res.str());
            });
        }

    report.sort();
    return report;
}

/// Super-Jacobi identity of a basis bracket (the reference bracket by
/// default), on all windowed basis triples.
template <class K>
ViolationReport check_super_jacobi(
    Sector sector, const Window& w,
    std::function<Element<K>(BasisIndex, BasisIndex)> bracket = nullptr) {
    if (!bracket)
        bracket = [sector](BasisIndex x, BasisIndex y) {
            return target_bracket<K>(sector, true, x, y);
        };
    ViolationReport report;

    auto letter = [](BasisIndex i) {
        switch (i.kind) {
        case BasisIndex::Kind::L: return 'L';
        case BasisIndex::Kind::G: return 'G';
        default: return 'c';
        }
    };

    auto parity_of = [](BasisIndex i) { return i.is_even() ? 0 : 1; };

    for (BasisIndex a : w.basis(true))
        for (BasisIndex b : w.basis(true))
            for (BasisIndex c : w.basis(true)) {
                detail::InstanceRecorder rec{report, std::string("2.2-") + letter(a) +
                                                         letter(b) + letter(c)};
                int even_slot = 0, odd_slot = 0;
                for (BasisIndex i : {a, b, c}) {
                    static const char* even_names[] = {"m", "n", "l"};
                    static const char* odd_names[] = {"r", "s", "t"};
                    if (i.kind == BasisIndex::Kind::L)
                        rec.index_even(even_names[even_slot++], i.m());
                    else if (i.kind == BasisIndex::Kind::G)
                        rec.index_odd(odd_names[odd_slot++], i.r());
                }
                detail::run_instance(rec, [&](auto& r) {
                    Element<K> ea = Element<K>::basis(a);
                    Element<K> lhs = bracket_extend(bracket, ea, bracket(b, c));
                    Element<K> t1 = bracket_extend(bracket, bracket(a, b), Element<K>::basis(c));
                    Element<K> t2 = bracket_extend(bracket, Element<K>::basis(b), bracket(a, c));
                    bool both_odd = parity_of(a) == 1 && parity_of(b) == 1;
                    Element<K> rhs = both_odd ? t1 - t2 : t1 + t2;
                    Element<K> res = lhs - rhs;
                    if (!res.is_zero()) r.violation(res.str());
                });
            }

    report.sort();
    return report;
}

/// Every product involving the central vector must vanish.
template <class K>
ViolationReport check_annihilator(const StructureSystem<K>& sys, const Window& w) {
    if (!sys.central())
        throw ModeError("check_annihilator requires a central system");
    ViolationReport report;
    BasisIndex c = BasisIndex::C();

    auto record = [&](const std::string& id, BasisIndex other, bool c_left) {
        detail::InstanceRecorder rec{report, id};
        if (other.kind == BasisIndex::Kind::L)
            rec.index_even("m", other.m());
        else if (other.kind == BasisIndex::Kind::G)
            rec.index_odd("r", other.r());
        detail::run_instance(rec, [&](auto& r) {
            Element<K> got = c_left ? sys.basis_product(c, other) : sys.basis_product(other, c);
            if (!got.is_zero()) r.violation(got.str());
        });
    };

    for (long long m : w.even_indices()) {
        record("4.5-cL", BasisIndex::L(m), true);
        record("4.5-Lc", BasisIndex::L(m), false);
    }
    for (HalfInt r : w.odd_indices()) {
        record("4.5-cG", BasisIndex::G(r), true);
        record("4.5-Gc", BasisIndex::G(r), false);
    }
    record("4.5-cc", c, true);

    report.sort();
    return report;
}

} // namespace lsv
