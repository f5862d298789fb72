#include <catch2/catch_amalgamated.hpp>

#include "lsv/checker.hpp"
#include "lsv/ratfun_io.hpp"
#include "lsv/structure.hpp"

using namespace lsv;

namespace {

using Sys = StructureSystem<RatFun>;
using Elem = Element<RatFun>;

Sys clean_central(Sector sector) { return Sys::closed_form(sector, true, RatFun::epsilon()); }

bool has_identity(const std::vector<Violation>& vs, const std::string& id) {
    for (const auto& v : vs)
        if (v.identity == id) return true;
    return false;
}

} // namespace

TEST_CASE("clean system passes all checkers on a small window") {
    for (Sector sector : {Sector::Ramond, Sector::NeveuSchwarz}) {
        auto sys = clean_central(sector);
        Window w{4, sector};
        CHECK(check_closure(sys, w).clean());
        CHECK(check_left_symmetry(sys, w).clean());
        CHECK(check_bracket_compatibility(sys, w).clean());
        CHECK(check_super_jacobi<RatFun>(sector, w).clean());
        CHECK(check_annihilator(sys, w).clean());
    }
}

TEST_CASE("window N=0 closure checks only the origin") {
    auto sys = Sys::closed_form(Sector::Ramond, false, RatFun::epsilon());
    Window w{0, Sector::Ramond};
    auto rep = check_closure(sys, w);
    CHECK(rep.clean());
    CHECK(rep.checked_counts["3.2-1"] == 1); // (m,n) = (0,0)
    CHECK(rep.checked_counts["3.2-3"] == 1); // (r,s) = (0,0)

    SECTION("Neveu-Schwarz N=0 has no odd indices") {
        Window wns{0, Sector::NeveuSchwarz};
        CHECK(wns.odd_indices().empty());
    }
}

TEST_CASE("annihilator check at N=0 covers exactly the c products") {
    auto sys = clean_central(Sector::Ramond);
    Window w{0, Sector::Ramond};
    auto rep = check_annihilator(sys, w);
    CHECK(rep.clean());
    // c*L_0, L_0*c, c*G_0, G_0*c, c*c
    CHECK(rep.total_checked() == 5);

    SECTION("centerless mode is a usage error") {
        auto cl = Sys::closed_form(Sector::Ramond, false, RatFun::epsilon());
        CHECK_THROWS_AS(check_annihilator(cl, w), ModeError);
    }

    SECTION("a table missing the c rules reports violations") {
        auto tab = Sys::table_backed(Sector::Ramond, true, RatFun::epsilon());
        // c rules are structural in basis_product, so fake a broken d instead
        tab.set_entry(CoeffFamily::d, 0, 0, RatFun(1));
        tab.set_entry(CoeffFamily::sigma, 0, 0, RatFun(Rational(-1, 24)));
        auto r2 = check_annihilator(tab, w);
        CHECK(r2.clean()); // c products vanish identically in every mode
    }
}

TEST_CASE("d override produces the closure violation computed by the oracle") {
    auto sys = clean_central(Sector::NeveuSchwarz);
    sys.set_entry(CoeffFamily::d, 1, 1, RatFun(2));
    Window w{2, Sector::NeveuSchwarz};
    auto rep = check_closure(sys, w);
    REQUIRE_FALSE(rep.clean());
    bool found = false;
    for (const auto& v : rep.violations) {
        if (v.identity == "3.2-3" && v.indices[0].second == "1/2" &&
            v.indices[1].second == "1/2") {
            // oracle: overridden value 2 on both sides, so 2 + 2 - 2 = 2
            CHECK(v.residual == "2");
            found = true;
        }
    }
    CHECK(found);
}

TEST_CASE("g replaced by g+1 violates the second left-symmetry family") {
    auto sys = clean_central(Sector::NeveuSchwarz);
    Window w{3, Sector::NeveuSchwarz};
    for (long long m : w.even_indices())
        for (HalfInt r : w.odd_indices())
            sys.set_entry(CoeffFamily::g, m, r.twice,
                          clean_central(Sector::NeveuSchwarz).g(m, r) + RatFun(1));
    auto rep = check_left_symmetry(sys, w);
    REQUIRE_FALSE(rep.clean());
    CHECK(has_identity(rep.violations, "3.3-2"));
}

TEST_CASE("dropping the cocycle breaks compatibility exactly off the kernel of m^3-m") {
    auto sys = clean_central(Sector::NeveuSchwarz);
    Window w{4, Sector::NeveuSchwarz};
    for (long long m : w.even_indices())
        sys.set_entry(CoeffFamily::phi, m, -m, RatFun());
    auto rep = check_bracket_compatibility(sys, w);
    REQUIRE_FALSE(rep.clean());
    for (const auto& v : rep.violations) {
        CHECK(v.identity == "2.5-LL");
        long long m = v.sort_key[0], n = v.sort_key[1];
        CHECK(m + n == 0);
        CHECK((m < -1 || m > 1));
    }
    // violations exactly at (m, -m) for m in {-4,-3,-2,2,3,4}
    CHECK(rep.violations.size() == 6);
}

TEST_CASE("super-Jacobi holds for the reference bracket and fails when perturbed") {
    for (Sector sector : {Sector::Ramond, Sector::NeveuSchwarz}) {
        Window w{3, sector};
        CHECK(check_super_jacobi<RatFun>(sector, w).clean());
    }

    SECTION("flipping the central term sign on [G,G] breaks it") {
        Sector sector = Sector::NeveuSchwarz;
        Window w{3, sector};
        auto bad = [sector](BasisIndex a, BasisIndex b) {
            Elem e = target_bracket<RatFun>(sector, true, a, b);
            if (a.kind == BasisIndex::Kind::G && b.kind == BasisIndex::Kind::G) {
                RatFun c = e.coeff(BasisIndex::C());
                e.add(BasisIndex::C(), RatFun(-2) * c);
            }
            return e;
        };
        auto rep = check_super_jacobi<RatFun>(sector, w, bad);
        CHECK_FALSE(rep.clean());
    }
}

TEST_CASE("table-backed systems report unchecked instances, never silent zeros") {
    Sector sector = Sector::NeveuSchwarz;
    auto closed = clean_central(sector);
    Window w{2, sector};

    auto tab = Sys::table_backed(sector, true, RatFun::epsilon());
    for (long long m : w.even_indices())
        for (long long n : w.even_indices()) {
            tab.set_entry(CoeffFamily::f, m, n, closed.f(m, n));
            tab.set_entry(CoeffFamily::phi, m, n, closed.phi(m, n));
        }
    for (long long m : w.even_indices())
        for (HalfInt r : w.odd_indices()) {
            tab.set_entry(CoeffFamily::g, m, r.twice, closed.g(m, r));
            tab.set_entry(CoeffFamily::psi, m, r.twice, closed.psi(m, r));
            tab.set_entry(CoeffFamily::h, r.twice, m, closed.h(r, m));
            tab.set_entry(CoeffFamily::rho, r.twice, m, closed.rho(r, m));
        }
    for (HalfInt r : w.odd_indices())
        for (HalfInt s : w.odd_indices()) {
            tab.set_entry(CoeffFamily::d, r.twice, s.twice, closed.d(r, s));
            tab.set_entry(CoeffFamily::sigma, r.twice, s.twice, closed.sigma(r, s));
        }

    SECTION("closure needs no out-of-window lookups") {
        auto rep = check_closure(tab, w);
        CHECK(rep.clean());
        CHECK(rep.unchecked.empty());
    }

    SECTION("left-symmetry skips boundary triples and checks the rest") {
        auto tab_rep = check_left_symmetry(tab, w);
        auto closed_rep = check_left_symmetry(closed, w);
        CHECK(tab_rep.clean());
        CHECK_FALSE(tab_rep.unchecked.empty());
        // checked + unchecked partitions the closed-form instance count
        for (const auto& [id, count] : closed_rep.checked_counts) {
            long long unchecked_id = 0;
            for (const auto& u : tab_rep.unchecked)
                if (u.identity == id) ++unchecked_id;
            CHECK(tab_rep.checked_counts[id] + unchecked_id == count);
        }
    }

    SECTION("out-of-window coefficient lookups throw") {
        CHECK_THROWS_AS(tab.f(5, 5), OutOfWindowError);
    }
}

TEST_CASE("report determinism: entries sorted by identity then indices") {
    auto sys = clean_central(Sector::NeveuSchwarz);
    sys.set_entry(CoeffFamily::d, 1, 1, RatFun(2));
    sys.set_entry(CoeffFamily::f, 1, 2, RatFun(7));
    Window w{2, Sector::NeveuSchwarz};
    auto r1 = check_closure(sys, w);
    auto r2 = check_closure(sys, w);
    REQUIRE_FALSE(r1.clean());
    REQUIRE(r1.violations.size() == r2.violations.size());
    for (std::size_t i = 0; i < r1.violations.size(); ++i) {
        CHECK(r1.violations[i].identity == r2.violations[i].identity);
        CHECK(r1.violations[i].residual == r2.violations[i].residual);
    }
    for (std::size_t i = 1; i < r1.violations.size(); ++i) {
        const auto& a = r1.violations[i - 1];
        const auto& b = r1.violations[i];
        CHECK((a.identity < b.identity ||
               (a.identity == b.identity && a.sort_key <= b.sort_key)));
    }
}

TEST_CASE("checker instances agree between symbolic mode and specialization") {
    GaussianRational eps0(Rational(3, 5));
    auto sym = clean_central(Sector::NeveuSchwarz);
    auto num = StructureSystem<GaussianRational>::closed_form(Sector::NeveuSchwarz, true, eps0);
    sym.set_entry(CoeffFamily::f, 1, 2, sym.f(1, 2) + RatFun(1));
    num.set_entry(CoeffFamily::f, 1, 2, num.f(1, 2) + GaussianRational::from_int(1));
    Window w{2, Sector::NeveuSchwarz};
    auto rs = check_closure(sym, w);
    auto rn = check_closure(num, w);
    REQUIRE(rs.violations.size() == rn.violations.size());
    for (std::size_t i = 0; i < rs.violations.size(); ++i) {
        CHECK(rs.violations[i].identity == rn.violations[i].identity);
        CHECK(rs.violations[i].indices == rn.violations[i].indices);
    }
}
