#include <catch2/catch_amalgamated.hpp>

#include "lsv/json_io.hpp"

using namespace lsv;

namespace {

using Sys = StructureSystem<RatFun>;

Sys central_sys(Sector sector) { return Sys::closed_form(sector, true, RatFun::epsilon()); }

} // namespace

TEST_CASE("table export carries the documented record shape") {
    auto sys = central_sys(Sector::NeveuSchwarz);
    Window w{2, Sector::NeveuSchwarz};
    Json doc = table_to_json(sys, w);

    CHECK(doc["header"]["theta"] == "1/2");
    CHECK(doc["header"]["epsilon"] == "symbolic");

    bool found = false;
    for (const auto& rec : doc["products"]) {
        if (rec["left"] == "G(1/2)" && rec["right"] == "G(-1/2)") {
            found = true;
            REQUIRE(rec["result"].size() == 2);
            CHECK(rec["result"][0]["basis"] == "L(0)");
            CHECK(rec["result"][0]["coeff"] == "-e + 1");
            CHECK(rec["result"][1]["basis"] == "c");
            CHECK(rec["result"][1]["coeff"] == "(e^2 - 1)/(24*e)");
        }
    }
    CHECK(found);

    SECTION("window 0, Ramond, contains the vanishing L(0)*L(0) record") {
        auto ram = central_sys(Sector::Ramond);
        Json small = table_to_json(ram, Window{0, Sector::Ramond});
        bool seen = false;
        for (const auto& rec : small["products"])
            if (rec["left"] == "L(0)" && rec["right"] == "L(0)") {
                seen = true;
                CHECK(rec["result"].empty());
            }
        CHECK(seen);
    }
}

TEST_CASE("table round-trip is byte-identical") {
    for (Sector sector : {Sector::Ramond, Sector::NeveuSchwarz}) {
        auto sys = central_sys(sector);
        Window w{3, sector};
        Json doc = table_to_json(sys, w);
        std::string first = doc.dump(2);
        auto parsed = table_from_json<RatFun>(Json::parse(first));
        std::string second = table_to_json(parsed, w).dump(2);
        CHECK(first == second);
    }
}

TEST_CASE("parsed tables verify cleanly over the stored region") {
    Sector sector = Sector::NeveuSchwarz;
    auto sys = central_sys(sector);
    Window w{4, sector};
    auto parsed = table_from_json<RatFun>(table_to_json(sys, w));

    auto closure = check_closure(parsed, w);
    CHECK(closure.clean());
    CHECK(closure.unchecked.empty());

    auto compat = check_bracket_compatibility(parsed, w);
    CHECK(compat.clean());
    CHECK(compat.unchecked.empty());

    auto leftsym = check_left_symmetry(parsed, w);
    CHECK(leftsym.clean());
    // unchecked instances exist (intermediates leave the table) but partition
    // exactly against the closed-form run
    auto closed_run = check_left_symmetry(sys, w);
    for (const auto& [id, count] : closed_run.checked_counts) {
        long long unchecked_count = 0;
        for (const auto& u : leftsym.unchecked)
            if (u.identity == id) ++unchecked_count;
        CHECK(leftsym.checked_counts[id] + unchecked_count == count);
    }
}

TEST_CASE("numeric tables round-trip with exact Gaussian rational entries") {
    GaussianRational eps0(Rational(3, 5));
    auto sys = StructureSystem<GaussianRational>::closed_form(Sector::Ramond, true, eps0);
    Window w{2, Sector::Ramond};
    Json doc = table_to_json(sys, w);
    CHECK(doc["header"]["epsilon"] == "3/5");
    auto parsed = table_from_json<GaussianRational>(doc);
    CHECK(table_to_json(parsed, w).dump(2) == doc.dump(2));
    CHECK(check_closure(parsed, w).clean());
}

TEST_CASE("malformed tables are rejected") {
    auto sys = central_sys(Sector::NeveuSchwarz);
    Window w{1, Sector::NeveuSchwarz};
    Json doc = table_to_json(sys, w);
    SECTION("bad theta") {
        doc["header"]["theta"] = "2";
        CHECK_THROWS_AS(table_from_json<RatFun>(doc), ParseError);
    }
    SECTION("result on the wrong basis vector") {
        for (auto& rec : doc["products"])
            if (rec["left"] == "L(1)" && rec["right"] == "L(1)")
                rec["result"] = Json::array({Json{{"basis", "L(0)"}, {"coeff", "1"}}});
        CHECK_THROWS_AS(table_from_json<RatFun>(doc), ParseError);
    }
}

TEST_CASE("violation reports serialize with numbers for integers and strings for half-integers") {
    auto sys = central_sys(Sector::NeveuSchwarz);
    sys.set_entry(CoeffFamily::d, 1, 1, RatFun(2));
    sys.set_entry(CoeffFamily::f, 1, 2, RatFun(7));
    Window w{2, Sector::NeveuSchwarz};
    Json doc = report_to_json(check_closure(sys, w));
    REQUIRE_FALSE(doc["violations"].empty());
    bool saw_half = false, saw_int = false;
    for (const auto& v : doc["violations"]) {
        for (const auto& [key, value] : v["indices"].items()) {
            if (value.is_string()) saw_half = true;
            if (value.is_number_integer()) saw_int = true;
        }
        CHECK(v.contains("identity"));
        CHECK(v.contains("residual"));
    }
    CHECK(saw_half);
    CHECK(saw_int);
}
