#pragma once

#include <string>
#include <type_traits>

#include <json.hpp>

#include "lsv/checker.hpp"
#include "lsv/gaussian.hpp"
#include "lsv/ratfun_io.hpp"
#include "lsv/structure.hpp"

namespace lsv {

using Json = nlohmann::ordered_json;

template <class K>
K parse_coeff(const std::string& s) {
    if constexpr (std::is_same_v<K, RatFun>)
        return parse_ratfun(s);
    else
        return GaussianRational::parse(s);
}

template <class K>
std::string epsilon_header(const StructureSystem<K>& sys) {
    if constexpr (std::is_same_v<K, RatFun>) {
        (void)sys;
        return "symbolic";
    } else {
        return sys.eps().str();
    }
}

/// Multiplication-table export: a header with the sector and epsilon, then
/// one record per ordered basis pair of the window, in basis order
/// (L ascending, then G ascending, then c). Ordering and formatting are
/// byte-stable so emit -> parse -> emit is the identity.
template <class K>
Json table_to_json(const StructureSystem<K>& sys, const Window& w) {
    Json doc;
    doc["header"] = {{"theta", sector_theta_string(sys.sector())},
                     {"epsilon", epsilon_header(sys)}};
    Json products = Json::array();
    for (BasisIndex left : w.basis(sys.central()))
        for (BasisIndex right : w.basis(sys.central())) {
            Json rec;
            rec["left"] = left.str();
            rec["right"] = right.str();
            Json result = Json::array();
            Element<K> product = sys.basis_product(left, right);
            for (const auto& [idx, c] : product.terms())
                result.push_back({{"basis", idx.str()}, {"coeff", c.str()}});
            rec["result"] = result;
            products.push_back(std::move(rec));
        }
    doc["products"] = std::move(products);
    return doc;
}

/// Rebuilds a table-backed system from an exported table. Every (left, right)
/// record becomes one stored coefficient per family; anything else is a
/// malformed-table error.
template <class K>
StructureSystem<K> table_from_json(const Json& doc) {
    const Json& header = doc.at("header");
    std::string theta = header.at("theta").get<std::string>();
    if (theta != "0" && theta != "1/2")
        throw ParseError("theta must be \"0\" or \"1/2\"", 0);
    Sector sector = theta == "0" ? Sector::Ramond : Sector::NeveuSchwarz;

    std::string eps_str = header.at("epsilon").get<std::string>();
    K eps;
    if constexpr (std::is_same_v<K, RatFun>) {
        if (eps_str != "symbolic")
            throw ParseError("symbolic table expected epsilon \"symbolic\"", 0);
        eps = RatFun::epsilon();
    } else {
        eps = GaussianRational::parse(eps_str);
    }

    // central iff any c row appears
    bool central = false;
    for (const auto& rec : doc.at("products"))
        if (rec.at("left").get<std::string>() == "c" ||
            rec.at("right").get<std::string>() == "c")
            central = true;

    auto sys = StructureSystem<K>::table_backed(sector, central, eps);

    for (const auto& rec : doc.at("products")) {
        BasisIndex left = BasisIndex::parse(rec.at("left").get<std::string>());
        BasisIndex right = BasisIndex::parse(rec.at("right").get<std::string>());
        K body, center;
        BasisIndex body_idx = BasisIndex::C(); // placeholder
        for (const auto& term : rec.at("result")) {
            BasisIndex b = BasisIndex::parse(term.at("basis").get<std::string>());
            K c = parse_coeff<K>(term.at("coeff").get<std::string>());
            if (b.kind == BasisIndex::Kind::C)
                center = c;
            else {
                body = c;
                body_idx = b;
            }
        }
        using Kind = BasisIndex::Kind;
        if (left.kind == Kind::C || right.kind == Kind::C) {
            if (!body.is_zero() || !center.is_zero())
                throw ParseError("products with c must vanish", 0);
            continue; // structural in basis_product
        }
        auto expect_body = [&](BasisIndex want) {
            if (!body.is_zero() && body_idx != want)
                throw ParseError("result term lands on the wrong basis vector: " +
                                     body_idx.str() + " instead of " + want.str(),
                                 0);
        };
        if (left.kind == Kind::L && right.kind == Kind::L) {
            expect_body(BasisIndex::L(left.m() + right.m()));
            sys.set_entry(CoeffFamily::f, left.m(), right.m(), body);
            if (central) sys.set_entry(CoeffFamily::phi, left.m(), right.m(), center);
        } else if (left.kind == Kind::L && right.kind == Kind::G) {
            expect_body(BasisIndex::G(left.m() + right.r()));
            sys.set_entry(CoeffFamily::g, left.m(), right.r().twice, body);
            if (central) sys.set_entry(CoeffFamily::psi, left.m(), right.r().twice, center);
        } else if (left.kind == Kind::G && right.kind == Kind::L) {
            expect_body(BasisIndex::G(right.m() + left.r()));
            sys.set_entry(CoeffFamily::h, left.r().twice, right.m(), body);
            if (central) sys.set_entry(CoeffFamily::rho, left.r().twice, right.m(), center);
        } else {
            expect_body(BasisIndex::L((left.r() + right.r()).as_integer()));
            sys.set_entry(CoeffFamily::d, left.r().twice, right.r().twice, body);
            if (central)
                sys.set_entry(CoeffFamily::sigma, left.r().twice, right.r().twice, center);
        }
    }
    return sys;
}

inline Json violation_to_json(const Violation& v) {
    Json indices = Json::object();
    for (const auto& [name, value] : v.indices) {
        // integers as JSON numbers, half-integers as strings
        if (value.find('/') == std::string::npos)
            indices[name] = std::stoll(value);
        else
            indices[name] = value;
    }
    Json out = {{"identity", v.identity}, {"indices", indices}};
    if (!v.residual.empty()) out["residual"] = v.residual;
    return out;
}

inline Json report_to_json(const ViolationReport& report) {
    Json doc;
    Json violations = Json::array();
    for (const auto& v : report.violations) violations.push_back(violation_to_json(v));
    Json unchecked = Json::array();
    for (const auto& v : report.unchecked) unchecked.push_back(violation_to_json(v));
    Json counts = Json::object();
    for (const auto& [id, c] : report.checked_counts) counts[id] = c;
    doc["violations"] = std::move(violations);
    doc["unchecked"] = std::move(unchecked);
    doc["checked_counts"] = std::move(counts);
    return doc;
}

} // namespace lsv
