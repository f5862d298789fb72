// Command-line front end: verify the identity families on a window, replay
// the uniqueness derivations, export multiplication tables, and evaluate
// ad-hoc product expressions, all in exact arithmetic.
//
// Exit codes: 0 = clean, 1 = mathematical failure (violations, derivation
// inconsistency), 2 = usage or configuration error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "lsv/deriver.hpp"
#include "lsv/json_io.hpp"

using namespace lsv;

namespace {

struct RunConfig {
    std::string theta = "1/2";
    int window = 8;
    std::string epsilon = "symbolic";
    bool centerless = false;
    std::string out;
    std::string format = "json";
};

Sector sector_of(const RunConfig& cfg) {
    if (cfg.theta == "0") return Sector::Ramond;
    if (cfg.theta == "1/2") return Sector::NeveuSchwarz;
    throw ParseError("--theta must be 0 or 1/2", 0);
}

std::optional<GaussianRational> numeric_epsilon(const RunConfig& cfg) {
    if (cfg.epsilon == "symbolic") return std::nullopt;
    GaussianRational eps0 = GaussianRational::parse(cfg.epsilon);
    if (eps0.is_zero()) throw ParseError("epsilon must be nonzero", 0);
    if (eps0.inverse_is_integer()) throw ParseError("epsilon inverse is an integer", 0);
    return eps0;
}

void write_or_print(const RunConfig& cfg, const Json& doc) {
    std::string text = doc.dump(2);
    text += "\n";
    if (cfg.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw ParseError("cannot open output file " + cfg.out, 0);
    f << text;
}

void add_common_options(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--theta", cfg.theta, "sector: 0 (Ramond) or 1/2 (Neveu-Schwarz)");
    cmd->add_option("--window", cfg.window, "index window bound N >= 0")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--epsilon", cfg.epsilon,
                    "\"symbolic\" or an exact value like 3/5, 7/3, 2/3i");
    cmd->add_flag("--centerless", cfg.centerless, "drop the central extension");
    cmd->add_option("--out", cfg.out, "output path (default: stdout)");
    cmd->add_option("--format", cfg.format, "output format (json)")
        ->check(CLI::IsMember({"json"}));
}

template <class K>
int run_verify_on(const StructureSystem<K>& sys, const Window& w, const RunConfig& cfg) {
    ViolationReport all;
    struct Pass {
        const char* name;
        ViolationReport report;
    };
    std::vector<Pass> passes;
    passes.push_back({"closure", check_closure(sys, w)});
    passes.push_back({"left-symmetry", check_left_symmetry(sys, w)});
    passes.push_back({"bracket-compatibility", check_bracket_compatibility(sys, w)});
    passes.push_back({"super-jacobi", check_super_jacobi<K>(w.sector, w)});
    if (sys.central()) passes.push_back({"annihilator", check_annihilator(sys, w)});

    for (auto& p : passes) {
        std::cout << p.name << ": " << p.report.total_checked() << " checked, "
                  << p.report.violations.size() << " violations";
        if (!p.report.unchecked.empty())
            std::cout << ", " << p.report.unchecked.size() << " unchecked";
        std::cout << "\n";
        all.merge(p.report);
    }
    if (!cfg.out.empty()) write_or_print(cfg, report_to_json(all));
    return all.clean() ? 0 : 1;
}

int cmd_verify(const RunConfig& cfg, const std::string& table_path) {
    Window w{cfg.window, sector_of(cfg)};
    if (!table_path.empty()) {
        std::ifstream f(table_path);
        if (!f) throw ParseError("cannot read table file " + table_path, 0);
        Json doc = Json::parse(f);
        std::string eps_header = doc.at("header").at("epsilon").get<std::string>();
        if (eps_header == "symbolic") {
            auto sys = table_from_json<RatFun>(doc);
            return run_verify_on(sys, w, cfg);
        }
        auto sys = table_from_json<GaussianRational>(doc);
        return run_verify_on(sys, w, cfg);
    }
    if (auto eps0 = numeric_epsilon(cfg)) {
        auto sys = StructureSystem<GaussianRational>::closed_form(w.sector, !cfg.centerless, *eps0);
        return run_verify_on(sys, w, cfg);
    }
    auto sys = StructureSystem<RatFun>::closed_form(w.sector, !cfg.centerless, RatFun::epsilon());
    return run_verify_on(sys, w, cfg);
}

Json trace_event_to_json(const TraceEvent& e) {
    Json rec;
    rec["step"] = e.step;
    Json inst = Json::object();
    for (const auto& [k, v] : e.instance) {
        if (!v.empty() && v.find_first_not_of("-0123456789") == std::string::npos)
            inst[k] = std::stoll(v);
        else
            inst[k] = v;
    }
    rec["instance"] = inst;
    Json assigned = Json::object();
    for (const auto& [k, v] : e.assigned) assigned[k] = v;
    rec["assigned"] = assigned;
    if (!e.equation.empty()) rec["equation"] = e.equation;
    if (!e.inputs.empty()) rec["inputs"] = e.inputs;
    if (!e.note.empty()) rec["note"] = e.note;
    return rec;
}

Json derived_table_to_json(const DerivedTable& t, bool first_even, bool second_even) {
    Json arr = Json::array();
    for (const auto& [key, entry] : t) {
        Json rec;
        rec["a"] = first_even ? Json(key.first) : Json(HalfInt(key.first).str());
        rec["b"] = second_even ? Json(key.second) : Json(HalfInt(key.second).str());
        rec["value"] = entry.value.str();
        rec["step"] = entry.step;
        arr.push_back(std::move(rec));
    }
    return arr;
}

int cmd_derive(const RunConfig& cfg, const std::string& trace_path) {
    if (cfg.epsilon != "symbolic")
        throw ParseError("derive works symbolically; --epsilon must be \"symbolic\"", 0);
    Sector sector = sector_of(cfg);
    Window w{cfg.window, sector};

    Json doc;
    doc["header"] = {{"theta", cfg.theta},
                     {"epsilon", "symbolic"},
                     {"window", cfg.window},
                     {"mode", cfg.centerless ? "centerless" : "central"}};

    DerivationTrace trace;
    ViolationReport mismatches;
    std::vector<std::string> unassigned;
    Json tables;

    if (cfg.centerless) {
        auto [t, tr] = derive_centerless(sector, w);
        trace = std::move(tr);
        auto sys = StructureSystem<RatFun>::closed_form(sector, false, RatFun::epsilon());
        mismatches = cross_check(t, sys);
        unassigned = unassigned_in_window(t, w);
        tables["G"] = derived_table_to_json(t.G, true, false);
        tables["H"] = derived_table_to_json(t.H, false, true);
        tables["D"] = derived_table_to_json(t.D, false, false);
        std::cout << "derived entries: G " << t.G.size() << ", H " << t.H.size() << ", D "
                  << t.D.size() << "\n";
    } else {
        auto [t, tr] = derive_central(sector, w);
        trace = std::move(tr);
        auto sys = StructureSystem<RatFun>::closed_form(sector, true, RatFun::epsilon());
        mismatches = cross_check(t, sys);
        unassigned = unassigned_in_window(t, w);
        tables["sigma"] = derived_table_to_json(t.sigma, false, false);
        tables["psi"] = derived_table_to_json(t.psi, true, false);
        tables["rho"] = derived_table_to_json(t.rho, false, true);
        std::cout << "derived entries: sigma " << t.sigma.size() << ", psi " << t.psi.size()
                  << ", rho " << t.rho.size() << "\n";
    }

    std::cout << "cross-check: " << mismatches.total_checked() << " entries, "
              << mismatches.violations.size() << " mismatches\n";
    std::cout << "unassigned in window: " << unassigned.size() << "\n";
    std::cout << "trace: " << trace.events.size() << " events\n";

    doc["tables"] = std::move(tables);
    doc["cross_check"] = report_to_json(mismatches);
    doc["unassigned"] = unassigned;
    Json trace_json = Json::array();
    for (const auto& e : trace.events) trace_json.push_back(trace_event_to_json(e));
    doc["trace"] = std::move(trace_json);
    if (!cfg.out.empty()) write_or_print(cfg, doc);

    if (!trace_path.empty()) {
        std::ofstream f(trace_path, std::ios::binary);
        if (!f) throw ParseError("cannot open trace file " + trace_path, 0);
        for (const auto& e : trace.events) f << trace_event_to_json(e).dump() << "\n";
    }
    return mismatches.clean() ? 0 : 1;
}

int cmd_table(const RunConfig& cfg) {
    Window w{cfg.window, sector_of(cfg)};
    if (auto eps0 = numeric_epsilon(cfg)) {
        auto sys = StructureSystem<GaussianRational>::closed_form(w.sector, !cfg.centerless, *eps0);
        write_or_print(cfg, table_to_json(sys, w));
        return 0;
    }
    auto sys = StructureSystem<RatFun>::closed_form(w.sector, !cfg.centerless, RatFun::epsilon());
    write_or_print(cfg, table_to_json(sys, w));
    return 0;
}

/// Product-expression grammar: operands L(m), G(k/2), c; infix "*"
/// (left-associative) and brackets "[x,y]"; parentheses allowed.
template <class K>
class ExprParser {
public:
    ExprParser(const std::string& text, const StructureSystem<K>& sys)
        : s_(text), sys_(sys) {}

    Element<K> parse() {
        Element<K> v = expr();
        skip_ws();
        if (pos_ != s_.size())
            throw ParseError("unexpected character '" + std::string(1, s_[pos_]) + "'", pos_);
        return v;
    }

private:
    const std::string& s_;
    const StructureSystem<K>& sys_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip_ws();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Element<K> expr() {
        Element<K> v = primary();
        while (eat('*')) v = lsv::multiply(sys_, v, primary());
        return v;
    }

    Element<K> primary() {
        skip_ws();
        if (pos_ >= s_.size()) throw ParseError("unexpected end of expression", pos_);
        char c = s_[pos_];
        if (c == '[') {
            ++pos_;
            Element<K> x = expr();
            if (!eat(',')) throw ParseError("expected ',' in bracket", pos_);
            Element<K> y = expr();
            if (!eat(']')) throw ParseError("expected ']'", pos_);
            return super_commutator(sys_, x, y);
        }
        if (c == '(') {
            ++pos_;
            Element<K> v = expr();
            if (!eat(')')) throw ParseError("expected ')'", pos_);
            return v;
        }
        if (c == 'c') {
            ++pos_;
            return Element<K>::basis(BasisIndex::C());
        }
        if (c == 'L' || c == 'G') {
            std::size_t start = pos_;
            ++pos_;
            if (!eat('(')) throw ParseError("expected '(' after basis letter", pos_);
            skip_ws();
            std::size_t num_start = pos_;
            while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) ||
                                        s_[pos_] == '-' || s_[pos_] == '/'))
                ++pos_;
            HalfInt idx = HalfInt::parse(s_.substr(num_start, pos_ - num_start));
            if (!eat(')')) throw ParseError("expected ')' after index", pos_);
            if (c == 'L') {
                if (!idx.is_integer())
                    throw ParseError("L index must be an integer", start);
                return Element<K>::basis(BasisIndex::L(idx.as_integer()));
            }
            return Element<K>::basis(BasisIndex::G(idx));
        }
        throw ParseError("unexpected character '" + std::string(1, c) + "'", pos_);
    }
};

int cmd_eval(const RunConfig& cfg, const std::string& expr) {
    Sector sector = sector_of(cfg);
    if (auto eps0 = numeric_epsilon(cfg)) {
        auto sys = StructureSystem<GaussianRational>::closed_form(sector, !cfg.centerless, *eps0);
        std::cout << ExprParser<GaussianRational>(expr, sys).parse().str() << "\n";
        return 0;
    }
    auto sys = StructureSystem<RatFun>::closed_form(sector, !cfg.centerless, RatFun::epsilon());
    std::cout << ExprParser<RatFun>(expr, sys).parse().str() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact left-symmetric structures on the (super-)Virasoro algebras"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string table_path, trace_path, expr;

    CLI::App* verify = app.add_subcommand("verify", "run all identity checkers on a window");
    add_common_options(verify, cfg);
    verify->add_option("--table", table_path, "verify a table JSON file instead of closed forms");

    CLI::App* derive = app.add_subcommand("derive", "replay a uniqueness derivation");
    add_common_options(derive, cfg);
    derive->add_option("--trace", trace_path, "write the derivation trace as JSON lines");

    CLI::App* table = app.add_subcommand("table", "export the multiplication table as JSON");
    add_common_options(table, cfg);

    CLI::App* eval = app.add_subcommand("eval", "evaluate a product expression");
    add_common_options(eval, cfg);
    eval->add_option("expr", expr, "expression, e.g. \"[L(2), L(-2)]\" or \"c * L(5)\"")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (verify->parsed()) return cmd_verify(cfg, table_path);
        if (derive->parsed()) return cmd_derive(cfg, trace_path);
        if (table->parsed()) return cmd_table(cfg);
        if (eval->parsed()) return cmd_eval(cfg, expr);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const WindowTooSmallError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const InconsistencyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Json::exception& e) {
        std::cerr << "error: malformed JSON input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
