#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

struct RunResult {
    int exit_code;
    std::string output; // stdout + stderr
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(LSV_CLI_PATH) + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
    int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

} // namespace

TEST_CASE("verify exit codes") {
    CHECK(run_cli("verify --theta 1/2 --window 3").exit_code == 0);
    CHECK(run_cli("verify --theta 0 --window 3 --epsilon 3/5").exit_code == 0);

    SECTION("inadmissible epsilon is a config error") {
        auto r = run_cli("verify --epsilon 1/2 --window 2");
        CHECK(r.exit_code == 2);
        CHECK(r.output.find("epsilon inverse is an integer") != std::string::npos);
    }

    SECTION("unknown flag is a usage error") {
        CHECK(run_cli("verify --frobnicate").exit_code == 2);
    }

    SECTION("a perturbed table file fails verification with exit 1") {
        auto table = run_cli("table --theta 1/2 --window 2");
        REQUIRE(table.exit_code == 0);
        auto doc = nlohmann::ordered_json::parse(table.output);
        for (auto& rec : doc["products"])
            if (rec["left"] == "G(1/2)" && rec["right"] == "G(1/2)")
                rec["result"] = nlohmann::ordered_json::array(
                    {{{"basis", "L(1)"}, {"coeff", "2"}}});
        std::string path = "/tmp/lsv_cli_bad_table.json";
        std::ofstream(path) << doc.dump(2);
        auto r = run_cli("verify --theta 1/2 --window 2 --table " + path);
        CHECK(r.exit_code == 1);
        std::remove(path.c_str());
    }

    SECTION("a clean exported table verifies with exit 0") {
        std::string path = "/tmp/lsv_cli_good_table.json";
        REQUIRE(run_cli("table --theta 0 --window 2 --out " + path).exit_code == 0);
        auto r = run_cli("verify --theta 0 --window 2 --table " + path);
        CHECK(r.exit_code == 0);
        std::remove(path.c_str());
    }
}

TEST_CASE("derive exit codes and outputs") {
    SECTION("both chains succeed at N=6") {
        CHECK(run_cli("derive --theta 1/2 --window 6 --centerless").exit_code == 0);
        CHECK(run_cli("derive --theta 0 --window 6").exit_code == 0);
    }

    SECTION("window too small is a mathematical failure") {
        auto r = run_cli("derive --window 2 --theta 0 --centerless");
        CHECK(r.exit_code == 1);
        CHECK(r.output.find("window too small") != std::string::npos);
    }

    SECTION("trace export is JSON lines with the documented record shape") {
        std::string path = "/tmp/lsv_cli_trace.jsonl";
        auto r = run_cli("derive --theta 1/2 --window 4 --centerless --trace " + path);
        REQUIRE(r.exit_code == 0);
        std::ifstream f(path);
        REQUIRE(f.good());
        std::string line;
        int lines = 0;
        bool saw_h_assignment = false;
        while (std::getline(f, line)) {
            ++lines;
            auto rec = nlohmann::ordered_json::parse(line);
            CHECK(rec.contains("step"));
            CHECK(rec.contains("instance"));
            CHECK(rec.contains("assigned"));
            for (const auto& [slot, value] : rec["assigned"].items())
                if (slot.rfind("H(", 0) == 0 && value == "-3") saw_h_assignment = true;
        }
        CHECK(lines > 50);
        CHECK(saw_h_assignment);
        std::remove(path.c_str());
    }

    SECTION("numeric epsilon is rejected for derive") {
        CHECK(run_cli("derive --theta 0 --window 6 --epsilon 3/5").exit_code == 2);
    }
}

TEST_CASE("table output is byte-stable") {
    auto a = run_cli("table --theta 1/2 --window 2");
    auto b = run_cli("table --theta 1/2 --window 2");
    REQUIRE(a.exit_code == 0);
    CHECK(a.output == b.output);
}

TEST_CASE("eval prints exact elements") {
    CHECK(run_cli("eval \"[L(2), L(-2)]\"").output == "4*L(0) + (1/2)*c\n");
    CHECK(run_cli("eval \"c * L(5)\"").output == "0\n");
    CHECK(run_cli("eval \"L(0) * G(1/2)\"").output == "(-1/2)*G(1/2)\n");

    SECTION("parse errors carry a position and exit 2") {
        auto r = run_cli("eval \"L(2) *\"");
        CHECK(r.exit_code == 2);
        CHECK(r.output.find("position") != std::string::npos);
    }

    SECTION("sector mismatch is a config error") {
        CHECK(run_cli("eval --theta 0 \"L(0) * G(1/2)\"").exit_code == 2);
    }

    SECTION("numeric mode evaluates exactly") {
        auto r = run_cli("eval --epsilon 3/5 \"L(1) * L(-1)\"");
        CHECK(r.exit_code == 0);
        // f(1,-1) = 1 - e -> 2/5; phi(1,-1) = (e^2-1)/(24e) -> -2/45 at e = 3/5
        CHECK(r.output == "(2/5)*L(0) + (-2/45)*c\n");
    }
}
