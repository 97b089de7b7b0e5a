// Drives the installed CLI binary through temp files and checks outputs,
// exit codes, and CSV shapes.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qsl/io.hpp"

namespace fs = std::filesystem;
using qsl::json;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct RunResult {
    int exit_code;
    std::string stdout_text;
};

fs::path work_dir() {
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "qsl_cli_test";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

RunResult run(const std::string& args) {
    const fs::path out = work_dir() / "stdout.txt";
    const fs::path err = work_dir() / "stderr.txt";
    const std::string cmd = std::string(QSL_CLI_PATH) + " " + args + " > " + out.string() +
                            " 2> " + err.string();
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WEXITSTATUS(raw);
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    r.stdout_text = ss.str();
    return r;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (line.back() == ',') cells.push_back("");
        rows.push_back(std::move(cells));
    }
    return rows;
}

std::string channel_file(const std::string& name, const std::string& model_args) {
    const fs::path path = work_dir() / name;
    const RunResult r = run("channel " + model_args + " --out " + path.string());
    REQUIRE(r.exit_code == 0);
    return path.string();
}

}  // namespace

TEST_CASE("distance: identical identity files give d = 0") {
    const auto a = channel_file("id_a.json", "--model identity2");
    const auto b = channel_file("id_b.json", "--model identity2");
    const RunResult r = run("distance --a " + a + " --b " + b);
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.stdout_text);
    CHECK(std::abs(j.at("d").get<double>()) <= 1e-4);
    CHECK(j.at("certified").get<bool>());
}

TEST_CASE("distance: identity vs amplitude damping is pi/3") {
    const auto a = channel_file("id.json", "--model identity2");
    const auto b = channel_file("ad.json", "--model ad --gamma 1 --t 1.3862943611198906");
    const RunResult r = run("distance --a " + a + " --b " + b + " --verify --samples 2000 "
                            "--w-samples 200 --seed 5");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.stdout_text);
    CHECK(j.at("d").get<double>() == doctest::Approx(kPi / 3.0).epsilon(1e-6));
    CHECK(j.at("verify").at("w_max_pass").get<bool>());
    CHECK(j.at("verify").at("min_fidelity_pass").get<bool>());
}

TEST_CASE("distance: malformed input exits with code 2") {
    const fs::path bad = work_dir() / "bad.json";
    std::ofstream(bad) << "{\"dim\": 2}";
    const auto a = channel_file("id2.json", "--model identity2");
    const RunResult r = run("distance --a " + a + " --b " + bad.string());
    CHECK(r.exit_code == 2);
}

TEST_CASE("distance: iteration cap of 1 reports non-convergence with exit 3") {
    const auto a = channel_file("id3.json", "--model identity2");
    const auto b = channel_file("deph.json", "--model dephasing --gamma 0.1 --omega 1 --t 2.0");
    const RunResult r = run("distance --a " + a + " --b " + b + " --max-iter 1");
    CHECK(r.exit_code == 3);
    const json j = json::parse(r.stdout_text);
    CHECK_FALSE(j.at("certified").get<bool>());
}

TEST_CASE("figure 1 hits the closed form at t = pi") {
    // grid {0, pi, 2pi}
    const RunResult r = run("figure 1 --t-max 6.283185307179586 --steps 3");
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv(r.stdout_text);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0][0] == "t");
    const double d = std::stod(rows[2][2]);
    CHECK(d == doctest::Approx(1.1948).epsilon(1e-4));
}

TEST_CASE("figure 2 default N=5 leaves the exact column empty and orders the bounds") {
    const RunResult r = run("figure 2 --ratio-steps 6 --t-grid 80");
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv(r.stdout_text);
    REQUIRE(rows.size() == 7);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        REQUIRE(rows[i].size() == 5);
        CHECK(rows[i][2].empty());  // max_d_exact not computed at N=5 by default
        const double sep = std::stod(rows[i][1]);
        const double alpha = std::stod(rows[i][3]);
        CHECK(sep <= alpha + 1e-6);
    }
}

TEST_CASE("figure 2 with N=2 orders sep <= exact <= alpha row-wise") {
    const RunResult r = run("figure 2 --n 2 --ratio-steps 3 --t-grid 48");
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv(r.stdout_text);
    REQUIRE(rows.size() == 4);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        REQUIRE_FALSE(rows[i][2].empty());
        const double sep = std::stod(rows[i][1]);
        const double exact = std::stod(rows[i][2]);
        const double alpha = std::stod(rows[i][3]);
        CHECK(sep <= exact + 1e-6);
        CHECK(exact <= alpha + 1e-6);
    }
}

TEST_CASE("figure 3 shows the GHZ-to-separable crossover") {
    const RunResult r = run("figure 3 --steps 40 --t-max 9.42477796076938");
    REQUIRE(r.exit_code == 0);
    const auto rows = parse_csv(r.stdout_text);
    REQUIRE(rows.size() == 41);
    bool crossed = false;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const double ghz = std::stod(rows[i][1]);
        const double sep = std::stod(rows[i][2]);
        const double ex = std::stod(rows[i][3]);
        CHECK(ghz <= ex + 1e-6);
        CHECK(sep <= ex + 1e-6);
        if (!crossed) {
            if (ghz < sep) crossed = true;
            else CHECK(ghz >= sep - 1e-9);
        }
    }
    CHECK(crossed);
}

TEST_CASE("mintime amplitude damping matches ln 2") {
    const RunResult r = run("mintime --model ad --gamma 1 --theta 0.7853981633974483");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.stdout_text);
    CHECK(j.at("status") == "found");
    CHECK(j.at("time").get<double>() == doctest::Approx(std::log(2.0)).epsilon(1e-9));
}

TEST_CASE("mintime dephasing at pi/2 is unreachable with an alpha certificate") {
    const RunResult r =
        run("mintime --model dephasing --gamma 0.1 --omega 1 --theta 1.5707963 --t-max 15 --step 0.05");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.stdout_text);
    CHECK(j.at("status") == "unreachable");
    CHECK(j.at("alpha_certificate").get<double>() > 0.0);
}

TEST_CASE("mintime rejects custom channels") {
    const auto c = channel_file("id4.json", "--model identity2");
    const RunResult r = run("mintime --model custom --channel " + c + " --theta 0.3");
    CHECK(r.exit_code == 2);
}

TEST_CASE("verify on the identity channel passes with zero violations") {
    const auto c = channel_file("id5.json", "--model identity2");
    const RunResult r = run("verify --channel " + c + " --samples 200 --w-samples 50 --seed 3");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.stdout_text);
    CHECK(j.at("pass").get<bool>());
    CHECK(j.at("min_fidelity").at("violation").get<double>() <= 1e-9);
}

TEST_CASE("verify pinches a dephasing channel") {
    const auto c = channel_file("deph2.json", "--model dephasing --gamma 0.1 --omega 1 --t 2.5");
    const RunResult r = run("verify --channel " + c + " --samples 3000 --w-samples 300 --seed 11");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.stdout_text);
    CHECK(j.at("pass").get<bool>());
}

TEST_CASE("channel files reload identically") {
    const auto path = channel_file("roundtrip.json", "--model dephasing --gamma 0.2 --omega 1.5 --t 0.9");
    std::ifstream in(path);
    json j;
    in >> j;
    const auto ch = qsl::channel_from_json(j);
    CHECK(qsl::channel_to_json(ch).dump() == j.dump());
}

TEST_CASE("curve emits deterministic CSV") {
    const RunResult a = run("curve --model dephasing --steps 10 --t-max 3");
    const RunResult b = run("curve --model dephasing --steps 10 --t-max 3");
    REQUIRE(a.exit_code == 0);
    CHECK(a.stdout_text == b.stdout_text);
    CHECK(a.stdout_text.find("\r") == std::string::npos);  // LF endings
}

TEST_CASE("degrees flag converts output angles") {
    const RunResult r = run("mintime --model unitary --theta 0.5 --ham " + [] {
        const fs::path p = work_dir() / "ham.json";
        std::ofstream(p) << "[[[0.5,0],[0,0]],[[0,0],[-0.5,0]]]";
        return p.string();
    }() + " --degrees");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.stdout_text);
    CHECK(j.at("angle_unit") == "degrees");
    CHECK(j.at("theta").get<double>() == doctest::Approx(0.5 * 180.0 / kPi));
}
