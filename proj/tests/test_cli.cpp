#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

std::string g_cli;  // path to the CLI binary, passed as the last argument

struct RunResult {
    int status = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    RunResult r;
    FILE* p = popen((g_cli + " " + args + " 2>/dev/null").c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    int st = pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("verify example 1 passes and reports the double level") {
    RunResult r = run("verify --example 1");
    CHECK(r.status == 0);
    CHECK(r.out.find("(x2)") != std::string::npos);
    CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("qval example 2 prints both functionals") {
    RunResult r = run("qval --example 2");
    REQUIRE(r.status == 0);
    std::istringstream is(r.out);
    double q = 0.0, qt = 0.0;
    REQUIRE((is >> q >> qt));
    CHECK(std::abs(q - 2813952.0 / 7.0) < 1e-3 * 2813952.0 / 7.0);
    CHECK(std::abs(qt - 102400.0) < 1e-3 * 102400.0);
}

TEST_CASE("qval delta mode compares prediction and measurement") {
    RunResult r = run("qval --delta --kappa 0.5");
    REQUIRE(r.status == 0);
    std::istringstream is(r.out);
    std::string w1, w2;
    double predicted = 0.0, measured = 0.0;
    REQUIRE((is >> w1 >> predicted >> w2 >> measured));
    CHECK(w1 == "predicted");
    CHECK(w2 == "measured");
    CHECK(std::abs(predicted - measured) < 1e-3 * std::abs(predicted));
}

TEST_CASE("missing spec file is a usage error") {
    CHECK(run("spectrum --spec /no/such/file.json").status == 2);
}

TEST_CASE("bad arguments exit with status 2") {
    CHECK(run("frobnicate").status == 2);
    CHECK(run("verify").status == 2);
    CHECK(run("spectrum --example 99").status == 2);
    CHECK(run("spectrum --example 5").status == 2);  // family parameter missing
}

TEST_CASE("non-integrable potential is a runtime failure, not a usage error") {
    CHECK(run("qval --example 4").status == 1);
}

TEST_CASE("spectrum emits deterministic CSV output") {
    const std::string csv = "/tmp/fourops_test_spectrum.csv";
    RunResult r1 = run("spectrum --example 1 --k 3 --grid \"-30,30,1501\" --out " + csv);
    REQUIRE(r1.status == 0);
    auto j = nlohmann::json::parse(r1.out);
    REQUIRE(j.at("eigenvalues").size() == 3);
    CHECK(std::abs(j["eigenvalues"][0].get<double>() + 4.0) < 1e-2);

    std::string first = slurp(csv);
    REQUIRE(!first.empty());
    CHECK(first.substr(0, first.find('\n')) == "x,psi0,psi1,psi2");

    RunResult r2 = run("spectrum --example 1 --k 3 --grid \"-30,30,1501\" --out " + csv);
    REQUIRE(r2.status == 0);
    CHECK(r2.out == r1.out);
    CHECK(slurp(csv) == first);
    std::remove(csv.c_str());
}

TEST_CASE("remove reports isospectrality") {
    const std::string out = "/tmp/fourops_test_remove.json";
    RunResult r = run("remove --example 1 --out " + out);
    REQUIRE(r.status == 0);
    auto j = nlohmann::json::parse(slurp(out));
    CHECK(j.at("report").at("e0_removed").get<bool>());
    CHECK(j.at("report").at("others_match").get<bool>());
    std::remove(out.c_str());
}

TEST_CASE("factorize from a problem-spec file") {
    const std::string spec = "/tmp/fourops_test_spec.json";
    {
        std::ofstream o(spec);
        // one-level family, kappa = 1, written out as closed forms
        o << R"({"grid": {"x_min": -40.0, "x_max": 40.0, "n": 4001},
                 "u": {"kind": "closed_form", "terms": [
                   {"coef": 22.62741699796952, "factors": [{"base": "recip_sqrt2_cosh", "power": 1.0, "scale": 2.0}]},
                   {"coef": -16.0, "factors": [{"base": "recip_sqrt2_cosh", "power": 2.0, "scale": 2.0}]}]},
                 "v": {"kind": "closed_form", "terms": [
                   {"coef": 22.62741699796952, "factors": [{"base": "recip_sqrt2_cosh", "power": 1.0, "scale": 2.0}]},
                   {"coef": -192.0, "factors": [{"base": "recip_sqrt2_cosh", "power": 2.0, "scale": 2.0}]},
                   {"coef": 362.03867196751236, "factors": [{"base": "recip_sqrt2_cosh", "power": 3.0, "scale": 2.0}]},
                   {"coef": -128.0, "factors": [{"base": "recip_sqrt2_cosh", "power": 4.0, "scale": 2.0}]}]}})";
    }
    RunResult r = run("factorize --spec " + spec);
    REQUIRE(r.status == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(std::abs(j.at("E0").get<double>() + 4.0) < 1e-2);
    CHECK(j.at("residuals").at("factor_identity_u").get<double>() < 1e-2);
    std::remove(spec.c_str());
}

TEST_CASE("evolve emits a conservation report") {
    RunResult r = run("evolve --initial follyton:0.5 --t-end 0.05 --dt 0.005 --n 256");
    REQUIRE(r.status == 0);
    auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("t_end").get<double>() == doctest::Approx(0.05));
    CHECK(j.at("q_drift_relative").get<double>() < 1e-4);
}

int main(int argc, char** argv) {
    doctest::Context ctx;
    for (int i = 1; i < argc; ++i)
        if (argv[i][0] != '-') g_cli = argv[i];
    if (g_cli.empty()) {
        std::fprintf(stderr, "usage: test_cli <path-to-cli-binary>\n");
        return 1;
    }
    ctx.applyCommandLine(argc, argv);
    return ctx.run();
}
