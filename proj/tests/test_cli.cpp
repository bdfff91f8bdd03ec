// Runs the command-line tool as a subprocess and checks exit codes and outputs.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

const fs::path kDir = fs::temp_directory_path() / "bispec_cli_test";

int run(const std::string& args) {
    const std::string cmd = std::string(BISPEC_CLI) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string at(const std::string& name) { return (kDir / name).string(); }

struct Workdir {
    Workdir() {
        fs::remove_all(kDir);
        fs::create_directories(kDir);
    }
};

}  // namespace

TEST_CASE_FIXTURE(Workdir, "gen is deterministic and writes sidecars") {
    REQUIRE(run("gen --n 3 --seed 5 --out " + at("a.json")) == 0);
    const std::string first = slurp(at("a.json")), meta = slurp(at("a.json.meta.json"));
    REQUIRE(run("gen --n 3 --seed 5 --out " + at("a.json")) == 0);
    CHECK(slurp(at("a.json")) == first);
    CHECK(slurp(at("a.json.meta.json")) == meta);
    CHECK(fs::exists(at("a.json.spectral.json")));
    CHECK(json::parse(meta)["seed"] == 5);
}

TEST_CASE_FIXTURE(Workdir, "usage errors exit with 2") {
    CHECK(run("gen --n 0") == 2);
    CHECK(run("") == 2);
    CHECK(run("gen --n 2 --backend fuzzy") == 2);
    CHECK(run("verify " + at("missing.json")) == 2);
    CHECK(run("gen --n 2 --rho 1,1") == 0);  // rho is only read by commands that use it
}

TEST_CASE_FIXTURE(Workdir, "verify passes on generated pairs in both backends") {
    for (const std::string backend : {"float", "exact"}) {
        REQUIRE(run("--backend " + backend + " gen --n 3 --seed 2 --out " + at("p.json")) == 0);
        CHECK(run("--backend " + backend + " verify " + at("p.json") + " --out " + at("r.json")) == 0);
        CHECK(json::parse(slurp(at("r.json")))["pass"] == true);
        CHECK(run("--backend " + backend + " --rho bessel2 verify " + at("p.json") + " --samples 4") == 0);
    }
}

TEST_CASE_FIXTURE(Workdir, "a corrupted pair fails the rank suite with exit 1") {
    REQUIRE(run("gen --n 3 --seed 2 --out " + at("p.json")) == 0);
    json pair = json::parse(slurp(at("p.json")));
    // Entry (0,1); a diagonal bump would commute with the diagonal Q.
    pair["P"]["entries"][1][0] = pair["P"]["entries"][1][0].get<double>() + 0.1;
    std::ofstream(at("bad.json")) << pair.dump();
    CHECK(run("verify " + at("bad.json") + " --suites rank --out " + at("r.json")) == 1);
    CHECK(json::parse(slurp(at("r.json")))["suites"]["rank"]["pass"] == false);
}

TEST_CASE_FIXTURE(Workdir, "involute twice returns the input") {
    REQUIRE(run("--backend exact gen --n 3 --seed 4 --out " + at("p.json")) == 0);
    for (const std::string map : {"kp", "airy"}) {
        REQUIRE(run("--backend exact involute " + at("p.json") + " --map " + map + " --out " + at("i.json")) == 0);
        REQUIRE(run("--backend exact involute " + at("i.json") + " --map " + map + " --out " + at("ii.json")) == 0);
        CHECK(json::parse(slurp(at("ii.json"))) == json::parse(slurp(at("p.json"))));
    }
    CHECK(run("involute " + at("p.json") + " --map bessel") == 2);  // default rho is of Airy kind
}

TEST_CASE_FIXTURE(Workdir, "bessel involution on singular Q exits with 2") {
    std::ofstream(at("z.json")) << R"({"P": {"n": 1, "entries": [[1, 0]]}, "Q": {"n": 1, "entries": [[0, 0]]}})";
    CHECK(run("--rho bessel2 involute " + at("z.json") + " --map bessel") == 2);
}

TEST_CASE_FIXTURE(Workdir, "flow, baker and ham outputs") {
    REQUIRE(run("gen --n 2 --seed 3 --out " + at("p.json")) == 0);
    REQUIRE(run("flow " + at("p.json") + " --steps 1 --t0 0.25 --out " + at("f.csv")) == 0);
    const std::string csv = slurp(at("f.csv"));
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
    CHECK(csv.rfind("t,pole1_re,pole1_im,pole2_re,pole2_im,collision_flag\n0.25,", 0) == 0);
    CHECK(json::parse(slurp(at("f.csv.meta.json")))["grid"]["steps"] == 1);

    REQUIRE(run("baker " + at("p.json") + " --x 0.5,1:1 --z 2 --out " + at("k.csv")) == 0);
    const std::string k = slurp(at("k.csv"));
    CHECK(std::count(k.begin(), k.end(), '\n') == 3);
    CHECK(run("--rho bessel2 baker " + at("p.json") + " --x 0.5 --z 2 --mode raw") == 0);

    REQUIRE(run("ham " + at("p.json") + " --m 1 --compare-reduced --out " + at("h.json")) == 0);
    CHECK(json::parse(slurp(at("h.json")))["difference"].get<double>() < 1e-9);
}
