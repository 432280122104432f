#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(OFR_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("ofr_cli_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string config(const std::string& name) { return std::string(OFR_CONFIG_DIR) + "/" + name + ".json"; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit with 2") {
    CHECK(run("") == 2);
    CHECK(run("frobnicate") == 2);
    CHECK(run("dump-grid --out /tmp/x") == 2);
    CHECK(run("dump-grid --config /nonexistent.json --out /tmp/x") == 2);
    CHECK(run("--help") == 0);
}

TEST_CASE("config errors exit with 2") {
    const auto out = scratch("cfg");
    CHECK(run("dump-grid --config " + config("tight") + " --set trap.color=1 --out " + out.string()) == 2);
    CHECK(run("dump-grid --config " + config("tight") + " --set grid.R_min_furlong=1 --out " + out.string()) == 2);
    CHECK(run("reproduce fig9 --out " + out.string()) == 2);
}

TEST_CASE("numerical failures exit with 3") {
    const auto out = scratch("num");
    CHECK(run("dump-grid --config " + config("tight") +
              " --set potentials.ground.a_target_a0=1e9 --out " +
              out.string()) == 3);
}

TEST_CASE("unwritable output exits with 4") {
    fs::path blocker = scratch("blocker");
    std::ofstream(blocker) << "file, not a directory";
    CHECK(run("dump-grid --config " + config("tight") + " --out " + (blocker / "sub").string()) == 4);
    fs::remove(blocker);
}

TEST_CASE("dump-grid writes outputs and a manifest") {
    const auto out = scratch("grid");
    REQUIRE(run("dump-grid --config " + config("tight") + " --out " + out.string()) == 0);
    CHECK(fs::exists(out / "grid.csv"));
    CHECK(fs::exists(out / "config.json"));
    const auto m = nlohmann::json::parse(slurp(out / "manifest.json"));
    CHECK(m["tool"] == "ofr");
    CHECK(m["command"] == "dump-grid");
    CHECK(m["status"] == "ok");
    CHECK(m["config_sha256"].get<std::string>().size() == 64);
    bool listed = false;
    for (const auto& f : m["files"]) listed = listed || f["path"] == "grid.csv";
    CHECK(listed);
    const std::string csv = slurp(out / "grid.csv");
    CHECK(csv.rfind("index,R_a0,jacobian,weight_a0\n", 0) == 0);
    CHECK(csv.find('\r') == std::string::npos);
}

TEST_CASE("repeated runs give identical files") {
    const auto a = scratch("det_a"), b = scratch("det_b");
    REQUIRE(run("dump-potential --config " + config("tight") + " --out " + a.string()) == 0);
    REQUIRE(run("dump-potential --config " + config("tight") + " --out " + b.string() + " --workers 3") == 0);
    for (const char* f : {"potential_ground.csv", "potential_excited.csv", "config.json"})
        CHECK(slurp(a / f) == slurp(b / f));
}

}
