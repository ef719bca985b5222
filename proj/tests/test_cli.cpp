#include "delcon/cli.hpp"

#include "delcon/scenario_io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using delcon::cli::run_command;

namespace {

const char* kPairScenario = R"({
  "graph": {"n": 2, "edges": [[1, 2]]},
  "tau": [[0, 1], [1, 0]],
  "c": 0.1,
  "W0": [[0.0, 1.0], [1.0, 0.0]],
  "tol": 1e-8
})";

const char* kQuadScenario = R"({
  "graph": {"n": 4, "edges": [[1, 2], [1, 3], [1, 4], [2, 3], [2, 4], [3, 4]]},
  "tau": [[0, 7, 1, 5], [7, 0, 5, 5], [1, 5, 0, 6], [5, 5, 6, 0]],
  "c": 0.25,
  "poses": [[0, 0, 0], [1, 0, 1.5707963267948966],
            [1, 1, 3.141592653589793], [0, 1, -1.5707963267948966]]
})";

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) : path(fs::temp_directory_path() / tag) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name, const std::string& content) const {
        const std::string p = (path / name).string();
        delcon::write_text_file(p, content);
        return p;
    }
    std::string sub(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("simulate writes artifacts and reports divergence through the exit code") {
    const TempDir tmp("delcon_cli_sim");
    const std::string scenario = tmp.file("pair.json", kPairScenario);

    CHECK_EQ(run_command({"simulate", "--scenario", scenario, "--out-dir", tmp.sub("out")}), 0);
    CHECK(fs::exists(tmp.sub("out") + "/trajectory.csv"));
    CHECK(fs::exists(tmp.sub("out") + "/report.json"));

    const std::string quad = tmp.file("quad.json", kQuadScenario);
    CHECK_EQ(run_command({"simulate", "--scenario", quad, "--c", "0.59",
                          "--out-dir", tmp.sub("div")}),
             1);
}

TEST_CASE("predict prints or writes the closed form") {
    const TempDir tmp("delcon_cli_pred");
    const std::string scenario = tmp.file("pair.json", kPairScenario);
    CHECK_EQ(run_command({"predict", "--scenario", scenario}), 0);
    const std::string out = tmp.sub("prediction.json");
    CHECK_EQ(run_command({"predict", "--scenario", scenario, "--out", out}), 0);
    CHECK(fs::exists(out));
}

TEST_CASE("bound requires a delay it can attribute") {
    const TempDir tmp("delcon_cli_bound");
    const std::string pair = tmp.file("pair.json", kPairScenario);
    CHECK_EQ(run_command({"bound", "--scenario", pair}), 0);

    const std::string quad = tmp.file("quad.json", kQuadScenario);
    CHECK_EQ(run_command({"bound", "--scenario", quad}), 2);  // delays not uniform
    CHECK_EQ(run_command({"bound", "--scenario", quad, "--d", "7"}), 0);
}

TEST_CASE("lmi-check exit code mirrors feasibility") {
    const TempDir tmp("delcon_cli_chk");
    const std::string quad = tmp.file("quad.json", kQuadScenario);
    CHECK_EQ(run_command({"lmi-check", "--scenario", quad}), 0);            // c = 0.25
    CHECK_EQ(run_command({"lmi-check", "--scenario", quad, "--c", "0.59"}), 1);
}

TEST_CASE("lmi-search writes a certificate and validates its bracket") {
    const TempDir tmp("delcon_cli_sea");
    const std::string pair = tmp.file("pair.json", kPairScenario);
    CHECK_EQ(run_command({"lmi-search", "--scenario", pair, "--lo", "0.01", "--hi", "1.5",
                          "--tol", "0.01", "--out-dir", tmp.sub("cert")}),
             0);
    CHECK(fs::exists(tmp.sub("cert") + "/certificate.json"));

    const std::string quad = tmp.file("quad.json", kQuadScenario);
    CHECK_EQ(run_command({"lmi-search", "--scenario", quad, "--lo", "0.5", "--hi", "1.0",
                          "--out-dir", tmp.sub("bad")}),
             2);
}

TEST_CASE("sweep validates the list and writes per-run artifacts") {
    const TempDir tmp("delcon_cli_swp");
    const std::string pair = tmp.file("pair.json", kPairScenario);
    CHECK_EQ(run_command({"sweep", "--scenario", pair, "--c-list", "0.1,0.5",
                          "--out-dir", tmp.sub("ok")}),
             0);
    CHECK(fs::exists(tmp.sub("ok") + "/run_0.json"));
    CHECK(fs::exists(tmp.sub("ok") + "/run_1.json"));
    CHECK(fs::exists(tmp.sub("ok") + "/summary.json"));
    CHECK(fs::exists(tmp.sub("ok") + "/summary.csv"));

    CHECK_EQ(run_command({"sweep", "--scenario", pair, "--c-list", "",
                          "--out-dir", tmp.sub("e1")}),
             2);
    CHECK_EQ(run_command({"sweep", "--scenario", pair, "--c-list", "0.5,0.1",
                          "--out-dir", tmp.sub("e2")}),
             2);
    CHECK_EQ(run_command({"sweep", "--scenario", pair, "--c-list", "0.1,zebra",
                          "--out-dir", tmp.sub("e3")}),
             2);
}

TEST_CASE("rendezvous runs the scenario poses to capture") {
    const TempDir tmp("delcon_cli_rdv");
    const std::string quad = tmp.file("quad.json", kQuadScenario);
    CHECK_EQ(run_command({"rendezvous", "--scenario", quad, "--c", "0.2"}), 2);  // no such flag
    CHECK_EQ(run_command({"rendezvous", "--scenario", quad, "--duration", "60",
                          "--out-dir", tmp.sub("out")}),
             0);
    CHECK(fs::exists(tmp.sub("out") + "/trace.csv"));
    CHECK(fs::exists(tmp.sub("out") + "/summary.json"));
}

TEST_CASE("bad invocations and IO failures map to distinct exit codes") {
    const TempDir tmp("delcon_cli_err");
    CHECK_EQ(run_command({"frobnicate"}), 2);
    CHECK_EQ(run_command({}), 2);
    CHECK_EQ(run_command({"--help"}), 0);
    CHECK_EQ(run_command({"simulate", "--scenario", tmp.sub("missing.json")}), 2);

    const std::string pair = tmp.file("pair.json", kPairScenario);
    const std::string blocker = tmp.file("blocker", "not a directory");
    CHECK_EQ(run_command({"simulate", "--scenario", pair, "--out-dir",
                          (tmp.path / "blocker" / "deeper").string()}),
             1);
}
