#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include "json.hpp"

#include "support.hpp"

#include "sptrack/report.hpp"

namespace fs = std::filesystem;
using testutil::contains;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path fresh_dir() {
    static std::atomic<int> counter{0};
    const fs::path dir = fs::temp_directory_path() /
                         ("sptrack_cli_test_" + std::to_string(::getpid()) + "_" +
                          std::to_string(counter++));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

CliResult run_cli(const std::string& args, const fs::path& dir) {
    const fs::path out_file = dir / "stdout.txt";
    const fs::path err_file = dir / "stderr.txt";
    const std::string cmd = std::string("\"") + SPTRACK_CLI_PATH + "\" " + args + " > \"" +
                            out_file.string() + "\" 2> \"" + err_file.string() + "\"";
    const int status = std::system(cmd.c_str());
    CliResult result;
    REQUIRE(status != -1);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out_file);
    result.err = slurp(err_file);
    return result;
}

fs::path write_small_scenario(const fs::path& dir) {
    const fs::path path = dir / "small.cfg";
    std::ofstream out(path);
    out << "name = cli-small\n"
        << "frames = 30\n"
        << "rows = 64\n"
        << "cols = 80\n"
        << "target_size = 16\n"
        << "seed = 3\n"
        << "event = occlusion 10..14 1.0\n";
    return path;
}

std::size_t csv_row_count(const fs::path& csv_path) {
    std::ifstream in(csv_path);
    REQUIRE(in.good());
    return sptrack::parse_run_csv(in).size();
}

} // namespace

TEST_CASE("a scenario run writes csv and json reports") {
    const fs::path dir = fresh_dir();
    const fs::path scenario = write_small_scenario(dir);
    const fs::path out = dir / "nested" / "out";

    const auto r = run_cli("run --scenario \"" + scenario.string() + "\" --patch-size 32 --out \"" +
                               out.string() + "\"",
                           dir);
    INFO(r.err);
    REQUIRE(r.exit_code == 0);
    REQUIRE(contains(r.out, "cli-small"));
    REQUIRE(contains(r.out, "ps20="));
    REQUIRE(contains(r.out, "summary.json"));

    // one csv row per frame
    REQUIRE(csv_row_count(out / "cli-small.csv") == 30);

    const auto scenario_json = nlohmann::json::parse(slurp(out / "cli-small.json"));
    REQUIRE(scenario_json["name"] == "cli-small");
    REQUIRE(scenario_json["frames"] == 30);
    REQUIRE(scenario_json["report"].contains("precision_at_20"));
    REQUIRE(scenario_json["report"].contains("corrupted_rejection_fraction"));

    const auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
    REQUIRE(summary["config"]["patch_size"] == 32);
    REQUIRE(summary["config"]["regularizer"] == "detection_guided");
    REQUIRE(summary["scenarios"].size() == 1);
}

TEST_CASE("identical runs produce byte-identical outputs") {
    const fs::path dir = fresh_dir();
    const fs::path scenario = write_small_scenario(dir);
    const std::string base = "run --scenario \"" + scenario.string() + "\" --patch-size 32 --out \"";
    const fs::path out_a = dir / "a", out_b = dir / "b";

    REQUIRE(run_cli(base + out_a.string() + "\"", dir).exit_code == 0);
    REQUIRE(run_cli(base + out_b.string() + "\"", dir).exit_code == 0);
    REQUIRE(slurp(out_a / "cli-small.csv") == slurp(out_b / "cli-small.csv"));
    REQUIRE(slurp(out_a / "cli-small.json") == slurp(out_b / "cli-small.json"));
}

TEST_CASE("invalid configuration exits with code 1") {
    const fs::path dir = fresh_dir();
    const fs::path scenario = write_small_scenario(dir);

    SECTION("mu must exceed one") {
        const auto r = run_cli("run --scenario \"" + scenario.string() + "\" --mu 0.9", dir);
        REQUIRE(r.exit_code == 1);
        REQUIRE(contains(r.err, "config error"));
        REQUIRE(contains(r.err, "mu must be > 1"));
    }

    SECTION("eta outside [0,1)") {
        const auto r = run_cli("run --scenario \"" + scenario.string() + "\" --eta 1.0", dir);
        REQUIRE(r.exit_code == 1);
        REQUIRE(contains(r.err, "eta must lie in [0,1)"));
    }

    SECTION("malformed scenario file names the line") {
        const fs::path bad = dir / "bad.cfg";
        std::ofstream(bad) << "frames = 20\nframes = -2\n";
        const auto r = run_cli("run --scenario \"" + bad.string() + "\"", dir);
        REQUIRE(r.exit_code == 1);
        REQUIRE(contains(r.err, "bad.cfg:2:"));
        REQUIRE(contains(r.err, "non-negative integer"));
    }

    SECTION("missing scenario file") {
        const auto r = run_cli("run --scenario \"" + (dir / "absent.cfg").string() + "\"", dir);
        REQUIRE(r.exit_code == 1);
    }

    SECTION("unknown regularizer name") {
        const auto r =
            run_cli("run --scenario \"" + scenario.string() + "\" --regularizer fancy", dir);
        REQUIRE(r.exit_code == 1);
    }

    SECTION("missing subcommand") {
        REQUIRE(run_cli("", dir).exit_code == 1);
    }
}

TEST_CASE("a hopeless pace is a runtime error, not a config error") {
    const fs::path dir = fresh_dir();
    const fs::path scenario = write_small_scenario(dir);
    const auto r = run_cli("run --scenario \"" + scenario.string() +
                               "\" --patch-size 32 --lambda0 1e-30 --out \"" +
                               (dir / "out").string() + "\"",
                           dir);
    REQUIRE(r.exit_code == 2);
    REQUIRE(contains(r.err, "run error"));
    REQUIRE(contains(r.err, "no sample admitted even at the final pace"));
}

TEST_CASE("ablation sweeps write one report per value") {
    const fs::path dir = fresh_dir();
    const fs::path scenario = write_small_scenario(dir);
    const fs::path out = dir / "out";

    // unsorted duplicates collapse to an ascending unique list
    const auto r = run_cli("run --scenario \"" + scenario.string() +
                               "\" --patch-size 32 --ablate stages=2,1,2 --out \"" + out.string() +
                               "\"",
                           dir);
    INFO(r.err);
    REQUIRE(r.exit_code == 0);

    const auto ab = nlohmann::json::parse(slurp(out / "ablation.json"));
    REQUIRE(ab["parameter"] == "stages");
    REQUIRE(ab["values"] == nlohmann::json({1, 2}));
    REQUIRE(ab["runs"].size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        const auto& entry = ab["runs"][i];
        REQUIRE(entry["value"] == static_cast<int>(i) + 1);
        REQUIRE(entry["scenarios"].size() == 1);
        REQUIRE(entry.contains("mean_rejection_fraction"));
        REQUIRE(entry.contains("mean_precision_at_20"));
    }
    REQUIRE_FALSE(fs::exists(out / "summary.json")); // sweep mode replaces the plain outputs

    SECTION("interval sweeps reuse the same machinery") {
        const fs::path out2 = dir / "out2";
        const auto r2 = run_cli("run --scenario \"" + scenario.string() +
                                    "\" --patch-size 32 --ablate interval=5,10 --out \"" +
                                    out2.string() + "\"",
                                dir);
        REQUIRE(r2.exit_code == 0);
        const auto ab2 = nlohmann::json::parse(slurp(out2 / "ablation.json"));
        REQUIRE(ab2["parameter"] == "interval");
        REQUIRE(ab2["runs"].size() == 2);
    }
}

TEST_CASE("ablation arguments are validated") {
    const fs::path dir = fresh_dir();
    const fs::path scenario = write_small_scenario(dir);
    const std::string base = "run --scenario \"" + scenario.string() + "\" --ablate ";

    auto expect_config_error = [&](const std::string& ablate, const std::string& needle) {
        const auto r = run_cli(base + ablate, dir);
        REQUIRE(r.exit_code == 1);
        REQUIRE(contains(r.err, needle));
    };
    expect_config_error("garbage", "--ablate expects");
    expect_config_error("capacity=1,2", "must be 'stages' or 'interval'");
    expect_config_error("stages=0,2", "not a positive integer");
    expect_config_error("interval=abc", "not a positive integer");
    expect_config_error("stages=", "at least one value");
}

TEST_CASE("verification passes from the command line") {
    const fs::path dir = fresh_dir();
    const auto r = run_cli("verify", dir);
    INFO(r.out);
    INFO(r.err);
    REQUIRE(r.exit_code == 0);
    REQUIRE(contains(r.out, "pacing oracle"));
    REQUIRE(contains(r.out, "all checks passed"));

    const auto seeded = run_cli("verify --seed 7", dir);
    REQUIRE(seeded.exit_code == 0);
    REQUIRE(contains(seeded.out, "all checks passed"));
}
