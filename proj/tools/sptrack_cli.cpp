// Command-line front end: `run` drives trackers over synthetic
// scenarios (optionally sweeping a parameter) and emits per-frame CSV
// plus JSON summaries; `verify` runs the oracle-equivalence and
// gradient checks. Exit codes: 0 success, 1 config error, 2 runtime
// invariant violation, 3 verification failure.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sptrack/report.hpp"
#include "sptrack/sim.hpp"
#include "sptrack/tracker.hpp"
#include "sptrack/verify.hpp"

namespace fs = std::filesystem;
using namespace sptrack;

namespace {

struct RunOptions {
    std::string scenario_path;
    bool suite = false;
    std::string ablate;
    std::string out_dir = "out";
    bool dump_frames = false;
};

struct AblateSpec {
    std::string parameter; // "stages" or "interval"
    std::vector<int> values;
};

std::string sanitize(const std::string& name) {
    std::string out;
    for (char ch : name)
        out += (std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_') ? ch : '_';
    return out.empty() ? "scenario" : out;
}

AblateSpec parse_ablate(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos)
        fail(errc::invalid_spec, "--ablate expects 'stages=1,2,3' or 'interval=3,6,12'");
    AblateSpec spec;
    spec.parameter = text.substr(0, eq);
    if (spec.parameter != "stages" && spec.parameter != "interval")
        fail(errc::invalid_spec, "--ablate parameter must be 'stages' or 'interval', got '" +
                                     spec.parameter + "'");
    std::istringstream vs(text.substr(eq + 1));
    std::string tok;
    while (std::getline(vs, tok, ',')) {
        try {
            const int v = std::stoi(tok);
            if (v < 1) throw std::invalid_argument("non-positive");
            spec.values.push_back(v);
        } catch (const std::exception&) {
            fail(errc::invalid_spec, "--ablate value '" + tok + "' is not a positive integer");
        }
    }
    if (spec.values.empty()) fail(errc::invalid_spec, "--ablate needs at least one value");
    std::sort(spec.values.begin(), spec.values.end());
    spec.values.erase(std::unique(spec.values.begin(), spec.values.end()), spec.values.end());
    return spec;
}

struct ScenarioRun {
    ScenarioSpec spec;
    Sequence seq;
    std::vector<FrameResult> results;
    EvalReport report;
};

ScenarioRun run_one(const ScenarioSpec& spec, const TrackerConfig& cfg) {
    ScenarioRun run;
    run.spec = spec;
    run.seq = generate(spec);
    run.results = run_tracker(run.seq, cfg);
    run.report = evaluate(run.results, run.seq.truth, spec.target_size);
    return run;
}

void write_text_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(errc::invalid_spec, "cannot open " + path.string() + " for writing");
    out << content;
}

void print_scenario_line(const ScenarioRun& run) {
    std::printf("%-24s ps20=%.3f auc=%.3f corrupted_v=%.4f clean_v=%.4f rejected=%.3f\n",
                run.spec.name.c_str(), run.report.precision_at_20, run.report.auc_analog,
                run.report.corrupted_mean_v, run.report.clean_mean_v,
                run.report.corrupted_rejection_fraction);
}

void dump_frames(const fs::path& dir, const ScenarioRun& run) {
    fs::create_directories(dir);
    for (std::size_t f = 0; f < run.seq.frames.size(); ++f) {
        char name[32];
        std::snprintf(name, sizeof(name), "f%04zu.pgm", f + 1);
        std::ofstream out(dir / name, std::ios::binary);
        if (!out) fail(errc::invalid_spec, "cannot open frame dump " + (dir / name).string());
        write_pgm(out, run.seq.frames[f]);
    }
}

int cmd_run(TrackerConfig cfg, const std::string& kind_str, const RunOptions& opt) {
    std::vector<ScenarioSpec> scenarios;
    AblateSpec ablate;
    try {
        if (kind_str == "plain") cfg.kind = RegularizerKind::plain;
        else if (kind_str == "time") cfg.kind = RegularizerKind::time_weighted;
        else cfg.kind = RegularizerKind::detection_guided;
        cfg.validate();
        if (!opt.scenario_path.empty()) scenarios.push_back(parse_scenario_file(opt.scenario_path));
        else if (opt.suite) scenarios = default_suite();
        else scenarios.push_back(default_scenario());
        if (!opt.ablate.empty()) ablate = parse_ablate(opt.ablate);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }

    try {
        fs::create_directories(opt.out_dir);
        const fs::path out_dir(opt.out_dir);

        if (!ablate.values.empty()) {
            nlohmann::json ab;
            ab["parameter"] = ablate.parameter;
            ab["values"] = ablate.values;
            ab["config"] = config_to_json(cfg);
            nlohmann::json runs = nlohmann::json::array();
            for (const int value : ablate.values) {
                TrackerConfig swept = cfg;
                if (ablate.parameter == "stages") swept.schedule.stages = value;
                else swept.update_interval = static_cast<std::size_t>(value);
                swept.validate();

                nlohmann::json entry;
                entry["value"] = value;
                nlohmann::json per = nlohmann::json::array();
                double sum_rej = 0.0, sum_ps = 0.0;
                for (const auto& spec : scenarios) {
                    const ScenarioRun run = run_one(spec, swept);
                    nlohmann::json s;
                    s["name"] = run.spec.name;
                    s["report"] = report_to_json(run.report);
                    per.push_back(std::move(s));
                    sum_rej += run.report.corrupted_rejection_fraction;
                    sum_ps += run.report.precision_at_20;
                }
                entry["scenarios"] = std::move(per);
                entry["mean_rejection_fraction"] = sum_rej / static_cast<double>(scenarios.size());
                entry["mean_precision_at_20"] = sum_ps / static_cast<double>(scenarios.size());
                std::printf("%s=%-4d mean_rejected=%.3f mean_ps20=%.3f\n", ablate.parameter.c_str(),
                            value, sum_rej / static_cast<double>(scenarios.size()),
                            sum_ps / static_cast<double>(scenarios.size()));
                runs.push_back(std::move(entry));
            }
            ab["runs"] = std::move(runs);
            write_text_file(out_dir / "ablation.json", ab.dump(2) + "\n");
            std::printf("wrote %s\n", (out_dir / "ablation.json").string().c_str());
            return 0;
        }

        nlohmann::json summary;
        summary["config"] = config_to_json(cfg);
        nlohmann::json per = nlohmann::json::array();
        for (const auto& spec : scenarios) {
            const ScenarioRun run = run_one(spec, cfg);
            const std::string base = sanitize(run.spec.name);

            std::ostringstream csv;
            write_run_csv(csv, run.results, run.seq.truth,
                          static_cast<std::size_t>(cfg.schedule.stages));
            write_text_file(out_dir / (base + ".csv"), csv.str());

            nlohmann::json s;
            s["name"] = run.spec.name;
            s["frames"] = run.spec.frames;
            s["report"] = report_to_json(run.report);
            write_text_file(out_dir / (base + ".json"), s.dump(2) + "\n");
            per.push_back(std::move(s));

            if (opt.dump_frames) dump_frames(out_dir / "frames" / base, run);
            print_scenario_line(run);
        }
        summary["scenarios"] = std::move(per);
        write_text_file(out_dir / "summary.json", summary.dump(2) + "\n");
        std::printf("wrote %s\n", (out_dir / "summary.json").string().c_str());
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "run error: " << e.what() << "\n";
        return 2;
    }
}

int cmd_verify(std::uint64_t seed) {
    verify::VerifyReport rep;
    try {
        rep = verify::run_verification(seed);
    } catch (const std::exception& e) {
        std::cerr << "verification error: " << e.what() << "\n";
        return 3;
    }
    std::printf("pacing oracle      max deviation %.3e over %zu instances   (tol %.0e)\n",
                rep.oracle.max_deviation, rep.oracle.instances, verify::tolerances::oracle);
    std::printf("stationarity       interior residual %.3e (%zu), boundary dev %.3e (%zu)   (tol %.0e)\n",
                rep.stationarity.max_interior_residual, rep.stationarity.interior,
                rep.stationarity.max_boundary_deviation, rep.stationarity.boundary,
                verify::tolerances::stationarity);
    std::printf("ridge gradient     max fd rel error %.3e, opt gradient %.3e   (tol %.0e)\n",
                rep.ridge.max_fd_rel_error, rep.ridge.max_opt_gradient, verify::tolerances::ridge_fd);
    std::printf("filter normal eq   max residual %.3e, min denominator %.3e   (tol %.0e)\n",
                rep.filter.max_residual, rep.filter.min_denominator, verify::tolerances::filter_residual);
    if (!rep.passed()) {
        std::printf("verification FAILED\n");
        return 3;
    }
    std::printf("all checks passed\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"progressive self-paced sample selection for online tracking"};
    app.require_subcommand(1);

    TrackerConfig cfg;
    RunOptions opt;
    std::string kind_str = "guided";

    auto* run = app.add_subcommand("run", "track scenarios and emit csv/json reports");
    run->add_option("--scenario", opt.scenario_path, "scenario config file")->check(CLI::ExistingFile);
    run->add_flag("--suite", opt.suite, "run the built-in three-scenario suite");
    run->add_option("--lambda0", cfg.schedule.lambda0, "initial learning pace")->capture_default_str();
    run->add_option("--mu", cfg.schedule.mu, "pace growth factor (> 1)")->capture_default_str();
    run->add_option("--stages", cfg.schedule.stages, "number of learning stages N")->capture_default_str();
    run->add_option("--xi", cfg.schedule.xi, "confidence coupling strength")->capture_default_str();
    run->add_option("--eta", cfg.eta, "temporal forgetting rate, [0,1)")->capture_default_str();
    run->add_option("--beta1", cfg.confidence.beta1, "peak-ratio gate threshold")->capture_default_str();
    run->add_option("--beta2", cfg.confidence.beta2, "peak-magnitude gate threshold")->capture_default_str();
    run->add_option("--alpha", cfg.learner.alpha, "model regularization strength")->capture_default_str();
    run->add_option("--capacity", cfg.capacity, "training buffer size T")->capture_default_str();
    run->add_option("--interval", cfg.update_interval, "frames between model updates")->capture_default_str();
    run->add_option("--acs-iters", cfg.acs_iters, "alternation iterations per stage")->capture_default_str();
    run->add_option("--patch-size", cfg.learner.patch_size, "square patch side")->capture_default_str();
    run->add_option("--regularizer", kind_str, "plain|time|guided")
        ->check(CLI::IsMember({"plain", "time", "guided"}))
        ->capture_default_str();
    run->add_flag("--auto-pace", cfg.auto_pace, "set lambda0 to the median loss at the first update");
    run->add_flag("--baseline", cfg.baseline_unweighted, "skip selection; fix every weight to its prior");
    run->add_option("--ablate", opt.ablate, "sweep 'stages=1,2,3,4' or 'interval=3,6,12'");
    run->add_option("--out", opt.out_dir, "output directory")->capture_default_str();
    run->add_flag("--dump-frames", opt.dump_frames, "write every frame as pgm");

    std::uint64_t verify_seed = 42;
    auto* verify = app.add_subcommand("verify", "oracle equivalence and gradient checks");
    verify->add_option("--seed", verify_seed, "rng seed for the random instances")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    if (run->parsed()) return cmd_run(cfg, kind_str, opt);
    return cmd_verify(verify_seed);
}
