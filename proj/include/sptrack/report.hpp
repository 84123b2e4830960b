#pragma once

// Machine-readable run outputs: the per-frame CSV (12 significant
// digits, so descent and determinism assertions are reproducible from
// the files alone) and the JSON summary of an EvalReport. Neither
// output carries timestamps; identical runs serialize identically.

#include <cstdio>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "sptrack/core.hpp"
#include "sptrack/sim.hpp"
#include "sptrack/tracker.hpp"

namespace sptrack {

inline std::string format_sig12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline std::string csv_header(std::size_t stages) {
    std::string h = "frame,x,y,center_error,confidence,updated";
    for (std::size_t n = 1; n <= stages; ++n) h += ",selected_s" + std::to_string(n);
    return h;
}

/// One row per frame. Center error comes from the ground truth; the
/// per-stage selected counts are empty on frames without an update.
inline void write_run_csv(std::ostream& out, const std::vector<FrameResult>& results,
                          const SequenceTruth& truth, std::size_t stages) {
    if (results.size() != truth.x.size())
        fail(errc::length_mismatch, "results length != truth length");
    out << csv_header(stages) << "\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto& r = results[i];
        const double dx = static_cast<double>(r.x - truth.x[i]);
        const double dy = static_cast<double>(r.y - truth.y[i]);
        out << r.frame << "," << r.x << "," << r.y << "," << format_sig12(std::hypot(dx, dy)) << ","
            << format_sig12(r.confidence) << "," << (r.updated ? 1 : 0);
        for (std::size_t n = 0; n < stages; ++n) {
            out << ",";
            if (n < r.stages.size()) out << r.stages[n].selected;
        }
        out << "\n";
    }
}

struct CsvRow {
    std::int64_t frame = 0;
    std::int64_t x = 0;
    std::int64_t y = 0;
    double center_error = 0.0;
    double confidence = 0.0;
    bool updated = false;
    std::vector<std::optional<std::size_t>> selected;
};

inline std::vector<CsvRow> parse_run_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) fail(errc::invalid_spec, "csv is empty");
    if (line.rfind("frame,x,y,center_error,confidence,updated", 0) != 0)
        fail(errc::invalid_spec, "unrecognized csv header: " + line);

    std::vector<CsvRow> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) fields.push_back(cell);
        if (!line.empty() && line.back() == ',') fields.push_back("");
        if (fields.size() < 6)
            fail(errc::invalid_spec, "csv line " + std::to_string(lineno) + ": expected >= 6 fields");
        CsvRow row;
        try {
            row.frame = std::stoll(fields[0]);
            row.x = std::stoll(fields[1]);
            row.y = std::stoll(fields[2]);
            row.center_error = std::stod(fields[3]);
            row.confidence = std::stod(fields[4]);
            row.updated = std::stoi(fields[5]) != 0;
            for (std::size_t k = 6; k < fields.size(); ++k)
                row.selected.push_back(fields[k].empty()
                                           ? std::optional<std::size_t>{}
                                           : std::optional<std::size_t>{std::stoull(fields[k])});
        } catch (const std::exception&) {
            fail(errc::invalid_spec, "csv line " + std::to_string(lineno) + ": malformed number");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline nlohmann::json report_to_json(const EvalReport& rep) {
    nlohmann::json j;
    j["precision"] = rep.precision;
    j["precision_at_20"] = rep.precision_at_20;
    j["overlap_success"] = rep.overlap_success;
    j["auc_analog"] = rep.auc_analog;
    j["corrupted_mean_v"] = rep.corrupted_mean_v;
    j["clean_mean_v"] = rep.clean_mean_v;
    j["corrupted_rejection_fraction"] = rep.corrupted_rejection_fraction;
    j["corrupted_frames"] = rep.corrupted_frames;
    j["clean_frames"] = rep.clean_frames;
    return j;
}

inline nlohmann::json config_to_json(const TrackerConfig& cfg) {
    nlohmann::json j;
    j["lambda0"] = cfg.schedule.lambda0;
    j["mu"] = cfg.schedule.mu;
    j["stages"] = cfg.schedule.stages;
    j["xi"] = cfg.schedule.xi;
    j["eta"] = cfg.eta;
    j["beta1"] = cfg.confidence.beta1;
    j["beta2"] = cfg.confidence.beta2;
    j["alpha"] = cfg.learner.alpha;
    j["capacity"] = cfg.capacity;
    j["interval"] = cfg.update_interval;
    j["acs_iters"] = cfg.acs_iters;
    j["regularizer"] = regularizer_name(cfg.kind);
    j["patch_size"] = cfg.learner.patch_size;
    j["auto_pace"] = cfg.auto_pace;
    j["baseline_unweighted"] = cfg.baseline_unweighted;
    return j;
}

} // namespace sptrack
