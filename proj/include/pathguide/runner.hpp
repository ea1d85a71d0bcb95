#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pathguide/config.hpp"
#include "pathguide/sim.hpp"

namespace pathguide {

// Full record of one closed-loop run.
struct RunRecord {
    std::string scenario_name;
    std::uint32_t seed = 0;
    std::vector<StepRecord> steps;
    Metrics metrics;
    std::vector<double> phase_jitter;   // per-run extra phase offsets applied to the lights
};

struct RunOptions {
    std::string scenario_path;
    std::string config_path;             // empty -> defaults
    std::optional<std::uint32_t> seed;   // overrides the scenario seed
    std::string out_dir;                 // empty -> nothing written
    bool dump_frames = false;            // write rendered masks as PNGs to out_dir/frames
    std::optional<double> noise;         // overrides config classifier_noise
    std::optional<int> step_cap;         // overrides the scenario step cap
};

RunRecord run_scenario(const RunOptions& options);

// Independent seeded runs (seed, seed+1, ...); `jobs` > 1 executes on parallel
// workers with isolated outputs under out_dir/seed_<n>.
std::vector<RunRecord> run_sweep(const RunOptions& options, int count, int jobs = 1);

// Line-delimited JSON, one object per step; byte-identical across reruns.
std::string run_log_text(const RunRecord& record);
std::string metrics_json(const RunRecord& record);
void write_run_outputs(const RunRecord& record, const std::string& out_dir);

struct ReplayResult {
    std::vector<std::string> rc_lines;   // one per frame
    std::vector<VoiceEvent> events;
    int unknown_pixel_warnings = 0;      // pixels that fell back to void during decode
    std::int64_t frames = 0;
};

// Runs the real pipeline over recorded mask PNGs (lexicographic order) with a
// sidecar label file standing in for the patch classifier. Label lines are one
// of the five class names or `none`; '#' comments and blank lines are skipped.
ReplayResult replay(const std::string& frames_dir, const std::string& labels_path,
                    const RunConfig& config);

struct BenchReport {
    int warmup_frames = 0;
    int measured_frames = 0;
    double median_ms = 0.0;
    double p95_ms = 0.0;
    double mean_ms = 0.0;
    std::string text() const;
};

// Times the non-NN pipeline (decode -> analyze -> verdict -> controller step)
// over the recorded frames, cycling through them as needed.
BenchReport bench(const std::string& frames_dir, int iterations, int warmup,
                  const RunConfig& config);

}  // namespace pathguide
