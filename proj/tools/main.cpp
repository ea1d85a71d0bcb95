#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pathguide/errors.hpp"
#include "pathguide/runner.hpp"

using namespace pathguide;

namespace {

// --config wins; otherwise the PATHGUIDE_CONFIG environment variable.
std::string effective_config(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("PATHGUIDE_CONFIG")) return env;
    return {};
}

void print_metrics(const RunRecord& record) {
    std::cout << metrics_json(record);
}

int exit_code_for(const Metrics& m) {
    return (m.goal_reached && m.red_light_violations == 0) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pathguide: walkable-path guidance engine with a street-world simulator"};
    app.require_subcommand(1);

    std::string config_path, scenario_path, out_dir, frames_dir, labels_path;
    std::optional<std::uint32_t> seed;
    std::optional<double> noise;
    int sweep = 0, jobs = 1, iterations = 800, warmup = 200, preview_steps = 60;
    bool dump_frames = false;

    auto* run = app.add_subcommand("run", "Run a closed-loop scenario");
    run->add_option("--scenario", scenario_path, "Scenario file")->required();
    run->add_option("--config", config_path, "Config file");
    run->add_option("--seed", seed, "Seed override");
    run->add_option("--out", out_dir, "Output directory for logs");
    run->add_option("--sweep", sweep, "Run N seeded variants (seed, seed+1, ...)");
    run->add_option("--jobs", jobs, "Parallel workers for --sweep");
    run->add_option("--noise", noise, "Classifier noise override");
    run->add_flag("--dump-frames", dump_frames, "Write rendered masks under --out");

    auto* rep = app.add_subcommand("replay", "Replay recorded mask frames with sidecar labels");
    rep->add_option("--frames", frames_dir, "Directory of mask PNGs")->required();
    rep->add_option("--labels", labels_path, "Sidecar label file")->required();
    rep->add_option("--config", config_path, "Config file");

    auto* ben = app.add_subcommand("bench", "Time the per-frame pipeline on recorded frames");
    ben->add_option("--frames", frames_dir, "Directory of mask PNGs")->required();
    ben->add_option("--iterations", iterations, "Measured frames");
    ben->add_option("--warmup", warmup, "Warm-up frames");
    ben->add_option("--config", config_path, "Config file");

    auto* pre = app.add_subcommand("render-preview", "Dump rendered mask frames from a scenario");
    pre->add_option("--scenario", scenario_path, "Scenario file")->required();
    pre->add_option("--steps", preview_steps, "Number of closed-loop steps to render");
    pre->add_option("--out", out_dir, "Output directory")->required();
    pre->add_option("--config", config_path, "Config file");
    pre->add_option("--seed", seed, "Seed override");

    auto* val = app.add_subcommand("validate-scenario", "Parse and check a scenario file");
    val->add_option("--scenario", scenario_path, "Scenario file")->required();
    val->add_option("--config", config_path, "Config file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            RunOptions options;
            options.scenario_path = scenario_path;
            options.config_path = effective_config(config_path);
            options.seed = seed;
            options.out_dir = out_dir;
            options.noise = noise;
            options.dump_frames = dump_frames;
            if (sweep > 0) {
                const auto records = run_sweep(options, sweep, jobs);
                int worst = 0;
                for (const auto& r : records) {
                    print_metrics(r);
                    worst = std::max(worst, exit_code_for(r.metrics));
                }
                return worst;
            }
            const RunRecord record = run_scenario(options);
            print_metrics(record);
            return exit_code_for(record.metrics);
        }

        if (rep->parsed()) {
            RunConfig config;
            const std::string path = effective_config(config_path);
            if (!path.empty()) config = RunConfig::load(path);
            const ReplayResult result = replay(frames_dir, labels_path, config);
            for (const auto& line : result.rc_lines) std::cout << line << '\n';
            for (const auto& event : result.events) {
                nlohmann::ordered_json j;
                j["frame"] = event.frame_index;
                j["event"] = event.text;
                std::cerr << j.dump() << '\n';
            }
            std::cerr << "frames " << result.frames << ", unknown_pixels "
                      << result.unknown_pixel_warnings << '\n';
            return 0;
        }

        if (ben->parsed()) {
            RunConfig config;
            const std::string path = effective_config(config_path);
            if (!path.empty()) config = RunConfig::load(path);
            const BenchReport report = bench(frames_dir, iterations, warmup, config);
            std::cout << report.text();
            return 0;
        }

        if (pre->parsed()) {
            RunOptions options;
            options.scenario_path = scenario_path;
            options.config_path = effective_config(config_path);
            options.seed = seed;
            options.out_dir = out_dir;
            options.dump_frames = true;
            options.step_cap = preview_steps;
            const RunRecord record = run_scenario(options);
            std::cout << "rendered " << record.steps.size() << " frames to " << out_dir
                      << "/frames\n";
            return 0;
        }

        if (val->parsed()) {
            RunConfig config;
            const std::string path = effective_config(config_path);
            if (!path.empty()) config = RunConfig::load(path);
            auto palette = config.palette_path.empty() ? ClassPalette::defaults()
                                                       : ClassPalette::load(config.palette_path);
            const Scenario sc = Scenario::load(scenario_path, *palette);
            std::cout << "scenario " << sc.name << ": " << sc.surfaces.size() << " surfaces, "
                      << sc.obstacles.size() << " obstacles, " << sc.lights.size() << " lights, "
                      << sc.crossings.size() << " crossings, step_cap " << sc.step_cap << '\n';
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
