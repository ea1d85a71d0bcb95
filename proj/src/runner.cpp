#include "pathguide/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "pathguide/errors.hpp"

namespace fs = std::filesystem;

namespace pathguide {

namespace {

std::shared_ptr<const ClassPalette> palette_for(const RunConfig& config) {
    if (config.palette_path.empty()) return ClassPalette::defaults();
    return ClassPalette::load(config.palette_path);
}

// Colorizes just the patch region; the oracle ignores the pixels but the
// classifier contract passes them through.
RgbImage colorize_patch(const SegmentationFrame& frame, const LightPatch& patch) {
    RgbImage out(patch.width(), patch.height());
    const auto& entries = frame.palette->entries();
    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
            const Rgb c = entries[frame.at(patch.x_min + x, patch.y_min + y)].color;
            out.set(x, y, c.r, c.g, c.b);
        }
    }
    return out;
}

nlohmann::ordered_json step_to_json(const StepRecord& rec) {
    nlohmann::ordered_json j;
    j["frame"] = rec.frame_index;
    j["t"] = rec.time;
    j["x"] = rec.x;
    j["y"] = rec.y;
    j["heading"] = rec.heading;
    j["h"] = rec.h;
    j["cmd"] = {rec.command.v_lr, rec.command.v_f, rec.command.v_ud, rec.command.v_yaw};
    j["color"] = to_string(rec.color);
    j["present"] = rec.present;
    if (rec.present) {
        j["cx"] = rec.centroid_x;
        j["cy"] = rec.centroid_y;
    }
    j["codes"] = {rec.codes.left, rec.codes.middle, rec.codes.right};
    j["pixels"] = rec.pixel_count;
    j["patches"] = rec.light_patches;
    if (rec.voice) j["event"] = rec.voice->text;
    return j;
}

}  // namespace

RunRecord run_scenario(const RunOptions& options) {
    RunConfig config =
        options.config_path.empty() ? RunConfig{} : RunConfig::load(options.config_path);
    config.validate();
    auto palette = palette_for(config);
    Scenario scenario = Scenario::load(options.scenario_path, *palette);

    RunRecord record;
    record.scenario_name = scenario.name;
    record.seed = options.seed.value_or(scenario.seed);
    scenario.seed = record.seed;  // pixel noise streams key off the run seed
    if (options.step_cap) scenario.step_cap = *options.step_cap;
    record.phase_jitter = scenario.draw_phase_jitter(record.seed);

    Renderer renderer(scenario, palette);
    const double noise = options.noise.value_or(config.classifier_noise);
    OracleClassifier oracle(scenario, renderer, noise, record.seed);
    LightTracker tracker(config.controller.no_light_reset_frames);
    Controller controller(config.controller);

    fs::path frames_dir;
    if (options.dump_frames) {
        if (options.out_dir.empty()) throw InvalidInput("dump_frames requires an out dir");
        frames_dir = fs::path(options.out_dir) / "frames";
        fs::create_directories(frames_dir);
    }

    WorldState world = initial_world(scenario, record.phase_jitter);
    record.steps.reserve(scenario.step_cap);

    for (int step = 0; step < scenario.step_cap; ++step) {
        const SegmentationFrame frame = renderer.render(world);
        const WalkableAnalysis analysis = analyze(frame, config.controller.theta_conf);

        const auto patches = extract_patches(frame);
        std::optional<LightClass> prediction;
        if (!patches.empty()) {
            oracle.bind(world, record.phase_jitter);
            prediction = classify_patch(oracle, colorize_patch(frame, patches.front()),
                                        patches.front());
        }
        const LightVerdict& verdict = tracker.observe(prediction);

        const StepResult result =
            controller.step(analysis, verdict.color, world.drone.h, world.step_index);

        StepRecord rec;
        rec.frame_index = world.step_index;
        rec.time = world.drone.time;
        rec.x = world.drone.x;
        rec.y = world.drone.y;
        rec.heading = world.drone.heading;
        rec.h = world.drone.h;
        rec.command = result.command;
        rec.color = verdict.color;
        rec.voice = result.voice;
        rec.present = analysis.present;
        if (analysis.centroid) {
            rec.centroid_x = analysis.centroid->x;
            rec.centroid_y = analysis.centroid->y;
        }
        rec.codes = analysis.codes;
        rec.pixel_count = analysis.pixel_count;
        rec.light_patches = static_cast<int>(patches.size());
        record.steps.push_back(rec);

        if (options.dump_frames) {
            std::ostringstream name;
            name << "frame_" << std::setw(6) << std::setfill('0') << step << ".png";
            write_png((frames_dir / name.str()).string(), render_colors(frame));
        }

        if (!scenario.goal.empty() &&
            point_in_polygon({world.drone.x, world.drone.y}, scenario.goal)) {
            break;
        }
        world = step_kinematics(world, scenario, result.command, config.dt, config.calib,
                                record.phase_jitter);
    }

    record.metrics = score(record.steps, scenario, *palette, record.phase_jitter);
    if (!options.out_dir.empty()) write_run_outputs(record, options.out_dir);
    return record;
}

std::vector<RunRecord> run_sweep(const RunOptions& options, int count, int jobs) {
    if (count <= 0) throw InvalidInput("sweep count must be >= 1");
    RunConfig config =
        options.config_path.empty() ? RunConfig{} : RunConfig::load(options.config_path);
    auto palette = palette_for(config);
    const Scenario scenario = Scenario::load(options.scenario_path, *palette);
    const std::uint32_t base_seed = options.seed.value_or(scenario.seed);

    auto run_one = [&options](std::uint32_t seed) {
        RunOptions opts = options;
        opts.seed = seed;
        if (!options.out_dir.empty()) {
            opts.out_dir = (fs::path(options.out_dir) / ("seed_" + std::to_string(seed))).string();
        }
        return run_scenario(opts);
    };

    std::vector<RunRecord> results;
    results.reserve(count);
    if (jobs <= 1) {
        for (int i = 0; i < count; ++i) results.push_back(run_one(base_seed + i));
        return results;
    }
    std::vector<std::future<RunRecord>> futures;
    futures.reserve(count);
    for (int i = 0; i < count; ++i) {
        futures.push_back(std::async(std::launch::async, run_one, base_seed + i));
        if (static_cast<int>(futures.size()) == jobs || i == count - 1) {
            for (auto& f : futures) results.push_back(f.get());
            futures.clear();
        }
    }
    return results;
}

std::string run_log_text(const RunRecord& record) {
    std::string out;
    for (const auto& rec : record.steps) {
        out += step_to_json(rec).dump();
        out += '\n';
    }
    return out;
}

std::string metrics_json(const RunRecord& record) {
    nlohmann::ordered_json j;
    j["scenario"] = record.scenario_name;
    j["seed"] = record.seed;
    j["phase_jitter"] = record.phase_jitter;
    const Metrics& m = record.metrics;
    if (std::isnan(m.rms_deviation)) {
        j["rms_deviation"] = nullptr;
        j["max_deviation"] = nullptr;
    } else {
        j["rms_deviation"] = m.rms_deviation;
        j["max_deviation"] = m.max_deviation;
    }
    j["walkable_fraction"] = m.walkable_fraction;
    j["red_light_violations"] = m.red_light_violations;
    j["obstacle_hits"] = m.obstacle_hits;
    j["goal_reached"] = m.goal_reached;
    j["steps_to_goal"] = m.steps_to_goal;
    j["total_steps"] = m.total_steps;
    return j.dump(2) + "\n";
}

void write_run_outputs(const RunRecord& record, const std::string& out_dir) {
    fs::create_directories(out_dir);
    {
        std::ofstream log(fs::path(out_dir) / "run_log.jsonl", std::ios::binary);
        if (!log) throw IoError("cannot write run log in " + out_dir);
        log << run_log_text(record);
    }
    {
        std::ofstream metrics(fs::path(out_dir) / "metrics.json", std::ios::binary);
        if (!metrics) throw IoError("cannot write metrics in " + out_dir);
        metrics << metrics_json(record);
    }
}

namespace {

std::vector<fs::path> list_pngs(const std::string& frames_dir) {
    std::vector<fs::path> files;
    if (!fs::is_directory(frames_dir)) throw IoError("not a directory: " + frames_dir);
    for (const auto& entry : fs::directory_iterator(frames_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".png") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());  // lexicographic order defines frame order
    if (files.empty()) throw IoError("no .png frames in " + frames_dir);
    return files;
}

std::vector<std::optional<LightClass>> load_labels(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open labels file " + path);
    std::vector<std::optional<LightClass>> labels;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string token;
        if (!(ss >> token)) continue;
        if (token == "none") {
            labels.push_back(std::nullopt);
        } else if (auto cls = light_class_from_string(token)) {
            labels.push_back(*cls);
        } else {
            throw ParseError(path, line_no, "unknown label `" + token + "`");
        }
    }
    return labels;
}

}  // namespace

ReplayResult replay(const std::string& frames_dir, const std::string& labels_path,
                    const RunConfig& config) {
    config.validate();
    auto palette = palette_for(config);
    const auto files = list_pngs(frames_dir);
    const auto labels = load_labels(labels_path);
    if (labels.size() != files.size()) {
        throw InvalidInput("replay: " + std::to_string(files.size()) + " frames but " +
                           std::to_string(labels.size()) + " labels");
    }

    ReplayResult result;
    LightTracker tracker(config.controller.no_light_reset_frames);
    Controller controller(config.controller);
    // Recorded streams carry no altitude, so replay assumes the drone holds the
    // target height.
    const double altitude = config.controller.h_target;

    for (std::size_t i = 0; i < files.size(); ++i) {
        const RgbImage image = read_png(files[i].string());
        DecodeStats stats;
        const SegmentationFrame frame = decode_mask(image, palette, config.decode_tolerance,
                                                    static_cast<std::int64_t>(i), &stats);
        result.unknown_pixel_warnings += stats.unknown_pixels;

        const WalkableAnalysis analysis = analyze(frame, config.controller.theta_conf);
        const LightVerdict& verdict = tracker.observe(labels[i]);
        const StepResult step =
            controller.step(analysis, verdict.color, altitude, static_cast<std::int64_t>(i));
        result.rc_lines.push_back(step.command.rc_line());
        if (step.voice) result.events.push_back(*step.voice);
    }
    result.frames = static_cast<std::int64_t>(files.size());
    return result;
}

std::string BenchReport::text() const {
    std::ostringstream ss;
    ss << "frames " << measured_frames << "\n"
       << "warmup " << warmup_frames << "\n"
       << "median_ms " << median_ms << "\n"
       << "p95_ms " << p95_ms << "\n"
       << "mean_ms " << mean_ms << "\n";
    return ss.str();
}

BenchReport bench(const std::string& frames_dir, int iterations, int warmup,
                  const RunConfig& config) {
    if (iterations <= 0) throw InvalidInput("bench: iterations must be >= 1");
    if (warmup < 0) throw InvalidInput("bench: warmup must be >= 0");
    config.validate();
    auto palette = palette_for(config);

    const auto files = list_pngs(frames_dir);
    std::vector<RgbImage> images;
    images.reserve(files.size());
    for (const auto& f : files) images.push_back(read_png(f.string()));

    LightTracker tracker(config.controller.no_light_reset_frames);
    Controller controller(config.controller);
    const double altitude = config.controller.h_target;

    std::vector<double> samples;
    samples.reserve(iterations);
    for (int i = 0; i < warmup + iterations; ++i) {
        const RgbImage& image = images[i % images.size()];
        const auto t0 = std::chrono::steady_clock::now();

        const SegmentationFrame frame =
            decode_mask(image, palette, config.decode_tolerance, i);
        const WalkableAnalysis analysis = analyze(frame, config.controller.theta_conf);
        const auto patches = extract_patches(frame);
        // Stand-in for the out-of-scope CNN: a constant pedestrian prediction
        // keeps the voting path hot without model inference.
        std::optional<LightClass> prediction;
        if (!patches.empty()) prediction = LightClass::pedestrian_red;
        const LightVerdict& verdict = tracker.observe(prediction);
        volatile int sink =
            controller.step(analysis, verdict.color, altitude, i).command.v_lr;
        (void)sink;

        const auto t1 = std::chrono::steady_clock::now();
        if (i >= warmup) {
            samples.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
        }
    }

    std::sort(samples.begin(), samples.end());
    BenchReport report;
    report.warmup_frames = warmup;
    report.measured_frames = iterations;
    report.median_ms = samples[samples.size() / 2];
    report.p95_ms = samples[std::min(samples.size() - 1,
                                     static_cast<std::size_t>(samples.size() * 0.95))];
    double sum = 0.0;
    for (double s : samples) sum += s;
    report.mean_ms = sum / samples.size();
    return report;
}

}  // namespace pathguide
