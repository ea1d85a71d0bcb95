#include "pathguide/config.hpp"

#include <fstream>
#include <sstream>

#include "pathguide/errors.hpp"

namespace pathguide {

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path);

    RunConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        std::string key;
        if (!(ss >> key)) continue;

        auto want = [&](auto& value, const char* what) {
            if (!(ss >> value)) throw ParseError(path, line_no, std::string(what));
        };

        if (key == "h_target") want(cfg.controller.h_target, "h_target expects meters");
        else if (key == "v_ud_base") want(cfg.controller.v_ud_base, "v_ud_base expects RC units");
        else if (key == "v_f0") want(cfg.controller.v_f0, "v_f0 expects RC units");
        else if (key == "speedup") want(cfg.controller.speedup, "speedup expects RC units");
        else if (key == "theta_conf") want(cfg.controller.theta_conf, "theta_conf expects [0,1]");
        else if (key == "lowpass_alpha") want(cfg.controller.lowpass_alpha, "lowpass_alpha expects (0,1]");
        else if (key == "highpass_deadband")
            want(cfg.controller.highpass_deadband, "highpass_deadband expects pixels");
        else if (key == "no_light_reset_frames")
            want(cfg.controller.no_light_reset_frames, "no_light_reset_frames expects an integer");
        else if (key == "search_yaw") want(cfg.controller.search_yaw, "search_yaw expects RC units");
        else if (key == "yaw") {
            int l, m, r, value;
            if (!(ss >> l >> m >> r >> value) || l < 0 || l > 1 || m < 0 || m > 1 || r < 0 || r > 1)
                throw ParseError(path, line_no, "yaw expects `l m r value` with bits 0/1");
            cfg.controller.yaw_table.by_code[l * 4 + m * 2 + r] = value;
        } else if (key == "k_lin") want(cfg.calib.k_lin, "k_lin expects m/s per RC unit");
        else if (key == "k_yaw") want(cfg.calib.k_yaw, "k_yaw expects rad/s per RC unit");
        else if (key == "k_vert") want(cfg.calib.k_vert, "k_vert expects m/s per RC unit");
        else if (key == "dt") want(cfg.dt, "dt expects seconds");
        else if (key == "classifier_noise") want(cfg.classifier_noise, "classifier_noise expects [0,1]");
        else if (key == "decode_tolerance") want(cfg.decode_tolerance, "decode_tolerance expects an integer");
        else if (key == "palette") want(cfg.palette_path, "palette expects a path");
        else throw ParseError(path, line_no, "unknown config key `" + key + "`");
    }

    try {
        cfg.validate();
    } catch (const InvalidInput& e) {
        throw ParseError(path, line_no, e.what());
    }
    return cfg;
}

void RunConfig::validate() const {
    controller.validate();
    if (!(dt > 0.0)) throw InvalidInput("config: dt must be > 0");
    if (classifier_noise < 0.0 || classifier_noise > 1.0)
        throw InvalidInput("config: classifier_noise outside [0,1]");
    if (decode_tolerance < 0) throw InvalidInput("config: decode_tolerance must be >= 0");
}

}  // namespace pathguide
