#pragma once

#include <optional>
#include <string>

#include "pathguide/controller.hpp"
#include "pathguide/sim.hpp"

namespace pathguide {

// Everything the harness reads from a config file; every key is optional and
// falls back to the documented default.
struct RunConfig {
    ControllerConfig controller;
    SimCalib calib;
    double dt = 1.0 / 11.7;        // seconds per frame
    double classifier_noise = 0.0; // oracle misclassification probability
    int decode_tolerance = 0;      // per-channel color tolerance for replay decode
    std::string palette_path;      // empty -> built-in default palette

    static RunConfig load(const std::string& path);  // line-oriented `key value...`
    void validate() const;
};

}  // namespace pathguide
