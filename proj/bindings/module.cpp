#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pathguide/controller.hpp"
#include "pathguide/errors.hpp"
#include "pathguide/lights.hpp"
#include "pathguide/palette.hpp"
#include "pathguide/runner.hpp"
#include "pathguide/sim.hpp"
#include "pathguide/walkable.hpp"

namespace py = pybind11;
using namespace pathguide;

namespace {

RgbImage image_from_array(const py::array_t<std::uint8_t>& arr) {
    if (arr.ndim() != 3 || arr.shape(2) != 3) {
        throw py::value_error("expected an HxWx3 uint8 array");
    }
    RgbImage image(static_cast<int>(arr.shape(1)), static_cast<int>(arr.shape(0)));
    auto view = arr.unchecked<3>();
    for (py::ssize_t y = 0; y < arr.shape(0); ++y) {
        for (py::ssize_t x = 0; x < arr.shape(1); ++x) {
            image.set(static_cast<int>(x), static_cast<int>(y), view(y, x, 0), view(y, x, 1),
                      view(y, x, 2));
        }
    }
    return image;
}

py::array_t<std::uint8_t> image_to_array(const RgbImage& image) {
    py::array_t<std::uint8_t> arr({image.height, image.width, 3});
    std::copy(image.pixels.begin(), image.pixels.end(), arr.mutable_data());
    return arr;
}

BoolGrid grid_from_array(const py::array_t<bool>& arr) {
    if (arr.ndim() != 2) throw py::value_error("expected an HxW bool array");
    BoolGrid grid(static_cast<int>(arr.shape(1)), static_cast<int>(arr.shape(0)));
    auto view = arr.unchecked<2>();
    for (py::ssize_t y = 0; y < arr.shape(0); ++y) {
        for (py::ssize_t x = 0; x < arr.shape(1); ++x) {
            grid.set(static_cast<int>(x), static_cast<int>(y), view(y, x));
        }
    }
    return grid;
}

py::array_t<bool> grid_to_array(const BoolGrid& grid) {
    py::array_t<bool> arr({grid.height, grid.width});
    auto view = arr.mutable_unchecked<2>();
    for (int y = 0; y < grid.height; ++y) {
        for (int x = 0; x < grid.width; ++x) view(y, x) = grid.at(x, y);
    }
    return arr;
}

py::array_t<std::uint8_t> classes_to_array(const SegmentationFrame& frame) {
    py::array_t<std::uint8_t> arr({frame.height, frame.width});
    std::copy(frame.classes.begin(), frame.classes.end(), arr.mutable_data());
    return arr;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Walkable-path guidance engine: mask analysis, light voting, drone control, simulation";

    py::register_exception<InvalidInput>(m, "InvalidInputError", PyExc_ValueError);
    py::register_exception<InvalidPalette>(m, "InvalidPaletteError", PyExc_ValueError);
    py::register_exception<EmptyRegion>(m, "EmptyRegionError", PyExc_ValueError);

    py::class_<PaletteEntry>(m, "PaletteEntry")
        .def(py::init([](int id, const std::string& name, std::tuple<int, int, int> color,
                         bool walkable, bool traffic_light) {
                 PaletteEntry e;
                 e.class_id = id;
                 e.name = name;
                 e.color = {static_cast<std::uint8_t>(std::get<0>(color)),
                            static_cast<std::uint8_t>(std::get<1>(color)),
                            static_cast<std::uint8_t>(std::get<2>(color))};
                 e.walkable = walkable;
                 e.traffic_light = traffic_light;
                 return e;
             }),
             py::arg("class_id"), py::arg("name"), py::arg("color"), py::arg("walkable") = false,
             py::arg("traffic_light") = false)
        .def_readonly("class_id", &PaletteEntry::class_id)
        .def_readonly("name", &PaletteEntry::name)
        .def_readonly("walkable", &PaletteEntry::walkable)
        .def_readonly("traffic_light", &PaletteEntry::traffic_light)
        .def_property_readonly("color",
                               [](const PaletteEntry& e) {
                                   return py::make_tuple(e.color.r, e.color.g, e.color.b);
                               })
        .def("__repr__", [](const PaletteEntry& e) {
            return "<PaletteEntry " + std::to_string(e.class_id) + " " + e.name + ">";
        });

    py::class_<ClassPalette, std::shared_ptr<ClassPalette>>(m, "ClassPalette")
        .def(py::init<std::vector<PaletteEntry>>())
        .def_static("defaults",
                    []() { return std::const_pointer_cast<ClassPalette>(ClassPalette::defaults()); })
        .def_static("load",
                    [](const std::string& path) {
                        return std::const_pointer_cast<ClassPalette>(ClassPalette::load(path));
                    })
        .def("save", &ClassPalette::save)
        .def("entries", &ClassPalette::entries)
        .def("find_by_name", &ClassPalette::find_by_name)
        .def("__len__", &ClassPalette::size);

    py::class_<SegmentationFrame>(m, "SegmentationFrame")
        .def_readonly("width", &SegmentationFrame::width)
        .def_readonly("height", &SegmentationFrame::height)
        .def_readonly("frame_index", &SegmentationFrame::frame_index)
        .def_property_readonly("classes", &classes_to_array);

    m.def(
        "decode_mask",
        [](const py::array_t<std::uint8_t>& image, std::shared_ptr<ClassPalette> palette,
           int tolerance, std::int64_t frame_index) {
            return decode_mask(image_from_array(image), palette, tolerance, frame_index);
        },
        py::arg("image"), py::arg("palette"), py::arg("tolerance") = 0, py::arg("frame_index") = 0);
    m.def("frame_from_classes",
          [](const py::array_t<std::uint8_t>& classes, std::shared_ptr<ClassPalette> palette,
             std::int64_t frame_index) {
              if (classes.ndim() != 2) throw py::value_error("expected an HxW uint8 array");
              SegmentationFrame frame =
                  make_frame(static_cast<int>(classes.shape(1)),
                             static_cast<int>(classes.shape(0)), palette, 0, frame_index);
              std::copy(classes.data(), classes.data() + classes.size(), frame.classes.begin());
              return frame;
          },
          py::arg("classes"), py::arg("palette"), py::arg("frame_index") = 0);
    m.def("render_colors",
          [](const SegmentationFrame& frame) { return image_to_array(render_colors(frame)); });
    m.def("walkable_mask",
          [](const SegmentationFrame& frame) { return grid_to_array(walkable_mask(frame)); });
    m.def("traffic_light_mask",
          [](const SegmentationFrame& frame) { return grid_to_array(traffic_light_mask(frame)); });

    m.def("largest_component", [](const py::array_t<bool>& grid) {
        const ComponentResult r = largest_component(grid_from_array(grid));
        return py::make_tuple(grid_to_array(r.mask), r.pixel_count, r.present);
    });
    m.def("estimate_centroid", [](const py::array_t<bool>& grid) {
        const PixelCentroid c = estimate_centroid(grid_from_array(grid));
        return py::make_tuple(c.x, c.y);
    });
    m.def("partition_confidences", [](const py::array_t<bool>& grid) {
        const BandConfidences c = partition_confidences(grid_from_array(grid));
        return py::make_tuple(c.left, c.middle, c.right);
    });
    m.def("binary_conversion", &binary_conversion, py::arg("conf"), py::arg("theta_conf"));

    py::class_<WalkableAnalysis>(m, "WalkableAnalysis")
        .def_readonly("present", &WalkableAnalysis::present)
        .def_readonly("pixel_count", &WalkableAnalysis::pixel_count)
        .def_property_readonly("centroid",
                               [](const WalkableAnalysis& a) -> py::object {
                                   if (!a.centroid) return py::none();
                                   return py::make_tuple(a.centroid->x, a.centroid->y);
                               })
        .def_property_readonly("confidences",
                               [](const WalkableAnalysis& a) {
                                   return py::make_tuple(a.confidences.left, a.confidences.middle,
                                                         a.confidences.right);
                               })
        .def_property_readonly("codes",
                               [](const WalkableAnalysis& a) {
                                   return py::make_tuple(a.codes.left, a.codes.middle,
                                                         a.codes.right);
                               })
        .def_property_readonly(
            "component_mask",
            [](const WalkableAnalysis& a) { return grid_to_array(a.component_mask); });

    m.def("analyze", &analyze, py::arg("frame"), py::arg("theta_conf") = 0.30);

    py::enum_<LightClass>(m, "LightClass")
        .value("pedestrian_red", LightClass::pedestrian_red)
        .value("pedestrian_green", LightClass::pedestrian_green)
        .value("vehicle_red", LightClass::vehicle_red)
        .value("vehicle_green", LightClass::vehicle_green)
        .value("others", LightClass::others);

    py::enum_<VerdictColor>(m, "VerdictColor")
        .value("none", VerdictColor::none)
        .value("red", VerdictColor::red)
        .value("green", VerdictColor::green);

    py::class_<LightPatch>(m, "LightPatch")
        .def_readonly("x_min", &LightPatch::x_min)
        .def_readonly("y_min", &LightPatch::y_min)
        .def_readonly("x_max", &LightPatch::x_max)
        .def_readonly("y_max", &LightPatch::y_max)
        .def_readonly("pixel_count", &LightPatch::pixel_count)
        .def("width", &LightPatch::width)
        .def("height", &LightPatch::height);

    m.def("extract_patches", &extract_patches);

    py::class_<LightVerdict>(m, "LightVerdict")
        .def(py::init<>())
        .def_readonly("color", &LightVerdict::color)
        .def_property_readonly("buffer", [](const LightVerdict& v) {
            return std::vector<LightClass>(v.buffer.begin(), v.buffer.end());
        });

    m.def("update_verdict", &update_verdict, py::arg("verdict"), py::arg("prediction"));
    m.def("reset_verdict", &reset_verdict, py::arg("verdict"));

    py::class_<LightTracker>(m, "LightTracker")
        .def(py::init<int>(), py::arg("reset_after_frames") = 15)
        .def("observe", &LightTracker::observe, py::arg("prediction"))
        .def_property_readonly("verdict", &LightTracker::verdict)
        .def("reset", &LightTracker::reset);

    py::class_<VelocityCommand>(m, "VelocityCommand")
        .def_readonly("v_lr", &VelocityCommand::v_lr)
        .def_readonly("v_f", &VelocityCommand::v_f)
        .def_readonly("v_ud", &VelocityCommand::v_ud)
        .def_readonly("v_yaw", &VelocityCommand::v_yaw)
        .def("rc_line", &VelocityCommand::rc_line)
        .def("__repr__", [](const VelocityCommand& c) { return "<" + c.rc_line() + ">"; });

    py::class_<ControllerConfig>(m, "ControllerConfig")
        .def(py::init<>())
        .def_readwrite("h_target", &ControllerConfig::h_target)
        .def_readwrite("v_ud_base", &ControllerConfig::v_ud_base)
        .def_readwrite("v_f0", &ControllerConfig::v_f0)
        .def_readwrite("speedup", &ControllerConfig::speedup)
        .def_readwrite("theta_conf", &ControllerConfig::theta_conf)
        .def_readwrite("lowpass_alpha", &ControllerConfig::lowpass_alpha)
        .def_readwrite("highpass_deadband", &ControllerConfig::highpass_deadband)
        .def_readwrite("no_light_reset_frames", &ControllerConfig::no_light_reset_frames)
        .def_readwrite("search_yaw", &ControllerConfig::search_yaw)
        .def("get_yaw",
             [](const ControllerConfig& c, int l, int mth, int r) {
                 return c.yaw_table.by_code[l * 4 + mth * 2 + r];
             })
        .def("set_yaw", [](ControllerConfig& c, int l, int mth, int r, int v) {
            c.yaw_table.by_code[l * 4 + mth * 2 + r] = v;
        });

    py::class_<VoiceEvent>(m, "VoiceEvent")
        .def_readonly("text", &VoiceEvent::text)
        .def_readonly("frame_index", &VoiceEvent::frame_index);

    py::class_<StepResult>(m, "StepResult")
        .def_readonly("command", &StepResult::command)
        .def_property_readonly("voice", [](const StepResult& r) -> py::object {
            if (!r.voice) return py::none();
            return py::cast(*r.voice);
        });

    py::class_<Controller>(m, "Controller")
        .def(py::init<ControllerConfig>())
        .def("step", &Controller::step, py::arg("analysis"), py::arg("color"),
             py::arg("altitude"), py::arg("frame_index") = 0)
        .def("reset_state", &Controller::reset_state);

    m.def("altitude_hold", &altitude_hold);
    m.def("lateral_velocity", &lateral_velocity);

    py::class_<Metrics>(m, "Metrics")
        .def_readonly("rms_deviation", &Metrics::rms_deviation)
        .def_readonly("max_deviation", &Metrics::max_deviation)
        .def_readonly("walkable_fraction", &Metrics::walkable_fraction)
        .def_readonly("red_light_violations", &Metrics::red_light_violations)
        .def_readonly("obstacle_hits", &Metrics::obstacle_hits)
        .def_readonly("goal_reached", &Metrics::goal_reached)
        .def_readonly("steps_to_goal", &Metrics::steps_to_goal)
        .def_readonly("total_steps", &Metrics::total_steps);

    py::class_<RunRecord>(m, "RunRecord")
        .def_readonly("scenario_name", &RunRecord::scenario_name)
        .def_readonly("seed", &RunRecord::seed)
        .def_readonly("metrics", &RunRecord::metrics)
        .def_property_readonly("steps",
                               [](const RunRecord& r) { return r.steps.size(); })
        .def("log_text", [](const RunRecord& r) { return run_log_text(r); });

    m.def(
        "run_scenario",
        [](const std::string& scenario_path, const std::string& config_path,
           std::optional<std::uint32_t> seed, const std::string& out_dir,
           std::optional<double> noise, std::optional<int> step_cap) {
            RunOptions options;
            options.scenario_path = scenario_path;
            options.config_path = config_path;
            options.seed = seed;
            options.out_dir = out_dir;
            options.noise = noise;
            options.step_cap = step_cap;
            return run_scenario(options);
        },
        py::arg("scenario_path"), py::arg("config_path") = "", py::arg("seed") = py::none(),
        py::arg("out_dir") = "", py::arg("noise") = py::none(), py::arg("step_cap") = py::none());
}
