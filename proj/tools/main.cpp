// p2pa command-line front end. Exit codes: 0 solved, 1 input error,
// 2 singular or degenerate, 3 infeasible.

#include <p2pa/p2pa.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "scene.hpp"

namespace {

using p2pa_cli::InputError;
using p2pa_cli::Json;
using p2pa_cli::Scene;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitSingular = 2;
constexpr int kExitInfeasible = 3;

/// Library failure; carries the exit code its status maps to.
struct Failure {
    int exit_code;
    std::string message;
};

void check(p2pa_status status) {
    if (status == P2PA_OK) return;
    std::string message = p2pa_status_string(status);
    if (const std::string detail = p2pa_last_error(); !detail.empty()) message += ": " + detail;
    switch (status) {
        case P2PA_ERR_INVALID_ARGUMENT:
        case P2PA_ERR_NEAR_ZERO_VECTOR:
        case P2PA_ERR_CONFIG_INVALID:
        case P2PA_ERR_IO:
        case P2PA_ERR_INTERNAL:
            throw Failure{kExitInput, message};
        default:
            throw Failure{kExitSingular, message};
    }
}

Scene load_scene(const std::string& path) {
    return p2pa_cli::scene_from_json(p2pa_cli::parse_json(p2pa_cli::read_file(path), path));
}

void print(const Json& j) { std::cout << j.dump(2) << '\n'; }

const char* multiplicity_name(p2pa_multiplicity m) {
    switch (m) {
        case P2PA_MULTIPLICITY_ONE: return "One";
        case P2PA_MULTIPLICITY_TWO: return "Two";
        default: return "Infinite";
    }
}

std::string verdict(const p2pa_classification& c) {
    std::string v = multiplicity_name(c.multiplicity);
    if (c.multiplicity == P2PA_MULTIPLICITY_INFINITE) {
        v += std::string("(") + p2pa_singular_case_string(c.singular_case) + ")";
    }
    return v;
}

std::string reason(const p2pa_classification& c) {
    switch (c.multiplicity) {
        case P2PA_MULTIPLICITY_INFINITE:
            return std::string("singular: ") + p2pa_singular_case_string(c.singular_case);
        case P2PA_MULTIPLICITY_TWO:
            return "conditions (a) and (b) both fail";
        default:
            if (c.s == 0.0) return "condition (a): s=0";
            if (c.cone_condition) return "condition (a): max(|s1|,|s2|) >= |s|";
            return "condition (b): camera on plane L";
    }
}

Json classification_json(const p2pa_classification& c) {
    return Json{{"multiplicity", multiplicity_name(c.multiplicity)},
                {"singular_case", p2pa_singular_case_string(c.singular_case)},
                {"verdict", verdict(c)},
                {"reason", reason(c)},
                {"s", p2pa_cli::slope_json(c.s)},
                {"s1", p2pa_cli::slope_json(c.s1)},
                {"s2", p2pa_cli::slope_json(c.s2)},
                {"cone_condition", c.cone_condition != 0},
                {"on_plane_l", c.on_plane_l != 0}};
}

const p2pa_observation& require_observation(const Scene& scene) {
    if (!scene.observation) throw InputError("/observation: missing field");
    return *scene.observation;
}

const p2pa_cli::Camera& require_camera(const Scene& scene) {
    if (!scene.camera) throw InputError("/camera: missing field");
    return *scene.camera;
}

struct SolveArgs {
    std::string scene;
    bool unlabeled = false;
    std::optional<double> singular_tol;
};

int cmd_solve(const SolveArgs& args) {
    const Scene scene = load_scene(args.scene);
    const p2pa_observation& obs = require_observation(scene);

    p2pa_solve_options options;
    p2pa_solve_options_default(&options);
    if (args.singular_tol) options.singular_tol = *args.singular_tol;

    p2pa_solution sol = nullptr;
    check(p2pa_solve(&obs, &scene.landmarks, &options, args.unlabeled ? 1 : 0, &sol));
    const std::unique_ptr<p2pa_solution_t, void (*)(p2pa_solution)> owner(sol,
                                                                           p2pa_solution_free);

    p2pa_angles angles;
    check(p2pa_reduce_to_angles(&obs, &angles));

    const p2pa_singular_case singular = p2pa_solution_singular_case(sol);
    const std::size_t count = p2pa_solution_pose_count(sol);
    Json poses = Json::array();
    for (std::size_t k = 0; k < count; ++k) {
        p2pa_pose pose;
        double residual = 0;
        check(p2pa_solution_pose(sol, k, &pose, &residual));
        poses.push_back({{"position", p2pa_cli::vec_json(pose.position)},
                         {"rotation", p2pa_cli::rotation_json(pose.rotation)},
                         {"residual", residual}});
    }

    const char* outcome = singular != P2PA_SINGULAR_NONE ? "singular"
                          : count == 0                   ? "infeasible"
                                                         : "solved";
    Json report{{"outcome", outcome},
                {"labeling", args.unlabeled ? "unlabeled" : "labeled"},
                {"singular_case", p2pa_singular_case_string(singular)},
                {"angles", {{"rho1", angles.rho1}, {"rho2", angles.rho2}, {"beta", angles.beta}}},
                {"poses", poses}};
    if (scene.camera) {
        p2pa_classification c;
        if (p2pa_classify(&scene.landmarks, scene.camera->position, &c) == P2PA_OK) {
            report["ground_truth"] = classification_json(c);
        } else {
            report["ground_truth"] = {{"error", p2pa_last_error()}};
        }
    }
    print(report);

    if (singular != P2PA_SINGULAR_NONE) {
        std::cerr << "singular: " << p2pa_singular_case_string(singular) << '\n';
        return kExitSingular;
    }
    if (count == 0) {
        std::cerr << "infeasible: no pose reproduces the observation\n";
        return kExitInfeasible;
    }
    std::cerr << "solved: " << count << (count == 1 ? " pose\n" : " poses\n");
    return kExitOk;
}

int cmd_classify(const std::string& path) {
    const Scene scene = load_scene(path);
    const p2pa_cli::Camera& camera = require_camera(scene);
    p2pa_classification c;
    check(p2pa_classify(&scene.landmarks, camera.position, &c));
    print(classification_json(c));
    std::cerr << verdict(c) << '\n';
    return kExitOk;
}

struct SynthArgs {
    std::string scene;
    std::uint64_t seed = 0;
    double cone_deg = 0.0;
    double accel_noise = 0.0;
    std::string out;
};

int cmd_synth(const SynthArgs& args) {
    Scene scene = load_scene(args.scene);
    require_camera(scene);
    p2pa_cli::Camera& camera = *scene.camera;

    p2pa_pose pose;
    if (camera.rotation) {
        pose.position = camera.position;
        std::copy(camera.rotation->begin(), camera.rotation->end(), pose.rotation);
    } else {
        check(p2pa_pose_facing_midpoint(camera.position, &scene.landmarks, &pose));
        camera.rotation.emplace();
        std::copy(pose.rotation, pose.rotation + 9, camera.rotation->begin());
    }

    const bool noisy = args.cone_deg != 0.0 || args.accel_noise != 0.0;
    const p2pa_noise_model noise{args.cone_deg * std::numbers::pi / 180.0, args.accel_noise,
                                 args.seed};
    p2pa_observation obs;
    check(p2pa_synthesize(&pose, &scene.landmarks, noisy ? &noise : nullptr, &obs));
    scene.observation = obs;

    const std::string text = p2pa_cli::scene_to_json(scene).dump(2) + "\n";
    if (args.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream os(args.out, std::ios::binary);
        if (!(os << text)) throw InputError(args.out + ": cannot write file");
    }
    return kExitOk;
}

struct SimulateArgs {
    std::string config;
    std::string out;
    std::optional<unsigned> threads;
    double threshold = 20.0;
};

int cmd_simulate(const SimulateArgs& args) {
    p2pa_sweep_config config = p2pa_cli::sweep_config_from_json(
        p2pa_cli::parse_json(p2pa_cli::read_file(args.config), args.config));
    if (args.threads) config.threads = *args.threads;

    p2pa_sweep sweep = nullptr;
    check(p2pa_sweep_run(&config, &sweep));
    const std::unique_ptr<p2pa_sweep_t, void (*)(p2pa_sweep)> owner(sweep, p2pa_sweep_free);
    check(p2pa_sweep_write_csv(sweep, args.out.c_str()));

    p2pa_sweep_summary summary;
    check(p2pa_sweep_summarize(sweep, args.threshold, &summary));
    std::cout.precision(17);
    std::cout << "rows: " << p2pa_sweep_row_count(sweep) << '\n'
              << "min_rms_mm: " << summary.min_rms << '\n'
              << "min_rms_altitude_mm: " << summary.min_rms_altitude << '\n'
              << "first_altitude_below_" << args.threshold << "mm: ";
    if (summary.has_first_below) {
        std::cout << summary.first_below_altitude << '\n';
    } else {
        std::cout << "none\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Camera pose from two landmarks and a gravity vector"};
    app.set_version_flag("--version", p2pa_version());
    app.require_subcommand(1);

    SolveArgs solve;
    auto* solve_cmd = app.add_subcommand("solve", "Recover camera poses from a scene observation");
    solve_cmd->add_option("scene", solve.scene, "Scene file (JSON)")->required();
    solve_cmd->add_flag("--unlabeled", solve.unlabeled, "Try both landmark labelings");
    solve_cmd->add_option("--singular-tol", solve.singular_tol,
                          "Angle tolerance for singular cases, rad (default 1e-9)")
        ->check(CLI::NonNegativeNumber);

    std::string classify_scene;
    auto* classify_cmd =
        app.add_subcommand("classify", "Count the poses consistent with a ground-truth camera");
    classify_cmd->add_option("scene", classify_scene, "Scene file with camera")->required();

    SynthArgs synth;
    auto* synth_cmd = app.add_subcommand("synth", "Fill in the observation from the camera pose");
    synth_cmd->add_option("scene", synth.scene, "Scene file with camera")->required();
    synth_cmd->add_option("--noise-seed", synth.seed, "Noise seed");
    synth_cmd->add_option("--cone-deg", synth.cone_deg, "Ray noise cap radius, degrees");
    synth_cmd->add_option("--accel-noise", synth.accel_noise,
                          "Accelerometer noise half-width per axis, g");
    synth_cmd->add_option("-o,--out", synth.out, "Output scene file (default stdout)");

    SimulateArgs simulate;
    auto* simulate_cmd = app.add_subcommand("simulate", "Run a noisy altitude sweep");
    simulate_cmd->add_option("config", simulate.config, "Sweep config (JSON)")->required();
    simulate_cmd->add_option("--out", simulate.out, "CSV output path")->required();
    simulate_cmd->add_option("--threads", simulate.threads, "Worker threads (0 = all cores)");
    simulate_cmd->add_option("--threshold", simulate.threshold,
                             "RMS threshold for the summary, mm")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInput;
    }

    try {
        if (*solve_cmd) return cmd_solve(solve);
        if (*classify_cmd) return cmd_classify(classify_scene);
        if (*synth_cmd) return cmd_synth(synth);
        if (*simulate_cmd) return cmd_simulate(simulate);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const Failure& f) {
        std::cerr << "error: " << f.message << '\n';
        return f.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitInput;
}
