#include "p2pa/p2pa.h"

#include <exception>
#include <fstream>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "classify.hpp"
#include "error.hpp"
#include "geom.hpp"
#include "sim.hpp"
#include "solver.hpp"

struct p2pa_solution_t {
    p2pa::SolveResult result;
};

struct p2pa_sweep_t {
    std::vector<p2pa::SweepRow> rows;
};

namespace {

thread_local std::string last_error;

p2pa_status status_of(p2pa::ErrorCode code) {
    using p2pa::ErrorCode;
    switch (code) {
        case ErrorCode::NearZeroVector: return P2PA_ERR_NEAR_ZERO_VECTOR;
        case ErrorCode::DegenerateVertex: return P2PA_ERR_DEGENERATE_VERTEX;
        case ErrorCode::ParallelInputs: return P2PA_ERR_PARALLEL_INPUTS;
        case ErrorCode::IncongruentPairs: return P2PA_ERR_INCONGRUENT_PAIRS;
        case ErrorCode::CameraAtLandmark: return P2PA_ERR_CAMERA_AT_LANDMARK;
        case ErrorCode::DegenerateDenominator: return P2PA_ERR_DEGENERATE_DENOMINATOR;
        case ErrorCode::BadIndexChoice: return P2PA_ERR_BAD_INDEX_CHOICE;
        case ErrorCode::SingularInput: return P2PA_ERR_SINGULAR_INPUT;
        case ErrorCode::NotCoaltitude: return P2PA_ERR_NOT_COALTITUDE;
        case ErrorCode::MixedHemisphere: return P2PA_ERR_MIXED_HEMISPHERE;
        case ErrorCode::NoIntersection: return P2PA_ERR_NO_INTERSECTION;
        case ErrorCode::TheoremViolation: return P2PA_ERR_THEOREM_VIOLATION;
        case ErrorCode::ConfigInvalid: return P2PA_ERR_CONFIG_INVALID;
        case ErrorCode::InvalidArgument: return P2PA_ERR_INVALID_ARGUMENT;
    }
    return P2PA_ERR_INTERNAL;
}

p2pa_status fail(p2pa_status status, const char* what) {
    last_error = what;
    return status;
}

// Runs `body`, translating exceptions into status codes.
template <class F>
p2pa_status guarded(F&& body) {
    try {
        body();
        last_error.clear();
        return P2PA_OK;
    } catch (const p2pa::Error& e) {
        return fail(status_of(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(P2PA_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(P2PA_ERR_INTERNAL, e.what());
    }
}

p2pa::Vec3 to_vec(const p2pa_vec3& v) { return {v.x, v.y, v.z}; }
p2pa_vec3 to_c(const p2pa::Vec3& v) { return {v.x(), v.y(), v.z()}; }

p2pa::LandmarkPair to_landmarks(const p2pa_landmarks& l) {
    return p2pa::LandmarkPair(to_vec(l.m1), to_vec(l.m2));
}

p2pa::ImageObservation to_observation(const p2pa_observation& o) {
    return {p2pa::UnitVec3::from_unit(to_vec(o.v1)), p2pa::UnitVec3::from_unit(to_vec(o.v2)),
            p2pa::UnitVec3::from_unit(to_vec(o.u))};
}

p2pa_observation to_c(const p2pa::ImageObservation& o) {
    return {to_c(o.v1.vec()), to_c(o.v2.vec()), to_c(o.u.vec())};
}

p2pa::CameraPose to_pose(const p2pa_pose& p) {
    p2pa::Mat3 m;
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) m(r, c) = p.rotation[3 * r + c];
    }
    return p2pa::CameraPose{to_vec(p.position), p2pa::Rotation::from_matrix(m, 1e-6)};
}

p2pa_pose to_c(const p2pa::CameraPose& p) {
    p2pa_pose out{};
    out.position = to_c(p.position);
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) out.rotation[3 * r + c] = p.rotation.matrix()(r, c);
    }
    return out;
}

p2pa_singular_case to_c(std::optional<p2pa::SingularCase> c) {
    if (!c) return P2PA_SINGULAR_NONE;
    switch (*c) {
        case p2pa::SingularCase::Colinear: return P2PA_SINGULAR_COLINEAR;
        case p2pa::SingularCase::VerticalLandmarkLine: return P2PA_SINGULAR_VERTICAL_LANDMARK_LINE;
        case p2pa::SingularCase::HorizontalCoplanar: return P2PA_SINGULAR_HORIZONTAL_COPLANAR;
    }
    return P2PA_SINGULAR_NONE;
}

p2pa::SolveOptions to_options(const p2pa_solve_options* o) {
    p2pa::SolveOptions out;
    if (o) {
        if (!(o->singular_tol >= 0.0) || !(o->round_trip_tol > 0.0)) {
            throw p2pa::Error(p2pa::ErrorCode::InvalidArgument, "tolerances must be positive");
        }
        out.singular_tol = o->singular_tol;
        out.round_trip_tol = o->round_trip_tol;
    }
    return out;
}

p2pa::NoiseModel to_noise(const p2pa_noise_model& n) {
    return p2pa::NoiseModel{n.direction_cone_radius, n.accel_noise_half_width, n.seed};
}

#define P2PA_REQUIRE(ptr)                                                          \
    do {                                                                           \
        if (!(ptr)) return fail(P2PA_ERR_INVALID_ARGUMENT, #ptr " must not be NULL"); \
    } while (0)

}  // namespace

extern "C" {

const char* p2pa_version(void) { return "1.0.0"; }

const char* p2pa_status_string(p2pa_status status) {
    switch (status) {
        case P2PA_OK: return "ok";
        case P2PA_ERR_INVALID_ARGUMENT: return "invalid argument";
        case P2PA_ERR_NEAR_ZERO_VECTOR: return "near-zero vector";
        case P2PA_ERR_DEGENERATE_VERTEX: return "degenerate vertex";
        case P2PA_ERR_PARALLEL_INPUTS: return "parallel inputs";
        case P2PA_ERR_INCONGRUENT_PAIRS: return "incongruent direction pairs";
        case P2PA_ERR_CAMERA_AT_LANDMARK: return "camera at landmark";
        case P2PA_ERR_DEGENERATE_DENOMINATOR: return "degenerate denominator";
        case P2PA_ERR_BAD_INDEX_CHOICE: return "bad index choice";
        case P2PA_ERR_SINGULAR_INPUT: return "singular input";
        case P2PA_ERR_NOT_COALTITUDE: return "landmarks not co-altitude";
        case P2PA_ERR_MIXED_HEMISPHERE: return "tilts in mixed hemispheres";
        case P2PA_ERR_NO_INTERSECTION: return "no circle intersection";
        case P2PA_ERR_THEOREM_VIOLATION: return "solution count bound violated";
        case P2PA_ERR_CONFIG_INVALID: return "invalid configuration";
        case P2PA_ERR_IO: return "i/o error";
        case P2PA_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* p2pa_singular_case_string(p2pa_singular_case c) {
    switch (c) {
        case P2PA_SINGULAR_NONE: return "none";
        case P2PA_SINGULAR_COLINEAR: return "colinear";
        case P2PA_SINGULAR_VERTICAL_LANDMARK_LINE: return "vertical-landmark-line";
        case P2PA_SINGULAR_HORIZONTAL_COPLANAR: return "horizontal-coplanar";
    }
    return "unknown";
}

const char* p2pa_last_error(void) { return last_error.c_str(); }

void p2pa_solve_options_default(p2pa_solve_options* options) {
    if (!options) return;
    const p2pa::SolveOptions d;
    options->singular_tol = d.singular_tol;
    options->round_trip_tol = d.round_trip_tol;
}

p2pa_status p2pa_pinhole_ray(double x, double y, double focal, p2pa_vec3* out) {
    P2PA_REQUIRE(out);
    return guarded([&] { *out = to_c(p2pa::pinhole_ray(x, y, focal).vec()); });
}

p2pa_status p2pa_spherical_ray(double theta, double phi, p2pa_vec3* out) {
    P2PA_REQUIRE(out);
    return guarded([&] { *out = to_c(p2pa::spherical_ray(theta, phi).vec()); });
}

p2pa_status p2pa_up_from_accelerometer(p2pa_vec3 accel, p2pa_vec3* out) {
    P2PA_REQUIRE(out);
    return guarded([&] { *out = to_c(p2pa::up_from_accelerometer(to_vec(accel)).vec()); });
}

p2pa_status p2pa_make_observation(p2pa_vec3 v1, p2pa_vec3 v2, p2pa_vec3 u,
                                  p2pa_observation* out) {
    P2PA_REQUIRE(out);
    return guarded([&] { *out = to_c(to_observation(p2pa_observation{v1, v2, u})); });
}

p2pa_status p2pa_reduce_to_angles(const p2pa_observation* obs, p2pa_angles* out) {
    P2PA_REQUIRE(obs);
    P2PA_REQUIRE(out);
    return guarded([&] {
        const p2pa::ObservationAngles a = p2pa::reduce_to_angles(to_observation(*obs));
        *out = {a.rho1, a.rho2, a.beta};
    });
}

p2pa_status p2pa_observation_from_angles(const p2pa_angles* angles, p2pa_observation* out) {
    P2PA_REQUIRE(angles);
    P2PA_REQUIRE(out);
    return guarded([&] {
        *out = to_c(p2pa::observation_from_angles({angles->rho1, angles->rho2, angles->beta}));
    });
}

p2pa_status p2pa_detect_singular(const p2pa_landmarks* landmarks, const p2pa_angles* angles,
                                 double angle_tol, p2pa_singular_case* out) {
    P2PA_REQUIRE(landmarks);
    P2PA_REQUIRE(angles);
    P2PA_REQUIRE(out);
    return guarded([&] {
        *out = to_c(p2pa::detect_singular(to_landmarks(*landmarks),
                                          {angles->rho1, angles->rho2, angles->beta}, angle_tol));
    });
}

p2pa_status p2pa_classify(const p2pa_landmarks* landmarks, p2pa_vec3 camera,
                          p2pa_classification* out) {
    P2PA_REQUIRE(landmarks);
    P2PA_REQUIRE(out);
    return guarded([&] {
        const p2pa::Classification c =
            p2pa::classify_ground_truth(to_landmarks(*landmarks), to_vec(camera));
        p2pa_classification r{};
        switch (c.multiplicity.kind) {
            case p2pa::MultiplicityKind::Infinite: r.multiplicity = P2PA_MULTIPLICITY_INFINITE; break;
            case p2pa::MultiplicityKind::One: r.multiplicity = P2PA_MULTIPLICITY_ONE; break;
            case p2pa::MultiplicityKind::Two: r.multiplicity = P2PA_MULTIPLICITY_TWO; break;
        }
        r.singular_case = to_c(c.multiplicity.singular);
        r.s = c.slopes.s;
        r.s1 = c.slopes.s1;
        r.s2 = c.slopes.s2;
        r.cone_condition = c.cone_condition ? 1 : 0;
        r.on_plane_l = c.on_plane_l ? 1 : 0;
        *out = r;
    });
}

p2pa_status p2pa_solve(const p2pa_observation* obs, const p2pa_landmarks* landmarks,
                       const p2pa_solve_options* options, int unlabeled, p2pa_solution* out) {
    P2PA_REQUIRE(obs);
    P2PA_REQUIRE(landmarks);
    P2PA_REQUIRE(out);
    return guarded([&] {
        const p2pa::ImageObservation o = to_observation(*obs);
        const p2pa::LandmarkPair l = to_landmarks(*landmarks);
        const p2pa::SolveOptions opts = to_options(options);
        auto handle = std::make_unique<p2pa_solution_t>();
        handle->result = unlabeled ? p2pa::solve_unlabeled(o, l, opts)
                                   : p2pa::solve_labeled(o, l, opts);
        *out = handle.release();
    });
}

p2pa_singular_case p2pa_solution_singular_case(p2pa_solution solution) {
    return solution ? to_c(solution->result.singular) : P2PA_SINGULAR_NONE;
}

size_t p2pa_solution_pose_count(p2pa_solution solution) {
    return solution ? solution->result.poses.size() : 0;
}

p2pa_status p2pa_solution_pose(p2pa_solution solution, size_t index, p2pa_pose* pose,
                               double* residual) {
    P2PA_REQUIRE(solution);
    if (index >= solution->result.poses.size()) {
        return fail(P2PA_ERR_INVALID_ARGUMENT, "pose index out of range");
    }
    const p2pa::SolvedPose& p = solution->result.poses[index];
    if (pose) *pose = to_c(p.pose);
    if (residual) *residual = p.residual;
    last_error.clear();
    return P2PA_OK;
}

void p2pa_solution_free(p2pa_solution solution) { delete solution; }

p2pa_status p2pa_pose_facing_midpoint(p2pa_vec3 position, const p2pa_landmarks* landmarks,
                                      p2pa_pose* out) {
    P2PA_REQUIRE(landmarks);
    P2PA_REQUIRE(out);
    return guarded(
        [&] { *out = to_c(p2pa::facing_midpoint(to_vec(position), to_landmarks(*landmarks))); });
}

p2pa_status p2pa_synthesize(const p2pa_pose* pose, const p2pa_landmarks* landmarks,
                            const p2pa_noise_model* noise, p2pa_observation* out) {
    P2PA_REQUIRE(pose);
    P2PA_REQUIRE(landmarks);
    P2PA_REQUIRE(out);
    return guarded([&] {
        std::optional<p2pa::NoiseModel> model;
        if (noise) model = to_noise(*noise);
        p2pa::Rng rng(model ? model->seed : 0);
        *out = to_c(p2pa::synthesize_observation(to_pose(*pose), to_landmarks(*landmarks), model,
                                                 rng));
    });
}

void p2pa_sweep_config_default(p2pa_sweep_config* config) {
    if (!config) return;
    const p2pa::SweepConfig d;
    config->landmarks = {to_c(d.landmarks.m1()), to_c(d.landmarks.m2())};
    config->camera_x = d.camera_horizontal.x();
    config->camera_y = d.camera_horizontal.y();
    config->altitude_min = d.altitude_min;
    config->altitude_max = d.altitude_max;
    config->num_positions = d.num_positions;
    config->samples_per_position = d.samples_per_position;
    config->noise = {d.noise.direction_cone_radius, d.noise.accel_noise_half_width, d.noise.seed};
    config->spacing = d.spacing == p2pa::AltitudeSpacing::Linear ? P2PA_SPACING_LINEAR
                                                                  : P2PA_SPACING_LOGARITHMIC;
    config->threads = d.threads;
}

p2pa_status p2pa_sweep_run(const p2pa_sweep_config* config, p2pa_sweep* out) {
    P2PA_REQUIRE(config);
    P2PA_REQUIRE(out);
    return guarded([&] {
        p2pa::SweepConfig c;
        c.landmarks = to_landmarks(config->landmarks);
        c.camera_horizontal = p2pa::Vec2(config->camera_x, config->camera_y);
        c.altitude_min = config->altitude_min;
        c.altitude_max = config->altitude_max;
        c.num_positions = config->num_positions;
        c.samples_per_position = config->samples_per_position;
        c.noise = to_noise(config->noise);
        c.spacing = config->spacing == P2PA_SPACING_LINEAR ? p2pa::AltitudeSpacing::Linear
                                                           : p2pa::AltitudeSpacing::Logarithmic;
        c.threads = config->threads;
        auto handle = std::make_unique<p2pa_sweep_t>();
        handle->rows = p2pa::run_sweep(c);
        *out = handle.release();
    });
}

size_t p2pa_sweep_row_count(p2pa_sweep sweep) { return sweep ? sweep->rows.size() : 0; }

p2pa_status p2pa_sweep_row_at(p2pa_sweep sweep, size_t index, p2pa_sweep_row* out) {
    P2PA_REQUIRE(sweep);
    P2PA_REQUIRE(out);
    if (index >= sweep->rows.size()) {
        return fail(P2PA_ERR_INVALID_ARGUMENT, "row index out of range");
    }
    const p2pa::SweepRow& r = sweep->rows[index];
    *out = {r.altitude, r.rms_total, r.rms_x, r.rms_y, r.rms_z, r.failures};
    last_error.clear();
    return P2PA_OK;
}

p2pa_status p2pa_sweep_write_csv(p2pa_sweep sweep, const char* path) {
    P2PA_REQUIRE(sweep);
    P2PA_REQUIRE(path);
    std::ofstream file(path);
    if (!file) return fail(P2PA_ERR_IO, ("cannot open " + std::string(path)).c_str());
    p2pa::write_sweep_csv(file, sweep->rows);
    file.close();
    if (!file) return fail(P2PA_ERR_IO, ("failed writing " + std::string(path)).c_str());
    last_error.clear();
    return P2PA_OK;
}

p2pa_status p2pa_sweep_summarize(p2pa_sweep sweep, double threshold_mm, p2pa_sweep_summary* out) {
    P2PA_REQUIRE(sweep);
    P2PA_REQUIRE(out);
    const p2pa::SweepSummary s = p2pa::summarize(sweep->rows, threshold_mm);
    *out = {s.min_rms_altitude, s.min_rms, s.first_below ? 1 : 0, s.first_below.value_or(0.0)};
    last_error.clear();
    return P2PA_OK;
}

void p2pa_sweep_free(p2pa_sweep sweep) { delete sweep; }

}  // extern "C"
