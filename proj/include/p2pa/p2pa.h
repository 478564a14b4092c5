/*
 * p2pa - camera pose from two landmarks and a gravity direction.
 *
 * C interface. All functions are reentrant. Handles are opaque and owned by
 * the caller once returned; release them with the matching *_free function.
 * On failure a function returns a non-zero p2pa_status and leaves its output
 * untouched; p2pa_last_error() then describes the failure for the calling
 * thread.
 *
 * Units: positions in millimeters, angles in radians. Object coordinates have
 * +z pointing up (against gravity).
 */
#ifndef P2PA_P2PA_H
#define P2PA_P2PA_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(P2PA_BUILDING_LIBRARY)
#    define P2PA_API __declspec(dllexport)
#  else
#    define P2PA_API __declspec(dllimport)
#  endif
#else
#  define P2PA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum p2pa_status {
    P2PA_OK = 0,
    P2PA_ERR_INVALID_ARGUMENT = 1,
    P2PA_ERR_NEAR_ZERO_VECTOR = 2,
    P2PA_ERR_DEGENERATE_VERTEX = 3,
    P2PA_ERR_PARALLEL_INPUTS = 4,
    P2PA_ERR_INCONGRUENT_PAIRS = 5,
    P2PA_ERR_CAMERA_AT_LANDMARK = 6,
    P2PA_ERR_DEGENERATE_DENOMINATOR = 7,
    P2PA_ERR_BAD_INDEX_CHOICE = 8,
    P2PA_ERR_SINGULAR_INPUT = 9,
    P2PA_ERR_NOT_COALTITUDE = 10,
    P2PA_ERR_MIXED_HEMISPHERE = 11,
    P2PA_ERR_NO_INTERSECTION = 12,
    P2PA_ERR_THEOREM_VIOLATION = 13,
    P2PA_ERR_CONFIG_INVALID = 14,
    P2PA_ERR_IO = 15,
    P2PA_ERR_INTERNAL = 99
} p2pa_status;

typedef enum p2pa_singular_case {
    P2PA_SINGULAR_NONE = 0,
    P2PA_SINGULAR_COLINEAR = 1,
    P2PA_SINGULAR_VERTICAL_LANDMARK_LINE = 2,
    P2PA_SINGULAR_HORIZONTAL_COPLANAR = 3
} p2pa_singular_case;

typedef enum p2pa_multiplicity {
    P2PA_MULTIPLICITY_INFINITE = 0,
    P2PA_MULTIPLICITY_ONE = 1,
    P2PA_MULTIPLICITY_TWO = 2
} p2pa_multiplicity;

typedef enum p2pa_spacing { P2PA_SPACING_LINEAR = 0, P2PA_SPACING_LOGARITHMIC = 1 } p2pa_spacing;

typedef struct p2pa_vec3 {
    double x, y, z;
} p2pa_vec3;

typedef struct p2pa_landmarks {
    p2pa_vec3 m1;
    p2pa_vec3 m2;
} p2pa_landmarks;

/* Camera-frame unit rays to landmark 1 and 2, and the up direction. */
typedef struct p2pa_observation {
    p2pa_vec3 v1;
    p2pa_vec3 v2;
    p2pa_vec3 u;
} p2pa_observation;

typedef struct p2pa_angles {
    double rho1; /* [0, pi], tilt of ray 1 from up */
    double rho2;
    double beta; /* (-pi, pi], counterclockwise about up from ray 1 to ray 2 */
} p2pa_angles;

/* rotation is row-major and maps object-frame directions to camera-frame
 * directions. */
typedef struct p2pa_pose {
    p2pa_vec3 position;
    double rotation[9];
} p2pa_pose;

typedef struct p2pa_solve_options {
    double singular_tol;   /* rad; default 1e-9 */
    double round_trip_tol; /* rad; default 1e-6 */
} p2pa_solve_options;

typedef struct p2pa_classification {
    p2pa_multiplicity multiplicity;
    p2pa_singular_case singular_case; /* NONE unless multiplicity is INFINITE */
    double s;                         /* landmark 1 -> 2 slope, may be +-inf */
    double s1;                        /* camera -> landmark 1 slope */
    double s2;                        /* camera -> landmark 2 slope */
    int cone_condition;               /* max(|s1|,|s2|) >= |s| */
    int on_plane_l;                   /* camera on the double-root plane */
} p2pa_classification;

typedef struct p2pa_noise_model {
    double direction_cone_radius;  /* rad */
    double accel_noise_half_width; /* fraction of g */
    uint64_t seed;
} p2pa_noise_model;

typedef struct p2pa_sweep_config {
    p2pa_landmarks landmarks;
    double camera_x, camera_y; /* horizontal camera position, mm */
    double altitude_min;       /* mm above landmark 1 */
    double altitude_max;
    int num_positions;
    int samples_per_position;
    p2pa_noise_model noise;
    p2pa_spacing spacing;
    unsigned threads; /* 0 = hardware concurrency; output is independent of it */
} p2pa_sweep_config;

typedef struct p2pa_sweep_row {
    double altitude;
    double rms_total, rms_x, rms_y, rms_z;
    long failures;
} p2pa_sweep_row;

typedef struct p2pa_sweep_summary {
    double min_rms_altitude;
    double min_rms;
    int has_first_below; /* 0 if no row falls below the threshold */
    double first_below_altitude;
} p2pa_sweep_summary;

typedef struct p2pa_solution_t* p2pa_solution;
typedef struct p2pa_sweep_t* p2pa_sweep;

P2PA_API const char* p2pa_version(void);
P2PA_API const char* p2pa_status_string(p2pa_status status);
P2PA_API const char* p2pa_singular_case_string(p2pa_singular_case c);
/* Message for the last failed call on this thread; "" if none. */
P2PA_API const char* p2pa_last_error(void);

P2PA_API void p2pa_solve_options_default(p2pa_solve_options* options);

/* --- sensor geometry --------------------------------------------------- */

P2PA_API p2pa_status p2pa_pinhole_ray(double x, double y, double focal, p2pa_vec3* out);
P2PA_API p2pa_status p2pa_spherical_ray(double theta, double phi, p2pa_vec3* out);
P2PA_API p2pa_status p2pa_up_from_accelerometer(p2pa_vec3 accel, p2pa_vec3* out);
/* Validates unit norms (within 1e-9) and renormalizes. */
P2PA_API p2pa_status p2pa_make_observation(p2pa_vec3 v1, p2pa_vec3 v2, p2pa_vec3 u,
                                           p2pa_observation* out);
P2PA_API p2pa_status p2pa_reduce_to_angles(const p2pa_observation* obs, p2pa_angles* out);
/* Canonical observation with u = +z realizing the given angles. */
P2PA_API p2pa_status p2pa_observation_from_angles(const p2pa_angles* angles,
                                                  p2pa_observation* out);

/* --- classification ---------------------------------------------------- */

P2PA_API p2pa_status p2pa_detect_singular(const p2pa_landmarks* landmarks,
                                          const p2pa_angles* angles, double angle_tol,
                                          p2pa_singular_case* out);
P2PA_API p2pa_status p2pa_classify(const p2pa_landmarks* landmarks, p2pa_vec3 camera,
                                   p2pa_classification* out);

/* --- solving ------------------------------------------------------------ */

/* options may be NULL for defaults. A singular configuration is not an
 * error: the solution reports the case and holds no poses. */
P2PA_API p2pa_status p2pa_solve(const p2pa_observation* obs, const p2pa_landmarks* landmarks,
                                const p2pa_solve_options* options, int unlabeled,
                                p2pa_solution* out);
P2PA_API p2pa_singular_case p2pa_solution_singular_case(p2pa_solution solution);
P2PA_API size_t p2pa_solution_pose_count(p2pa_solution solution);
P2PA_API p2pa_status p2pa_solution_pose(p2pa_solution solution, size_t index, p2pa_pose* pose,
                                        double* residual);
P2PA_API void p2pa_solution_free(p2pa_solution solution);

/* --- forward model and simulation -------------------------------------- */

/* Level camera at position looking horizontally at the landmark midpoint. */
P2PA_API p2pa_status p2pa_pose_facing_midpoint(p2pa_vec3 position,
                                               const p2pa_landmarks* landmarks, p2pa_pose* out);
/* noise may be NULL for an exact observation. */
P2PA_API p2pa_status p2pa_synthesize(const p2pa_pose* pose, const p2pa_landmarks* landmarks,
                                     const p2pa_noise_model* noise, p2pa_observation* out);

P2PA_API void p2pa_sweep_config_default(p2pa_sweep_config* config);
P2PA_API p2pa_status p2pa_sweep_run(const p2pa_sweep_config* config, p2pa_sweep* out);
P2PA_API size_t p2pa_sweep_row_count(p2pa_sweep sweep);
P2PA_API p2pa_status p2pa_sweep_row_at(p2pa_sweep sweep, size_t index, p2pa_sweep_row* out);
/* CSV with header altitude_mm,rms_total_mm,rms_x_mm,rms_y_mm,rms_z_mm,failures */
P2PA_API p2pa_status p2pa_sweep_write_csv(p2pa_sweep sweep, const char* path);
P2PA_API p2pa_status p2pa_sweep_summarize(p2pa_sweep sweep, double threshold_mm,
                                          p2pa_sweep_summary* out);
P2PA_API void p2pa_sweep_free(p2pa_sweep sweep);

#ifdef __cplusplus
}
#endif

#endif /* P2PA_P2PA_H */
