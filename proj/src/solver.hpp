#pragma once

#include <optional>
#include <vector>

#include "classify.hpp"
#include "geom.hpp"

namespace p2pa {

/// Horizontal distances d_i and heights h_i of the camera relative to each
/// landmark (mm). h_i is the altitude of the camera above landmark i.
struct DistanceSolution {
    double d1 = 0.0;
    double d2 = 0.0;
    double h1 = 0.0;
    double h2 = 0.0;

    double d(int index) const { return index == 1 ? d1 : d2; }
    double h(int index) const { return index == 1 ? h1 : h2; }
};

/// Coefficients of a*d_j^2 + b*d_j + c = 0, the law of cosines after
/// eliminating d_i = (d_j cot rho_j - delta) tan rho_i.
struct QuadraticCoeffs {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    int i = 1;           // landmark whose tilt enters through tan
    int j = 2;           // landmark whose distance is the unknown
    double delta = 0.0;  // h_i - h_j
};

struct SolveOptions {
    /// Angle tolerance for singular-case detection (rad).
    double singular_tol = tol::kSingularAngle;
    /// Largest accepted gap between input angles and the angles a candidate
    /// pose re-synthesizes (rad), and between R*z and u.
    double round_trip_tol = 1e-6;
};

struct SolvedPose {
    CameraPose pose;
    /// angle_residual between the observed and re-synthesized angles.
    double residual = 0.0;
};

struct SolveResult {
    std::optional<SingularCase> singular;
    std::vector<SolvedPose> poses;  // empty when singular or infeasible

    bool is_singular() const noexcept { return singular.has_value(); }
};

/// Builds the quadratic with `i` as the tan index. Throws BadIndexChoice if
/// rho_i is in {0, pi/2, pi} or rho_j is in {0, pi}.
QuadraticCoeffs quadratic_coeffs(const ObservationAngles& angles, int i, double height_difference,
                                 double horizontal_distance);

/// Real roots of a*x^2 + b*x + c, ascending. A discriminant within
/// 1e-9*(b^2 + |4ac| + 1) of zero is treated as a double root.
std::vector<double> quadratic_roots(double a, double b, double c);

/// All (d, h) solutions consistent with the angles, 0 to 2 of them. Throws
/// SingularInput if the configuration is singular.
std::vector<DistanceSolution> solve_distances(const ObservationAngles& angles,
                                              const LandmarkPair& landmarks,
                                              const SolveOptions& options = {});

/// Closed form for landmarks at equal altitude and horizontal distance d.
/// Both tilts must lie strictly inside the same open hemisphere.
DistanceSolution solve_coaltitude(const ObservationAngles& angles, double horizontal_distance);

/// As above, checking that the landmarks are co-altitude (NotCoaltitude).
DistanceSolution solve_coaltitude(const ObservationAngles& angles, const LandmarkPair& landmarks);

/// Camera position in object coordinates from one distance solution. The
/// horizontal position is the intersection of the circles of radius d1 and d2
/// about the landmarks on the side selected by the sign of beta.
Vec3 position_from_distances(const DistanceSolution& solution, const LandmarkPair& landmarks,
                             double beta);

/// Exact camera-frame observation of the landmarks from `pose`. Throws
/// CameraAtLandmark.
ImageObservation forward_observation(const CameraPose& pose, const LandmarkPair& landmarks);

SolveResult solve_labeled(const ImageObservation& obs, const LandmarkPair& landmarks,
                          const SolveOptions& options = {});

/// Solves under both landmark labelings and merges the poses. At most two
/// poses survive; more would contradict the unlabeled bound and throws
/// TheoremViolation.
SolveResult solve_unlabeled(const ImageObservation& obs, const LandmarkPair& landmarks,
                            const SolveOptions& options = {});

/// Position distance or rotation Frobenius distance, whichever is larger.
double pose_distance(const CameraPose& a, const CameraPose& b);

}  // namespace p2pa
