#include "solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "error.hpp"

namespace p2pa {

namespace {

constexpr double kPi = std::numbers::pi;

double cot(double x) { return std::cos(x) / std::sin(x); }

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

bool at_pole(double rho, double tol) { return rho <= tol || rho >= kPi - tol; }

// Generic double-root tolerance, relative to the coefficient magnitudes.
constexpr double kDiscriminantTol = 1e-9;
// Double-root tolerance for the tilt quadratic, relative to the two terms of
// its expanded discriminant.
constexpr double kTiltDiscriminantTol = 1e-10;
// Roots at or below this fraction of the landmark distance count as zero.
constexpr double kZeroDistance = 1e-9;
// Circle-intersection consistency, relative to the squared radii.
constexpr double kIntersectionTol = 1e-6;

double configuration_diameter(const CameraPose& pose, const LandmarkPair& landmarks) {
    return std::max({landmarks.baseline(), (pose.position - landmarks.m1()).norm(),
                     (pose.position - landmarks.m2()).norm()});
}

void append_distinct(std::vector<SolvedPose>& poses, const SolvedPose& candidate,
                     const LandmarkPair& landmarks) {
    const double threshold = 1e-9 * (configuration_diameter(candidate.pose, landmarks) + 1.0);
    for (const auto& existing : poses) {
        if (pose_distance(existing.pose, candidate.pose) <= threshold) return;
    }
    poses.push_back(candidate);
}

std::vector<double> roots_given_discriminant(double a, double b, double c, double disc,
                                             double slack) {
    if (disc < -slack) return {};
    if (disc <= slack) return {-b / (2.0 * a)};
    // Cancellation-free pair: one root from q, the other from Vieta.
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    double r1 = q / a;
    double r2 = c / q;
    if (r1 > r2) std::swap(r1, r2);
    return {r1, r2};
}

// b^2 - 4ac = 4 (d^2 a - (delta tan_i sin beta)^2); the large parts of b^2
// and 4ac cancel symbolically.
std::vector<double> tilt_roots(const QuadraticCoeffs& q, const ObservationAngles& angles,
                               double horizontal_distance) {
    const double spread = horizontal_distance * horizontal_distance * q.a;
    const double lean_root = q.delta * std::tan(angles.rho(q.i)) * std::sin(angles.beta);
    const double lean = lean_root * lean_root;
    return roots_given_discriminant(q.a, q.b, q.c, 4.0 * (spread - lean),
                                    kTiltDiscriminantTol * 4.0 * (spread + lean));
}

}  // namespace

QuadraticCoeffs quadratic_coeffs(const ObservationAngles& angles, int i, double height_difference,
                                 double horizontal_distance) {
    if (i != 1 && i != 2) {
        throw Error(ErrorCode::BadIndexChoice, "landmark index must be 1 or 2");
    }
    const int j = 3 - i;
    const double rho_i = angles.rho(i);
    const double rho_j = angles.rho(j);
    constexpr double eps = tol::kSingularAngle;
    if (at_pole(rho_i, eps) || near(rho_i, kPi / 2, eps) || at_pole(rho_j, eps)) {
        std::ostringstream os;
        os << "cannot build quadratic with i = " << i << " (rho_i = " << rho_i
           << ", rho_j = " << rho_j << ")";
        throw Error(ErrorCode::BadIndexChoice, os.str());
    }

    const double tan_i = std::tan(rho_i);
    const double k = cot(rho_j) * tan_i;
    const double cos_beta = std::cos(angles.beta);
    const double half_sin = std::sin(0.5 * angles.beta);

    QuadraticCoeffs q;
    q.i = i;
    q.j = j;
    q.delta = i == 1 ? height_difference : -height_difference;
    // 1 - 2k cos(beta) + k^2 without cancellation near k = 1, beta = 0.
    q.a = (1.0 - k) * (1.0 - k) + 4.0 * k * half_sin * half_sin;
    q.b = 2.0 * q.delta * tan_i * (cos_beta - k);
    q.c = q.delta * q.delta * tan_i * tan_i - horizontal_distance * horizontal_distance;
    return q;
}

std::vector<double> quadratic_roots(double a, double b, double c) {
    if (a == 0.0) {
        if (b == 0.0) return {};
        return {-c / b};
    }
    return roots_given_discriminant(a, b, c, b * b - 4.0 * a * c,
                                    kDiscriminantTol * (b * b + std::abs(4.0 * a * c) + 1.0));
}

std::vector<DistanceSolution> solve_distances(const ObservationAngles& angles,
                                              const LandmarkPair& landmarks,
                                              const SolveOptions& options) {
    const double eps = options.singular_tol;
    if (auto singular = detect_singular(landmarks, angles, eps)) {
        throw Error(ErrorCode::SingularInput,
                    "singular configuration: " + std::string(to_string(*singular)));
    }
    const double d = landmarks.horizontal_distance();
    const double height = landmarks.height_difference();

    // Camera on the vertical line through landmark i.
    for (int i : {1, 2}) {
        const double rho_i = angles.rho(i);
        if (!at_pole(rho_i, eps)) continue;
        const int j = 3 - i;
        DistanceSolution s;
        const double h_j = -d * cot(angles.rho(j));
        // h_i - h_j = m_j.z - m_i.z
        const double h_i = h_j + (landmarks.m(j).z() - landmarks.m(i).z());
        const bool landmark_below = rho_i >= kPi / 2;
        if ((landmark_below && !(h_i > 0.0)) || (!landmark_below && !(h_i < 0.0))) {
            return {};
        }
        (i == 1 ? s.d1 : s.d2) = 0.0;
        (i == 1 ? s.d2 : s.d1) = d;
        (i == 1 ? s.h1 : s.h2) = h_i;
        (i == 1 ? s.h2 : s.h1) = h_j;
        return {s};
    }

    // Tan index: the tilt farthest from horizontal, which is never pi/2 here.
    const int i = std::abs(std::cos(angles.rho1)) >= std::abs(std::cos(angles.rho2)) ? 1 : 2;
    const QuadraticCoeffs q = quadratic_coeffs(angles, i, height, d);
    const double cot_j = cot(angles.rho(q.j));
    const double tan_i = std::tan(angles.rho(q.i));
    const double zero = kZeroDistance * d;

    std::vector<DistanceSolution> out;
    for (double d_j : tilt_roots(q, angles, d)) {
        // A zero distance needs a vertical ray, which the general branch excludes.
        if (!(d_j > zero)) continue;
        const double d_i = (d_j * cot_j - q.delta) * tan_i;
        if (!(d_i > zero)) continue;
        const double h_j = -d_j * cot_j;
        const double h_i = h_j + q.delta;
        DistanceSolution s;
        if (q.i == 1) {
            s = DistanceSolution{d_i, d_j, h_i, h_j};
        } else {
            s = DistanceSolution{d_j, d_i, h_j, h_i};
        }
        out.push_back(s);
    }
    return out;
}

DistanceSolution solve_coaltitude(const ObservationAngles& angles, double horizontal_distance) {
    if (!(horizontal_distance > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "landmark distance must be positive");
    }
    auto upper = [](double rho) { return rho > 0.0 && rho < kPi / 2; };
    auto lower = [](double rho) { return rho > kPi / 2 && rho < kPi; };
    if (!((upper(angles.rho1) && upper(angles.rho2)) ||
          (lower(angles.rho1) && lower(angles.rho2)))) {
        throw Error(ErrorCode::MixedHemisphere,
                    "co-altitude tilts must lie strictly inside the same hemisphere");
    }
    const double cot_1 = cot(angles.rho1);
    const double k = cot_1 * std::tan(angles.rho2);
    const double a = 1.0 - 2.0 * std::cos(angles.beta) * k + k * k;
    if (!(a > 1e-15)) {
        throw Error(ErrorCode::SingularInput, "colinear configuration");
    }
    DistanceSolution s;
    s.d1 = horizontal_distance / std::sqrt(a);
    s.d2 = s.d1 * k;
    s.h1 = -s.d1 * cot_1;
    s.h2 = s.h1;
    return s;
}

DistanceSolution solve_coaltitude(const ObservationAngles& angles, const LandmarkPair& landmarks) {
    if (std::abs(landmarks.height_difference()) > 1e-12 * landmarks.baseline()) {
        throw Error(ErrorCode::NotCoaltitude, "landmarks are at different altitudes");
    }
    return solve_coaltitude(angles, landmarks.horizontal_distance());
}

Vec3 position_from_distances(const DistanceSolution& solution, const LandmarkPair& landmarks,
                             double beta) {
    const Vec2 a = landmarks.m1().head<2>();
    const Vec2 b = landmarks.m2().head<2>();
    const double d = (b - a).norm();
    if (!(d > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "landmarks share a vertical line");
    }
    const Vec2 e = (b - a) / d;
    const Vec2 n(-e.y(), e.x());
    const double r1 = solution.d1;
    const double r2 = solution.d2;

    // Foot of the chord along a->b, and the signed offset from the triangle
    // area; a positive offset lies left of a->b, where the angle at the
    // camera from a to b is counterclockwise.
    const double along = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d);
    const double across = r1 * r2 * std::sin(beta) / d;
    const double gap = std::abs(along * along + across * across - r1 * r1);
    if (gap > kIntersectionTol * (r1 * r1 + r2 * r2 + d * d)) {
        std::ostringstream os;
        os << "circles of radii " << r1 << " and " << r2 << " do not meet at angle " << beta;
        throw Error(ErrorCode::NoIntersection, os.str());
    }
    const Vec2 c = a + along * e + across * n;
    return Vec3(c.x(), c.y(), landmarks.m1().z() + solution.h1);
}

ImageObservation forward_observation(const CameraPose& pose, const LandmarkPair& landmarks) {
    auto ray = [&](const Vec3& m) {
        const Vec3 offset = m - pose.position;
        if (offset.norm() <= 1e-12 * landmarks.baseline()) {
            throw Error(ErrorCode::CameraAtLandmark, "camera coincides with a landmark");
        }
        return UnitVec3::normalized(pose.rotation * offset.normalized());
    };
    return ImageObservation{ray(landmarks.m1()), ray(landmarks.m2()),
                            pose.rotation * UnitVec3::unit_z()};
}

double pose_distance(const CameraPose& a, const CameraPose& b) {
    return std::max((a.position - b.position).norm(), a.rotation.distance(b.rotation));
}

SolveResult solve_labeled(const ImageObservation& obs, const LandmarkPair& landmarks,
                          const SolveOptions& options) {
    SolveResult result;
    const ObservationAngles angles = reduce_to_angles(obs);
    result.singular = detect_singular(landmarks, angles, options.singular_tol);
    if (result.singular) return result;

    for (const DistanceSolution& s : solve_distances(angles, landmarks, options)) {
        try {
            CameraPose pose;
            pose.position = position_from_distances(s, landmarks, angles.beta);
            const UnitVec3 to1 = UnitVec3::normalized(landmarks.m1() - pose.position);
            const UnitVec3 to2 = UnitVec3::normalized(landmarks.m2() - pose.position);
            pose.rotation = rotation_from_two_pairs(to1, to2, obs.v1, obs.v2);

            const ObservationAngles again = reduce_to_angles(forward_observation(pose, landmarks));
            const double residual = angle_residual(angles, again);
            const double up_gap = (pose.rotation * Vec3::UnitZ() - obs.u.vec()).norm();
            if (residual > options.round_trip_tol || up_gap > options.round_trip_tol) continue;
            append_distinct(result.poses, SolvedPose{pose, residual}, landmarks);
        } catch (const Error&) {
            // Degenerate candidate (no intersection, parallel rays); drop it.
        }
    }
    return result;
}

SolveResult solve_unlabeled(const ImageObservation& obs, const LandmarkPair& landmarks,
                            const SolveOptions& options) {
    SolveResult result = solve_labeled(obs, landmarks, options);
    if (result.is_singular()) return result;

    // Image 1 taken as landmark 2: same problem with the rays exchanged.
    const ImageObservation exchanged{obs.v2, obs.v1, obs.u};
    const SolveResult other = solve_labeled(exchanged, landmarks, options);
    for (const SolvedPose& p : other.poses) append_distinct(result.poses, p, landmarks);

    if (result.poses.size() > 2) {
        std::ostringstream os;
        os << result.poses.size() << " unlabeled poses survived; at most 2 are possible";
        throw Error(ErrorCode::TheoremViolation, os.str());
    }
    return result;
}

}  // namespace p2pa
