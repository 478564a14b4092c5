#pragma once

// Test-only oracles and samplers. Nothing here calls into the solver; the
// angle oracle works from object-frame geometry alone.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "classify.hpp"
#include "geom.hpp"

namespace p2pa::testing {

inline constexpr double kPi = std::numbers::pi;

/// Tilt and horizontal angles seen from camera c, computed directly in the
/// object frame (up = +z) with the beta stipulation for vertical rays.
inline ObservationAngles true_angles(const Vec3& m1, const Vec3& m2, const Vec3& c) {
    const Vec3 r1 = m1 - c;
    const Vec3 r2 = m2 - c;
    ObservationAngles a;
    a.rho1 = std::acos(std::clamp(r1.z() / r1.norm(), -1.0, 1.0));
    a.rho2 = std::acos(std::clamp(r2.z() / r2.norm(), -1.0, 1.0));
    const Vec2 h1 = r1.head<2>();
    const Vec2 h2 = r2.head<2>();
    if (h1.norm() > 1e-9 * r1.norm() && h2.norm() > 1e-9 * r2.norm()) {
        a.beta = std::atan2(h1.x() * h2.y() - h1.y() * h2.x(), h1.dot(h2));
        if (a.beta <= -kPi) a.beta = kPi;
    }
    return a;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Vec3 uniform_box(std::mt19937_64& rng, double half) {
    return Vec3(uniform(rng, -half, half), uniform(rng, -half, half), uniform(rng, -half, half));
}

inline Rotation random_rotation(std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
    q.normalize();
    return Rotation::from_matrix(q.toRotationMatrix());
}

inline Rotation yaw_rotation(double yaw) {
    return Rotation::from_matrix(Eigen::AngleAxisd(yaw, Vec3::UnitZ()).toRotationMatrix());
}

struct GroundTruth {
    LandmarkPair landmarks;
    CameraPose pose;
};

/// Distance from the camera to the nearest singular configuration family,
/// measured in mm: the landmark line, a vertical landmark line (landmark
/// horizontal separation), and the common horizontal plane.
inline double singular_clearance(const LandmarkPair& l, const Vec3& c) {
    const Vec3 along = (l.m2() - l.m1()).normalized();
    const double to_line = (c - l.m1()).cross(along).norm();
    const double vertical = l.horizontal_distance();
    const double plane = std::max(std::abs(c.z() - l.m1().z()), std::abs(c.z() - l.m2().z()));
    return std::min({to_line, vertical, plane});
}

/// Landmarks uniform in a 1 m box, camera uniform in a 2 m box with an
/// arbitrary orientation, at least `clearance` mm from every singular set.
inline GroundTruth sample_ground_truth(std::mt19937_64& rng, double clearance = 1.0) {
    for (;;) {
        const Vec3 m1 = uniform_box(rng, 500.0);
        const Vec3 m2 = uniform_box(rng, 500.0);
        const Vec3 c = uniform_box(rng, 1000.0);
        if ((m2 - m1).norm() < clearance) continue;
        const LandmarkPair l(m1, m2);
        if (singular_clearance(l, c) < clearance) continue;
        return GroundTruth{l, CameraPose{c, random_rotation(rng)}};
    }
}

}  // namespace p2pa::testing
