#include "geom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "error.hpp"

namespace p2pa {

namespace {

constexpr double kPi = std::numbers::pi;

std::string describe(const Vec3& v) {
    std::ostringstream os;
    os.precision(17);
    os << "(" << v.x() << ", " << v.y() << ", " << v.z() << ")";
    return os.str();
}

}  // namespace

UnitVec3 UnitVec3::normalized(const Vec3& v, double min_norm) {
    if (!v.allFinite()) {
        throw Error(ErrorCode::InvalidArgument, "non-finite vector " + describe(v));
    }
    const double n = v.norm();
    if (n <= min_norm) {
        throw Error(ErrorCode::NearZeroVector, "cannot normalize near-zero vector " + describe(v));
    }
    return UnitVec3(v / n);
}

UnitVec3 UnitVec3::from_unit(const Vec3& v) {
    if (!v.allFinite() || std::abs(v.norm() - 1.0) > 1e-9) {
        throw Error(ErrorCode::InvalidArgument, "expected a unit vector, got " + describe(v));
    }
    return UnitVec3(v / v.norm());
}

Rotation Rotation::from_matrix(const Mat3& m, double tol) {
    if (!m.allFinite()) {
        throw Error(ErrorCode::InvalidArgument, "rotation has non-finite entries");
    }
    const double ortho = (m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff();
    const double det = m.determinant();
    if (ortho > tol || std::abs(det - 1.0) > tol) {
        std::ostringstream os;
        os << "not a proper rotation (|R^T R - I| = " << ortho << ", det = " << det << ")";
        throw Error(ErrorCode::InvalidArgument, os.str());
    }
    return Rotation(m);
}

UnitVec3 Rotation::operator*(const UnitVec3& v) const {
    return UnitVec3::normalized(m_ * v.vec());
}

UnitVec3 pinhole_ray(double x, double y, double focal) {
    if (!(focal > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "focal length must be positive");
    }
    const Vec3 w(x, -focal, y);
    return UnitVec3::normalized(-w);
}

UnitVec3 spherical_ray(double theta, double phi) {
    if (!(theta >= 0.0 && theta <= kPi)) {
        throw Error(ErrorCode::InvalidArgument, "polar angle must lie in [0, pi]");
    }
    const double s = std::sin(theta);
    return UnitVec3::normalized(Vec3(std::cos(phi) * s, std::sin(phi) * s, std::cos(theta)));
}

UnitVec3 up_from_accelerometer(const Vec3& accel) {
    return UnitVec3::normalized(accel, 1e-6);
}

double wrap_angle(double angle) {
    double r = std::remainder(angle, 2.0 * kPi);
    if (r <= -kPi) r += 2.0 * kPi;
    return r;
}

ObservationAngles reduce_to_angles(const ImageObservation& obs) {
    const Vec3& u = obs.u;
    const Vec3& v1 = obs.v1;
    const Vec3& v2 = obs.v2;

    ObservationAngles out;
    out.rho1 = std::acos(std::clamp(u.dot(v1), -1.0, 1.0));
    out.rho2 = std::acos(std::clamp(u.dot(v2), -1.0, 1.0));

    const Vec3 q1 = v1 - v1.dot(u) * u;
    const Vec3 q2 = v2 - v2.dot(u) * u;
    if (q1.norm() > tol::kHorizontalProjection && q2.norm() > tol::kHorizontalProjection) {
        out.beta = std::atan2(q1.cross(q2).dot(u), q1.dot(q2));
        if (out.beta <= -kPi) out.beta = kPi;
    }
    return out;
}

double signed_horizontal_angle(const Vec2& a, const Vec2& c, const Vec2& b) {
    const Vec2 ca = a - c;
    const Vec2 cb = b - c;
    if (ca.norm() <= 1e-12 || cb.norm() <= 1e-12) {
        throw Error(ErrorCode::DegenerateVertex, "vertex coincides with an endpoint");
    }
    const double cross = ca.x() * cb.y() - ca.y() * cb.x();
    double angle = std::atan2(cross, ca.dot(cb));
    if (angle <= -kPi) angle = kPi;
    return angle;
}

Rotation rotation_from_two_pairs(const UnitVec3& a1, const UnitVec3& a2, const UnitVec3& b1,
                                 const UnitVec3& b2, double congruence_tol) {
    const Vec3 a_cross = a1.vec().cross(a2.vec());
    const Vec3 b_cross = b1.vec().cross(b2.vec());
    if (a_cross.norm() <= tol::kParallel || b_cross.norm() <= tol::kParallel) {
        throw Error(ErrorCode::ParallelInputs, "direction pair is parallel");
    }
    const double gap = std::abs(a1.vec().dot(a2.vec()) - b1.vec().dot(b2.vec()));
    if (gap > congruence_tol) {
        std::ostringstream os;
        os << "direction pairs subtend different angles (dot gap " << gap << ")";
        throw Error(ErrorCode::IncongruentPairs, os.str());
    }

    auto triad = [](const Vec3& e1, const Vec3& cross) {
        Mat3 t;
        t.col(0) = e1;
        t.col(1) = cross.normalized();
        t.col(2) = t.col(0).cross(t.col(1));
        return t;
    };
    const Mat3 ta = triad(a1.vec(), a_cross);
    const Mat3 tb = triad(b1.vec(), b_cross);
    return Rotation::from_matrix(tb * ta.transpose());
}

ImageObservation observation_from_angles(const ObservationAngles& angles) {
    const auto tilt_ok = [](double rho) { return rho >= 0.0 && rho <= kPi; };
    if (!tilt_ok(angles.rho1) || !tilt_ok(angles.rho2)) {
        throw Error(ErrorCode::InvalidArgument, "tilt angles must lie in [0, pi]");
    }
    if (!(angles.beta >= -kPi && angles.beta <= kPi)) {
        throw Error(ErrorCode::InvalidArgument, "beta must lie in [-pi, pi]");
    }
    const double s1 = std::sin(angles.rho1);
    const double s2 = std::sin(angles.rho2);
    return ImageObservation{
        UnitVec3::normalized(Vec3(s1, 0.0, std::cos(angles.rho1))),
        UnitVec3::normalized(Vec3(s2 * std::cos(angles.beta), s2 * std::sin(angles.beta),
                                  std::cos(angles.rho2))),
        UnitVec3::unit_z(),
    };
}

double angle_residual(const ObservationAngles& a, const ObservationAngles& b) {
    // Beta is scaled by the shorter horizontal projection; near-vertical rays
    // pin position no matter what beta says.
    const double horizontal =
        std::min({std::sin(a.rho1), std::sin(a.rho2), std::sin(b.rho1), std::sin(b.rho2)});
    const double beta_gap = std::abs(wrap_angle(a.beta - b.beta)) * std::max(horizontal, 0.0);
    return std::max({std::abs(a.rho1 - b.rho1), std::abs(a.rho2 - b.rho2), beta_gap});
}

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NearZeroVector: return "NearZeroVector";
        case ErrorCode::DegenerateVertex: return "DegenerateVertex";
        case ErrorCode::ParallelInputs: return "ParallelInputs";
        case ErrorCode::IncongruentPairs: return "IncongruentPairs";
        case ErrorCode::CameraAtLandmark: return "CameraAtLandmark";
        case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
        case ErrorCode::BadIndexChoice: return "BadIndexChoice";
        case ErrorCode::SingularInput: return "SingularInput";
        case ErrorCode::NotCoaltitude: return "NotCoaltitude";
        case ErrorCode::MixedHemisphere: return "MixedHemisphere";
        case ErrorCode::NoIntersection: return "NoIntersection";
        case ErrorCode::TheoremViolation: return "TheoremViolation";
        case ErrorCode::ConfigInvalid: return "ConfigInvalid";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

}  // namespace p2pa
