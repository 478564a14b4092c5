#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace p2pa {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Unit-norm 3-vector. Construction renormalizes, so the norm is 1 to
/// rounding regardless of how close the input was.
class UnitVec3 {
public:
    /// Normalizes `v`. Throws NearZeroVector when |v| <= min_norm.
    static UnitVec3 normalized(const Vec3& v, double min_norm = 1e-12);

    /// Accepts a vector that is already unit within 1e-9 and snaps it to
    /// norm 1. Throws InvalidArgument otherwise.
    static UnitVec3 from_unit(const Vec3& v);

    static UnitVec3 unit_x() { return UnitVec3(Vec3::UnitX()); }
    static UnitVec3 unit_y() { return UnitVec3(Vec3::UnitY()); }
    static UnitVec3 unit_z() { return UnitVec3(Vec3::UnitZ()); }

    const Vec3& vec() const noexcept { return v_; }
    operator const Vec3&() const noexcept { return v_; }
    double x() const noexcept { return v_.x(); }
    double y() const noexcept { return v_.y(); }
    double z() const noexcept { return v_.z(); }

    UnitVec3 operator-() const { return UnitVec3(-v_); }

private:
    explicit UnitVec3(const Vec3& v) : v_(v) {}
    Vec3 v_;
};

/// Camera-frame directions to the two landmarks plus the up vector.
struct ImageObservation {
    UnitVec3 v1;
    UnitVec3 v2;
    UnitVec3 u;
};

/// Tilt angles in [0, pi] between up and each landmark ray, and the signed
/// horizontal angle from ray 1 to ray 2 in (-pi, pi], counterclockwise about up.
struct ObservationAngles {
    double rho1 = 0.0;
    double rho2 = 0.0;
    double beta = 0.0;

    double rho(int index) const { return index == 1 ? rho1 : rho2; }
};

/// Proper rotation matrix.
class Rotation {
public:
    Rotation() : m_(Mat3::Identity()) {}

    /// Throws InvalidArgument unless m is orthogonal with det +1 within `tol`.
    static Rotation from_matrix(const Mat3& m, double tol = 1e-9);

    const Mat3& matrix() const noexcept { return m_; }
    Vec3 operator*(const Vec3& v) const { return m_ * v; }
    UnitVec3 operator*(const UnitVec3& v) const;
    Rotation inverse() const { return Rotation(m_.transpose()); }

    /// Frobenius norm of the difference.
    double distance(const Rotation& other) const { return (m_ - other.m_).norm(); }

private:
    explicit Rotation(const Mat3& m) : m_(m) {}
    Mat3 m_;
};

/// Optical-center position in object coordinates (mm) and the rotation that
/// maps object-frame directions to camera-frame directions.
struct CameraPose {
    Vec3 position = Vec3::Zero();
    Rotation rotation;
};

namespace tol {
/// |q_i| at or below this counts as a vertical landmark ray (beta stipulated 0).
inline constexpr double kHorizontalProjection = 1e-9;
inline constexpr double kCongruence = 1e-6;
inline constexpr double kParallel = 1e-9;
}  // namespace tol

/// Pinhole sensor point (x, y) at focal length f, all in mm. The sensor sits
/// behind the pinhole at w = (x, -f, y); the returned ray is -w/|w|.
UnitVec3 pinhole_ray(double x, double y, double focal);

UnitVec3 spherical_ray(double theta, double phi);

/// Up direction from a resting accelerometer reading. A resting accelerometer
/// reports specific force, which points away from gravity.
UnitVec3 up_from_accelerometer(const Vec3& accel);

ObservationAngles reduce_to_angles(const ImageObservation& obs);

/// Counterclockwise angle at vertex c from ray c->a to ray c->b, in (-pi, pi].
double signed_horizontal_angle(const Vec2& a, const Vec2& c, const Vec2& b);

/// The unique proper rotation taking a1 to b1 and a2 to b2, built from the
/// orthonormal triads of each pair. The pairs must subtend the same angle
/// within `congruence_tol` (compared as dot products).
Rotation rotation_from_two_pairs(const UnitVec3& a1, const UnitVec3& a2, const UnitVec3& b1,
                                 const UnitVec3& b2, double congruence_tol = tol::kCongruence);

/// A canonical observation realizing the given angles: u = +z and the
/// horizontal part of ray 1 along +x. Any yaw about u gives the same angles.
ImageObservation observation_from_angles(const ObservationAngles& angles);

/// Largest absolute difference between two angle triples, with beta compared
/// on the circle.
double angle_residual(const ObservationAngles& a, const ObservationAngles& b);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double angle);

}  // namespace p2pa
