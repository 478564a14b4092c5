#pragma once

#include <optional>
#include <string_view>

#include "geom.hpp"

namespace p2pa {

/// Two labeled landmarks in object coordinates (mm, z up).
class LandmarkPair {
public:
    /// Throws InvalidArgument if the landmarks coincide or are non-finite.
    LandmarkPair(const Vec3& m1, const Vec3& m2);

    const Vec3& m1() const noexcept { return m1_; }
    const Vec3& m2() const noexcept { return m2_; }
    const Vec3& m(int index) const noexcept { return index == 1 ? m1_ : m2_; }

    /// Altitude of landmark 2 above landmark 1.
    double height_difference() const noexcept { return m2_.z() - m1_.z(); }
    /// Horizontal distance between the landmarks.
    double horizontal_distance() const noexcept { return (m2_ - m1_).head<2>().norm(); }
    /// 3D distance between the landmarks; the length scale for relative tolerances.
    double baseline() const noexcept { return (m2_ - m1_).norm(); }

    LandmarkPair swapped() const { return LandmarkPair(m2_, m1_); }

private:
    Vec3 m1_;
    Vec3 m2_;
};

/// The three configuration families with infinitely many solutions.
enum class SingularCase {
    Colinear,
    VerticalLandmarkLine,
    HorizontalCoplanar,
};

std::string_view to_string(SingularCase c) noexcept;

enum class MultiplicityKind { Infinite, One, Two };

struct Multiplicity {
    MultiplicityKind kind = MultiplicityKind::One;
    std::optional<SingularCase> singular;  // set iff kind == Infinite
};

/// Slopes in the sense of altitude gain over horizontal distance. Infinite
/// when the horizontal distance vanishes.
struct SlopeData {
    double s = 0.0;   // landmark 1 -> landmark 2
    double s1 = 0.0;  // camera -> landmark 1
    double s2 = 0.0;  // camera -> landmark 2
};

/// Full ground-truth verdict, with the evidence behind it.
struct Classification {
    Multiplicity multiplicity;
    SlopeData slopes;
    bool cone_condition = false;  // max(|s1|, |s2|) >= |s|
    bool on_plane_l = false;      // camera on the double-root plane
};

namespace tol {
inline constexpr double kSingularAngle = 1e-9;
inline constexpr double kPlane = 1e-9;
}  // namespace tol

/// Detects the singular families from observed angles. Colinear is tested
/// first, then VerticalLandmarkLine, then HorizontalCoplanar.
std::optional<SingularCase> detect_singular(const LandmarkPair& landmarks,
                                            const ObservationAngles& angles,
                                            double angle_tol = tol::kSingularAngle);

SlopeData slopes(const LandmarkPair& landmarks, const Vec3& camera);

/// Unit normal of the plane through both landmarks and the horizontal line
/// through landmark 1 perpendicular to the landmark line. Requires a
/// non-vertical landmark line.
Vec3 plane_l_normal(const LandmarkPair& landmarks);

/// Solution multiplicity for a camera at a known position. Throws
/// CameraAtLandmark if the camera sits on a landmark.
Classification classify_ground_truth(const LandmarkPair& landmarks, const Vec3& camera);

inline Multiplicity multiplicity_from_ground_truth(const LandmarkPair& landmarks,
                                                   const Vec3& camera) {
    return classify_ground_truth(landmarks, camera).multiplicity;
}

/// Closed-form b^2 - 4ac for landmarks at (-A, 0, -B) and (A, 0, B) and a
/// camera at c, with the quadratic solved for the distance to landmark 2.
double discriminant_closed_form(double half_width, double half_height, const Vec3& camera);

}  // namespace p2pa
