#include "classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "error.hpp"

namespace p2pa {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double slope_between(const Vec3& from, const Vec3& to) {
    const double rise = to.z() - from.z();
    const double run = (to - from).head<2>().norm();
    if (run <= tol::kSingularAngle * std::abs(rise)) {
        return rise >= 0.0 ? kInf : -kInf;
    }
    return rise / run;
}

}  // namespace

LandmarkPair::LandmarkPair(const Vec3& m1, const Vec3& m2) : m1_(m1), m2_(m2) {
    if (!m1.allFinite() || !m2.allFinite()) {
        throw Error(ErrorCode::InvalidArgument, "landmark coordinates must be finite");
    }
    if ((m2 - m1).norm() == 0.0) {
        throw Error(ErrorCode::InvalidArgument, "landmarks coincide");
    }
}

std::string_view to_string(SingularCase c) noexcept {
    switch (c) {
        case SingularCase::Colinear: return "colinear";
        case SingularCase::VerticalLandmarkLine: return "vertical-landmark-line";
        case SingularCase::HorizontalCoplanar: return "horizontal-coplanar";
    }
    return "unknown";
}

std::optional<SingularCase> detect_singular(const LandmarkPair& landmarks,
                                            const ObservationAngles& angles, double angle_tol) {
    const double r1 = angles.rho1;
    const double r2 = angles.rho2;
    const double beta = angles.beta;
    auto at_pole = [&](double rho) { return rho <= angle_tol || rho >= kPi - angle_tol; };
    auto near = [&](double a, double b) { return std::abs(a - b) <= angle_tol; };

    const bool beta_zero = std::abs(beta) <= angle_tol;
    const bool beta_pi = kPi - std::abs(beta) <= angle_tol;
    if ((at_pole(r1) && at_pole(r2)) || (beta_zero && near(r1, r2)) ||
        (beta_pi && near(r1, kPi - r2))) {
        return SingularCase::Colinear;
    }
    // A vertical landmark line admits a whole circle of positions whatever
    // the angles say, so beta is not consulted here.
    if (landmarks.horizontal_distance() <= angle_tol * landmarks.baseline()) {
        return SingularCase::VerticalLandmarkLine;
    }
    if (near(r1, kPi / 2) && near(r2, kPi / 2)) {
        return SingularCase::HorizontalCoplanar;
    }
    return std::nullopt;
}

SlopeData slopes(const LandmarkPair& landmarks, const Vec3& camera) {
    return SlopeData{
        slope_between(landmarks.m1(), landmarks.m2()),
        slope_between(camera, landmarks.m1()),
        slope_between(camera, landmarks.m2()),
    };
}

Vec3 plane_l_normal(const LandmarkPair& landmarks) {
    const Vec3 along = landmarks.m2() - landmarks.m1();
    const Vec3 horizontal_perp = Vec3::UnitZ().cross(along).normalized();
    return along.cross(horizontal_perp).normalized();
}

Classification classify_ground_truth(const LandmarkPair& landmarks, const Vec3& camera) {
    const Vec3& m1 = landmarks.m1();
    const Vec3& m2 = landmarks.m2();
    const double baseline = landmarks.baseline();
    if (!camera.allFinite()) {
        throw Error(ErrorCode::InvalidArgument, "camera position must be finite");
    }
    if ((camera - m1).norm() <= tol::kPlane * baseline ||
        (camera - m2).norm() <= tol::kPlane * baseline) {
        throw Error(ErrorCode::CameraAtLandmark, "camera coincides with a landmark");
    }
    const double scale = std::max({baseline, (camera - m1).norm(), (camera - m2).norm()});

    Classification out;
    auto infinite = [&](SingularCase c) {
        out.multiplicity = Multiplicity{MultiplicityKind::Infinite, c};
        return out;
    };

    const Vec3 along = (m2 - m1) / baseline;
    if ((camera - m1).cross(along).norm() <= tol::kPlane * scale) {
        return infinite(SingularCase::Colinear);
    }
    if (landmarks.horizontal_distance() <= tol::kPlane * baseline) {
        return infinite(SingularCase::VerticalLandmarkLine);
    }
    if (std::max(std::abs(camera.z() - m1.z()), std::abs(camera.z() - m2.z())) <=
        tol::kPlane * scale) {
        return infinite(SingularCase::HorizontalCoplanar);
    }

    out.slopes = slopes(landmarks, camera);
    const double s = std::abs(out.slopes.s);
    const double camera_slope = std::max(std::abs(out.slopes.s1), std::abs(out.slopes.s2));
    out.cone_condition = camera_slope >= s * (1.0 - tol::kPlane);
    out.on_plane_l =
        std::abs((camera - m1).dot(plane_l_normal(landmarks))) <= tol::kPlane * scale;

    const bool double_root = s > 0.0 && std::isfinite(camera_slope) && out.on_plane_l;
    out.multiplicity.kind =
        (out.cone_condition || double_root) ? MultiplicityKind::One : MultiplicityKind::Two;
    return out;
}

double discriminant_closed_form(double half_width, double half_height, const Vec3& camera) {
    const double a = half_width;
    const double b = half_height;
    if (a == 0.0 || b == 0.0) {
        throw Error(ErrorCode::InvalidArgument, "canonical half extents must be non-zero");
    }
    const double c1 = camera.x();
    const double c2 = camera.y();
    const double c3 = camera.z();
    // (A^2 - 2A c1 + c1^2 + c2^2) written without the cancellation.
    const double horizontal_sq = (c1 - a) * (c1 - a) + c2 * c2;
    const double height_sq = (b + c3) * (b + c3);
    if (horizontal_sq < 1e-12 || height_sq < 1e-12) {
        throw Error(ErrorCode::DegenerateDenominator, "closed-form denominator vanishes");
    }
    const double lever = b * c1 - a * c3;
    return 64.0 * a * a * lever * lever / (horizontal_sq * height_sq);
}

}  // namespace p2pa
