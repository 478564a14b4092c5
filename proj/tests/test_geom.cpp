#include <doctest.h>

#include <cmath>
#include <random>

#include "error.hpp"
#include "geom.hpp"
#include "support.hpp"

using namespace p2pa;
using p2pa::testing::kPi;

namespace {

void check_vec(const Vec3& got, const Vec3& want, double tol = 1e-15) {
    CHECK(std::abs(got.x() - want.x()) <= tol);
    CHECK(std::abs(got.y() - want.y()) <= tol);
    CHECK(std::abs(got.z() - want.z()) <= tol);
}

ErrorCode code_of(auto&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected p2pa::Error");
    return ErrorCode::InvalidArgument;
}

UnitVec3 unit(double x, double y, double z) { return UnitVec3::normalized(Vec3(x, y, z)); }

}  // namespace

TEST_CASE("pinhole rays") {
    check_vec(pinhole_ray(0, 0, 1).vec(), Vec3(0, 1, 0));
    check_vec(pinhole_ray(1, 0, 1).vec(), Vec3(-1 / std::sqrt(2.0), 1 / std::sqrt(2.0), 0));
    // |(3, -12, 4)| = 13
    check_vec(pinhole_ray(3, 4, 12).vec(), Vec3(-3.0 / 13, 12.0 / 13, -4.0 / 13));
    CHECK(code_of([] { pinhole_ray(1, 1, 0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("spherical rays") {
    check_vec(spherical_ray(0, 1.234).vec(), Vec3(0, 0, 1));
    check_vec(spherical_ray(kPi / 2, 0).vec(), Vec3(1, 0, 0), 1e-16);
    check_vec(spherical_ray(kPi / 2, kPi / 2).vec(), Vec3(0, 1, 0), 1e-16);
    CHECK(code_of([] { spherical_ray(-0.1, 0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("up from accelerometer") {
    check_vec(up_from_accelerometer(Vec3(0, 0, 9.81)).vec(), Vec3(0, 0, 1));
    check_vec(up_from_accelerometer(Vec3(0, 9.81, 0)).vec(), Vec3(0, 1, 0));
    check_vec(up_from_accelerometer(Vec3(1, 2, 2)).vec(), Vec3(1.0 / 3, 2.0 / 3, 2.0 / 3));
    CHECK(code_of([] { up_from_accelerometer(Vec3(1e-7, 0, 0)); }) == ErrorCode::NearZeroVector);
}

TEST_CASE("reduce to angles") {
    SUBCASE("vertical ray forces beta to zero") {
        const auto a = reduce_to_angles({unit(0, 0, -1), unit(1, 0, 0), unit(0, 0, 1)});
        CHECK(a.rho1 == doctest::Approx(kPi).epsilon(1e-15));
        CHECK(a.rho2 == doctest::Approx(kPi / 2).epsilon(1e-15));
        CHECK(a.beta == 0.0);
    }
    SUBCASE("quarter turn counterclockwise") {
        const auto a = reduce_to_angles({unit(1, 0, 0), unit(0, 1, 0), unit(0, 0, 1)});
        CHECK(a.rho1 == doctest::Approx(kPi / 2));
        CHECK(a.rho2 == doctest::Approx(kPi / 2));
        CHECK(a.beta == doctest::Approx(kPi / 2).epsilon(1e-15));
    }
    SUBCASE("quarter turn clockwise") {
        // q1 = (1,0,0)/sqrt2, q2 = (0,-1,0)/sqrt2; (q1 x q2).u = -1/2, q1.q2 = 0
        const auto a = reduce_to_angles({unit(1, 0, 1), unit(0, -1, 1), unit(0, 0, 1)});
        CHECK(a.rho1 == doctest::Approx(kPi / 4).epsilon(1e-15));
        CHECK(a.rho2 == doctest::Approx(kPi / 4).epsilon(1e-15));
        CHECK(a.beta == doctest::Approx(-kPi / 2).epsilon(1e-15));
    }
    SUBCASE("opposite rays report +pi") {
        const auto a = reduce_to_angles({unit(1, 0, 0), unit(-1, -0.0, 0), unit(0, 0, 1)});
        CHECK(a.beta == kPi);
        const auto b = reduce_to_angles({unit(1, 0, 0), unit(-1, 0.0, 0), unit(0, 0, 1)});
        CHECK(b.beta == kPi);
    }
}

TEST_CASE("reduce_to_angles is invariant under yaw about up") {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 2000; ++k) {
        const Rotation tilt = p2pa::testing::random_rotation(rng);
        const UnitVec3 u = tilt * UnitVec3::unit_z();
        const UnitVec3 v1 = UnitVec3::normalized(p2pa::testing::uniform_box(rng, 1.0));
        const UnitVec3 v2 = UnitVec3::normalized(p2pa::testing::uniform_box(rng, 1.0));
        const auto before = reduce_to_angles({v1, v2, u});

        const double yaw = p2pa::testing::uniform(rng, -kPi, kPi);
        const Eigen::AngleAxisd spin(yaw, u.vec());
        const auto after = reduce_to_angles(
            {UnitVec3::normalized(spin * v1.vec()), UnitVec3::normalized(spin * v2.vec()), u});
        CHECK(std::abs(after.rho1 - before.rho1) < 1e-9);
        CHECK(std::abs(after.rho2 - before.rho2) < 1e-9);
        CHECK(std::abs(wrap_angle(after.beta - before.beta)) < 1e-9);
    }
}

TEST_CASE("beta is antisymmetric in the landmark order") {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 2000; ++k) {
        const UnitVec3 u = UnitVec3::normalized(p2pa::testing::uniform_box(rng, 1.0));
        const UnitVec3 v1 = UnitVec3::normalized(p2pa::testing::uniform_box(rng, 1.0));
        const UnitVec3 v2 = UnitVec3::normalized(p2pa::testing::uniform_box(rng, 1.0));
        const auto a = reduce_to_angles({v1, v2, u});
        const auto b = reduce_to_angles({v2, v1, u});
        CHECK(a.rho1 == b.rho2);
        CHECK(a.rho2 == b.rho1);
        if (a.beta != kPi) CHECK(std::abs(a.beta + b.beta) < 1e-15);
    }
}

TEST_CASE("unit vectors have unit norm") {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 1000; ++k) {
        const Vec3 v = p2pa::testing::uniform_box(rng, 1e3);
        CHECK(std::abs(UnitVec3::normalized(v).vec().norm() - 1.0) < 1e-12);
        CHECK(std::abs(pinhole_ray(v.x(), v.y(), std::abs(v.z()) + 1.0).vec().norm() - 1.0) < 1e-12);
    }
    CHECK(code_of([] { UnitVec3::from_unit(Vec3(1, 1, 0)); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("signed horizontal angle") {
    CHECK(signed_horizontal_angle({1, 0}, {0, 0}, {0, 1}) == doctest::Approx(kPi / 2));
    CHECK(signed_horizontal_angle({1, 0}, {0, 0}, {1, 0}) == 0.0);
    CHECK(signed_horizontal_angle({1, 0}, {0, 0}, {-1, -1}) == doctest::Approx(-3 * kPi / 4));
    CHECK(signed_horizontal_angle({1, 0}, {0, 0}, {-1, -0.0}) == kPi);
    CHECK(code_of([] { signed_horizontal_angle({0, 0}, {0, 0}, {1, 0}); }) ==
          ErrorCode::DegenerateVertex);
}

TEST_CASE("signed horizontal angle agrees with reduce_to_angles") {
    // Camera at c looking at landmarks a and b with up = +z.
    std::mt19937_64 rng(5);
    for (int k = 0; k < 1000; ++k) {
        const Vec3 a = p2pa::testing::uniform_box(rng, 100);
        const Vec3 b = p2pa::testing::uniform_box(rng, 100);
        const Vec3 c = p2pa::testing::uniform_box(rng, 100);
        const auto angles = reduce_to_angles({UnitVec3::normalized(a - c),
                                              UnitVec3::normalized(b - c), UnitVec3::unit_z()});
        CHECK(angles.beta ==
              doctest::Approx(signed_horizontal_angle(a.head<2>(), c.head<2>(), b.head<2>())));
    }
}

TEST_CASE("rotation from two pairs") {
    const auto x = UnitVec3::unit_x();
    const auto y = UnitVec3::unit_y();
    const auto z = UnitVec3::unit_z();

    CHECK(rotation_from_two_pairs(x, y, x, y).matrix().isApprox(Mat3::Identity(), 1e-15));

    Mat3 quarter;
    quarter << 0, -1, 0, 1, 0, 0, 0, 0, 1;
    CHECK((rotation_from_two_pairs(x, y, y, -x).matrix() - quarter).norm() < 1e-15);

    // Half turn about (x + z)/sqrt2 is 2nn^T - I.
    Mat3 half;
    half << 0, 0, 1, 0, -1, 0, 1, 0, 0;
    const Rotation r = rotation_from_two_pairs(x, z, z, x);
    CHECK((r.matrix() - half).norm() < 1e-15);
    CHECK((r * x.vec() - z.vec()).norm() < 1e-15);
    CHECK((r * z.vec() - x.vec()).norm() < 1e-15);
    CHECK(r.matrix().determinant() == doctest::Approx(1.0));

    CHECK(code_of([&] { rotation_from_two_pairs(x, x, y, z); }) == ErrorCode::ParallelInputs);
    CHECK(code_of([&] { rotation_from_two_pairs(x, y, x, unit(1, 1, 0)); }) ==
          ErrorCode::IncongruentPairs);
}

TEST_CASE("rotation from two pairs recovers random rotations") {
    std::mt19937_64 rng(13);
    for (int k = 0; k < 2000; ++k) {
        const Rotation truth = p2pa::testing::random_rotation(rng);
        const UnitVec3 a1 = UnitVec3::normalized(p2pa::testing::uniform_box(rng, 1.0));
        const UnitVec3 a2 = UnitVec3::normalized(p2pa::testing::uniform_box(rng, 1.0));
        if (a1.vec().cross(a2.vec()).norm() < 1e-3) continue;
        const Rotation r = rotation_from_two_pairs(a1, a2, truth * a1, truth * a2);
        const Mat3& m = r.matrix();
        CHECK((m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-8);
        CHECK(std::abs(m.determinant() - 1.0) < 1e-8);
        CHECK(((r * a1.vec()) - (truth * a1.vec())).cwiseAbs().maxCoeff() < 1e-8);
        CHECK(((r * a2.vec()) - (truth * a2.vec())).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("observation from angles realizes the angles") {
    std::mt19937_64 rng(17);
    for (int k = 0; k < 1000; ++k) {
        ObservationAngles a{p2pa::testing::uniform(rng, 0.01, kPi - 0.01),
                            p2pa::testing::uniform(rng, 0.01, kPi - 0.01),
                            p2pa::testing::uniform(rng, -kPi + 0.01, kPi)};
        const auto back = reduce_to_angles(observation_from_angles(a));
        CHECK(angle_residual(a, back) < 1e-12);
    }
}

TEST_CASE("rotation validation") {
    Mat3 reflect = Mat3::Identity();
    reflect(2, 2) = -1;
    CHECK(code_of([&] { Rotation::from_matrix(reflect); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] { Rotation::from_matrix(2 * Mat3::Identity()); }) ==
          ErrorCode::InvalidArgument);
}
