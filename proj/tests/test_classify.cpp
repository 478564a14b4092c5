#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "classify.hpp"
#include "error.hpp"
#include "solver.hpp"
#include "support.hpp"

using namespace p2pa;
using p2pa::testing::kPi;
using p2pa::testing::true_angles;
using p2pa::testing::uniform;

namespace {

const LandmarkPair kLevel(Vec3(0, 0, 0), Vec3(150, 0, 0));
const LandmarkPair kSloped(Vec3(0, 0, 0), Vec3(100, 0, 100));
const LandmarkPair kVertical(Vec3(10, 20, 0), Vec3(10, 20, 80));

MultiplicityKind kind(const LandmarkPair& l, const Vec3& c) {
    return multiplicity_from_ground_truth(l, c).kind;
}

}  // namespace

TEST_CASE("landmark pair derived quantities") {
    const LandmarkPair l(Vec3(1, 2, 3), Vec3(4, 6, -1));
    CHECK(l.height_difference() == -4.0);
    CHECK(l.horizontal_distance() == doctest::Approx(5.0));
    CHECK_THROWS_AS(LandmarkPair(Vec3(1, 1, 1), Vec3(1, 1, 1)), Error);
}

TEST_CASE("detect singular cases from angles") {
    CHECK(detect_singular(kLevel, {0.3, 0.3, 0.0}) == SingularCase::Colinear);
    CHECK(detect_singular(kLevel, {0.3, kPi - 0.3, kPi}) == SingularCase::Colinear);
    CHECK(detect_singular(kLevel, {0.0, kPi, 0.0}) == SingularCase::Colinear);
    CHECK(detect_singular(kVertical, {1.0, 1.2, 0.0}) == SingularCase::VerticalLandmarkLine);
    CHECK(detect_singular(kLevel, {kPi / 2, kPi / 2, 0.7}) == SingularCase::HorizontalCoplanar);
    CHECK_FALSE(detect_singular(kLevel, {1.0, 1.2, 0.3}).has_value());
    CHECK_FALSE(detect_singular(kLevel, {kPi / 2, kPi / 2 + 1e-6, 0.7}).has_value());
    CHECK(detect_singular(kLevel, {kPi / 2, kPi / 2 + 1e-6, 0.7}, 1e-5) ==
          SingularCase::HorizontalCoplanar);
}

TEST_CASE("detection order: colinear wins over horizontal coplanar") {
    // Camera between two co-altitude landmarks on their line.
    const auto a = true_angles(kLevel.m1(), kLevel.m2(), Vec3(40, 0, 0));
    CHECK(a.beta == kPi);
    CHECK(detect_singular(kLevel, a) == SingularCase::Colinear);
}

TEST_CASE("multiplicity from ground truth") {
    CHECK(kind(kLevel, Vec3(75, -500, 300)) == MultiplicityKind::One);

    // s = 1, s1 = -50/200, s2 = 50/100.
    const Classification two = classify_ground_truth(kSloped, Vec3(200, 0, 50));
    CHECK(two.multiplicity.kind == MultiplicityKind::Two);
    CHECK(two.slopes.s == doctest::Approx(1.0));
    CHECK(two.slopes.s1 == doctest::Approx(-0.25));
    CHECK(two.slopes.s2 == doctest::Approx(0.5));
    CHECK_FALSE(two.on_plane_l);

    const Classification above = classify_ground_truth(kSloped, Vec3(0, 0, 50));
    CHECK(above.multiplicity.kind == MultiplicityKind::One);
    CHECK(std::isinf(above.slopes.s1));
    CHECK(above.cone_condition);

    const Multiplicity flat = multiplicity_from_ground_truth(kLevel, Vec3(75, -500, 0));
    CHECK(flat.kind == MultiplicityKind::Infinite);
    CHECK(flat.singular == SingularCase::HorizontalCoplanar);

    CHECK(multiplicity_from_ground_truth(kLevel, Vec3(300, 0, 0)).singular ==
          SingularCase::Colinear);
    CHECK(multiplicity_from_ground_truth(kVertical, Vec3(0, 0, 5)).singular ==
          SingularCase::VerticalLandmarkLine);
    // On the vertical landmark line itself the camera is colinear.
    CHECK(multiplicity_from_ground_truth(kVertical, Vec3(10, 20, 200)).singular ==
          SingularCase::Colinear);

    CHECK_THROWS_AS(classify_ground_truth(kLevel, Vec3(150, 0, 0)), Error);
    try {
        classify_ground_truth(kLevel, Vec3(0, 0, 0));
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::CameraAtLandmark);
    }
}

TEST_CASE("camera on plane L has a unique solution") {
    // Landmarks (-A,0,-B) and (A,0,B): L is B*x = A*z.
    const double half_w = 60, half_h = 40;
    const LandmarkPair l(Vec3(-half_w, 0, -half_h), Vec3(half_w, 0, half_h));
    std::mt19937_64 rng(21);
    int checked = 0;
    for (int k = 0; k < 500; ++k) {
        const double t = uniform(rng, -8, 8);
        const Vec3 c(t * half_w, uniform(rng, -600, 600), t * half_h);
        if (p2pa::testing::singular_clearance(l, c) < 1.0) continue;
        const Classification cl = classify_ground_truth(l, c);
        CHECK(cl.on_plane_l);
        CHECK(cl.multiplicity.kind == MultiplicityKind::One);
        ++checked;
    }
    CHECK(checked > 400);
}

TEST_CASE("cameras exactly on the uniqueness cone classify as One") {
    const LandmarkPair l(Vec3(0, 0, 0), Vec3(100, 0, 50));  // s = 0.5
    std::mt19937_64 rng(23);
    for (int k = 0; k < 1000; ++k) {
        const double r = uniform(rng, 10, 1000);
        const double phi = uniform(rng, -kPi, kPi);
        // Upward cone at the lower landmark, downward cone at the upper one.
        const bool lower = k % 2 == 0;
        const Vec3 apex = lower ? l.m1() : l.m2();
        const double dz = lower ? 0.5 * r : -0.5 * r;
        const Vec3 c = apex + Vec3(r * std::cos(phi), r * std::sin(phi), dz);
        if (p2pa::testing::singular_clearance(l, c) < 1.0) continue;
        CHECK(kind(l, c) == MultiplicityKind::One);
    }
}

TEST_CASE("multiplicity is scale invariant") {
    std::mt19937_64 rng(29);
    for (int k = 0; k < 2000; ++k) {
        const auto gt = p2pa::testing::sample_ground_truth(rng);
        const double scale = std::exp(uniform(rng, std::log(1e-3), std::log(1e3)));
        const LandmarkPair scaled(gt.landmarks.m1() * scale, gt.landmarks.m2() * scale);
        CHECK(kind(gt.landmarks, gt.pose.position) == kind(scaled, gt.pose.position * scale));
    }
}

TEST_CASE("closed-form discriminant") {
    CHECK(discriminant_closed_form(75, 50, Vec3(0, -500, 0)) == 0.0);
    CHECK(discriminant_closed_form(75, 50, Vec3(75, -500, 50)) == 0.0);

    // Compare with b^2 - 4ac built from the observed angles (i = 1).
    const Vec3 c(30, -400, -20);
    const LandmarkPair l(Vec3(-75, 0, -50), Vec3(75, 0, 50));
    const QuadraticCoeffs q = quadratic_coeffs(true_angles(l.m1(), l.m2(), c), 1,
                                               l.height_difference(), l.horizontal_distance());
    const double from_coeffs = q.b * q.b - 4 * q.a * q.c;
    const double closed = discriminant_closed_form(75, 50, c);
    CHECK(closed > 0);
    CHECK(std::abs(from_coeffs - closed) <= 1e-6 * closed);

    CHECK_THROWS_AS(discriminant_closed_form(75, 50, Vec3(0, 0, -50)), Error);
    CHECK_THROWS_AS(discriminant_closed_form(75, 50, Vec3(75, 0, 10)), Error);
    CHECK_THROWS_AS(discriminant_closed_form(0, 50, Vec3(1, 1, 1)), Error);
}

TEST_CASE("closed-form discriminant is non-negative and vanishes on plane L") {
    std::mt19937_64 rng(31);
    for (int k = 0; k < 2000; ++k) {
        const double a = uniform(rng, -200, 200);
        const double b = uniform(rng, -200, 200);
        if (std::abs(a) < 1 || std::abs(b) < 1) continue;
        const Vec3 c = p2pa::testing::uniform_box(rng, 1000);
        if (std::abs(c.z() + b) < 1 || std::hypot(c.x() - a, c.y()) < 1) continue;
        CHECK(discriminant_closed_form(a, b, c) >= 0.0);

        const double t = uniform(rng, -5, 5);
        const Vec3 on_l(t * a, c.y(), t * b);
        if (std::abs(on_l.z() + b) < 1 || std::hypot(on_l.x() - a, on_l.y()) < 1) continue;
        const double scale = std::pow(std::max({std::abs(a), std::abs(b), on_l.norm()}), 2);
        CHECK(discriminant_closed_form(a, b, on_l) <= 1e-9 * scale);
    }
}
