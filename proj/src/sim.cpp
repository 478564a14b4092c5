#include "sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "error.hpp"

namespace p2pa {

namespace {

constexpr double kPi = std::numbers::pi;

void fail(const std::string& what) { throw Error(ErrorCode::ConfigInvalid, what); }

SweepRow run_position(const SweepConfig& config, double altitude, std::uint64_t position_index) {
    const Vec3 truth_position(config.camera_horizontal.x(), config.camera_horizontal.y(),
                              config.landmarks.m1().z() + altitude);
    const CameraPose truth = facing_midpoint(truth_position, config.landmarks);
    Rng rng(config.noise.seed ^ position_index);

    double sx = 0.0, sy = 0.0, sz = 0.0;
    long solved = 0;
    SweepRow row;
    row.altitude = altitude;
    for (int k = 0; k < config.samples_per_position; ++k) {
        const ImageObservation obs =
            synthesize_observation(truth, config.landmarks, config.noise, rng);
        const SolveResult result = solve_labeled(obs, config.landmarks);
        if (result.poses.empty()) {
            ++row.failures;
            continue;
        }
        const SolvedPose* best = &result.poses.front();
        for (const SolvedPose& p : result.poses) {
            if ((p.pose.position - truth_position).norm() <
                (best->pose.position - truth_position).norm()) {
                best = &p;
            }
        }
        const Vec3 err = best->pose.position - truth_position;
        sx += err.x() * err.x();
        sy += err.y() * err.y();
        sz += err.z() * err.z();
        ++solved;
    }
    if (solved == 0) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        row.rms_total = row.rms_x = row.rms_y = row.rms_z = nan;
        return row;
    }
    const double n = static_cast<double>(solved);
    row.rms_x = std::sqrt(sx / n);
    row.rms_y = std::sqrt(sy / n);
    row.rms_z = std::sqrt(sz / n);
    row.rms_total = std::sqrt((sx + sy + sz) / n);
    return row;
}

}  // namespace

NoiseModel NoiseModel::desk_experiment(std::uint64_t seed) {
    return NoiseModel{0.36 * kPi / 180.0, 0.001, seed};
}

UnitVec3 perturb_direction(const UnitVec3& v, double cone_radius, Rng& rng) {
    if (cone_radius == 0.0) return v;
    if (!(cone_radius > 0.0 && cone_radius < kPi / 2)) {
        throw Error(ErrorCode::InvalidArgument, "cone radius must lie in [0, pi/2)");
    }
    // Uniform in cos(theta) gives equal probability per unit cap area.
    const double cos_min = std::cos(cone_radius);
    const double cos_theta = 1.0 - uniform01(rng) * (1.0 - cos_min);
    const double sin_theta = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
    const double phi = 2.0 * kPi * uniform01(rng);

    const Vec3& axis = v.vec();
    const Vec3 helper = std::abs(axis.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    const Vec3 e1 = axis.cross(helper).normalized();
    const Vec3 e2 = axis.cross(e1);
    return UnitVec3::normalized(cos_theta * axis +
                                sin_theta * (std::cos(phi) * e1 + std::sin(phi) * e2));
}

UnitVec3 perturb_gravity(const UnitVec3& u, double half_width, Rng& rng) {
    if (half_width == 0.0) return u;
    if (!(half_width > 0.0 && half_width <= 0.1)) {
        throw Error(ErrorCode::InvalidArgument, "accelerometer noise must lie in [0, 0.1] g");
    }
    Vec3 noisy = u.vec();
    for (int k = 0; k < 3; ++k) noisy[k] += half_width * (2.0 * uniform01(rng) - 1.0);
    return UnitVec3::normalized(noisy);
}

ImageObservation synthesize_observation(const CameraPose& pose, const LandmarkPair& landmarks,
                                        const std::optional<NoiseModel>& noise, Rng& rng) {
    ImageObservation obs = forward_observation(pose, landmarks);
    if (!noise) return obs;
    obs.v1 = perturb_direction(obs.v1, noise->direction_cone_radius, rng);
    obs.v2 = perturb_direction(obs.v2, noise->direction_cone_radius, rng);
    obs.u = perturb_gravity(obs.u, noise->accel_noise_half_width, rng);
    return obs;
}

CameraPose facing_midpoint(const Vec3& position, const LandmarkPair& landmarks) {
    Vec3 forward = 0.5 * (landmarks.m1() + landmarks.m2()) - position;
    forward.z() = 0.0;
    if (forward.norm() <= 1e-12 * landmarks.baseline()) forward = Vec3::UnitY();
    CameraPose pose;
    pose.position = position;
    pose.rotation = rotation_from_two_pairs(UnitVec3::normalized(forward), UnitVec3::unit_z(),
                                            UnitVec3::unit_y(), UnitVec3::unit_z());
    return pose;
}

void validate(const SweepConfig& config) {
    if (!(config.altitude_min < config.altitude_max)) fail("altitude range must satisfy min < max");
    if (config.spacing == AltitudeSpacing::Logarithmic && !(config.altitude_min > 0.0)) {
        fail("logarithmic spacing needs a positive minimum altitude");
    }
    if (config.num_positions < 1) fail("num_positions must be at least 1");
    if (config.samples_per_position < 1) fail("samples_per_position must be at least 1");
    const NoiseModel& noise = config.noise;
    if (!(noise.direction_cone_radius >= 0.0 && noise.direction_cone_radius < kPi / 2)) {
        fail("direction cone radius must lie in [0, pi/2)");
    }
    if (!(noise.accel_noise_half_width >= 0.0 && noise.accel_noise_half_width <= 0.1)) {
        fail("accelerometer noise must lie in [0, 0.1] g");
    }
    if (!config.camera_horizontal.allFinite()) fail("camera position must be finite");
    for (double altitude : {config.altitude_min, config.altitude_max}) {
        const Vec3 camera(config.camera_horizontal.x(), config.camera_horizontal.y(),
                          config.landmarks.m1().z() + altitude);
        try {
            const Multiplicity m = multiplicity_from_ground_truth(config.landmarks, camera);
            if (m.kind == MultiplicityKind::Infinite) {
                std::ostringstream os;
                os << "camera at altitude " << altitude
                   << " is singular: " << to_string(*m.singular);
                fail(os.str());
            }
        } catch (const Error& e) {
            if (e.code() == ErrorCode::ConfigInvalid) throw;
            fail(e.what());
        }
    }
}

std::vector<double> sweep_altitudes(const SweepConfig& config) {
    const int n = config.num_positions;
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double t = n == 1 ? 0.0 : static_cast<double>(k) / (n - 1);
        if (config.spacing == AltitudeSpacing::Logarithmic) {
            const double lo = std::log(config.altitude_min);
            const double hi = std::log(config.altitude_max);
            out[k] = std::exp(lo + t * (hi - lo));
        } else {
            out[k] = config.altitude_min + t * (config.altitude_max - config.altitude_min);
        }
    }
    out.front() = config.altitude_min;
    if (n > 1) out.back() = config.altitude_max;
    return out;
}

std::vector<SweepRow> run_sweep(const SweepConfig& config) {
    validate(config);
    const std::vector<double> altitudes = sweep_altitudes(config);
    std::vector<SweepRow> rows(altitudes.size());

    unsigned workers = config.threads == 0 ? std::thread::hardware_concurrency() : config.threads;
    workers = std::clamp<unsigned>(workers, 1, static_cast<unsigned>(rows.size()));
    auto work = [&](unsigned worker) {
        for (std::size_t k = worker; k < rows.size(); k += workers) {
            rows[k] = run_position(config, altitudes[k], k);
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }
    return rows;
}

void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows) {
    const auto old_precision = os.precision(17);
    os << "altitude_mm,rms_total_mm,rms_x_mm,rms_y_mm,rms_z_mm,failures\n";
    for (const SweepRow& r : rows) {
        os << r.altitude << ',' << r.rms_total << ',' << r.rms_x << ',' << r.rms_y << ','
           << r.rms_z << ',' << r.failures << '\n';
    }
    os.precision(old_precision);
}

SweepSummary summarize(std::span<const SweepRow> rows, double threshold_mm) {
    SweepSummary s;
    s.min_rms = std::numeric_limits<double>::infinity();
    for (const SweepRow& r : rows) {
        if (std::isnan(r.rms_total)) continue;
        if (r.rms_total < s.min_rms) {
            s.min_rms = r.rms_total;
            s.min_rms_altitude = r.altitude;
        }
        if (r.rms_total < threshold_mm && (!s.first_below || r.altitude < *s.first_below)) {
            s.first_below = r.altitude;
        }
    }
    return s;
}

}  // namespace p2pa
