#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "classify.hpp"
#include "geom.hpp"
#include "solver.hpp"

namespace p2pa {

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Sensor noise. Landmark rays scatter uniformly over a spherical cap; each
/// accelerometer axis gets uniform noise in units of g.
struct NoiseModel {
    double direction_cone_radius = 0.0;  // rad
    double accel_noise_half_width = 0.0;  // fraction of g
    std::uint64_t seed = 0;

    /// 0.36 deg cap and +-0.001 g per axis.
    static NoiseModel desk_experiment(std::uint64_t seed = 0);
};

enum class AltitudeSpacing { Linear, Logarithmic };

struct SweepConfig {
    LandmarkPair landmarks{Vec3(0, 0, 0), Vec3(150, 0, 0)};
    Vec2 camera_horizontal{0.0, -500.0};
    double altitude_min = 0.001;  // mm above landmark 1
    double altitude_max = 500.0;
    int num_positions = 1000;
    int samples_per_position = 1000;
    NoiseModel noise = NoiseModel::desk_experiment();
    AltitudeSpacing spacing = AltitudeSpacing::Logarithmic;
    /// Worker threads; 0 picks the hardware concurrency. Output does not
    /// depend on this.
    unsigned threads = 1;
};

struct SweepRow {
    double altitude = 0.0;
    double rms_total = 0.0;
    double rms_x = 0.0;
    double rms_y = 0.0;
    double rms_z = 0.0;
    long failures = 0;  // samples with no pose; excluded from the RMS
};

/// Uniform over the spherical cap of angular radius `cone_radius` about v.
UnitVec3 perturb_direction(const UnitVec3& v, double cone_radius, Rng& rng);

/// normalize(u + e) with each component of e uniform in [-half_width, half_width].
UnitVec3 perturb_gravity(const UnitVec3& u, double half_width, Rng& rng);

ImageObservation synthesize_observation(const CameraPose& pose, const LandmarkPair& landmarks,
                                        const std::optional<NoiseModel>& noise, Rng& rng);

/// Level camera at `position` whose optical axis (+y in camera coordinates)
/// points horizontally at the landmark midpoint.
CameraPose facing_midpoint(const Vec3& position, const LandmarkPair& landmarks);

/// Throws ConfigInvalid describing the first problem found.
void validate(const SweepConfig& config);

std::vector<double> sweep_altitudes(const SweepConfig& config);

std::vector<SweepRow> run_sweep(const SweepConfig& config);

/// Header `altitude_mm,rms_total_mm,rms_x_mm,rms_y_mm,rms_z_mm,failures`,
/// then one row per altitude at round-trip precision.
void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows);

struct SweepSummary {
    double min_rms_altitude = 0.0;
    double min_rms = 0.0;
    /// Smallest altitude whose rms_total is below the threshold.
    std::optional<double> first_below;
};

SweepSummary summarize(std::span<const SweepRow> rows, double threshold_mm = 20.0);

}  // namespace p2pa
