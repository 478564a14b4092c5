#pragma once

#include <p2pa/p2pa.h>

#include <array>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace p2pa_cli {

using Json = nlohmann::ordered_json;

/// Malformed or invalid input; exit code 1.
class InputError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct Camera {
    p2pa_vec3 position{};
    std::optional<std::array<double, 9>> rotation;  // row-major, object -> camera
};

struct Scene {
    std::array<std::string, 2> ids;
    p2pa_landmarks landmarks{};
    std::optional<Camera> camera;
    std::optional<p2pa_observation> observation;
};

/// Parses JSON text, turning syntax errors into "source:line:col: ..." messages.
Json parse_json(const std::string& text, const std::string& source);
std::string read_file(const std::string& path);

Scene scene_from_json(const Json& j);
Json scene_to_json(const Scene& scene);

p2pa_sweep_config sweep_config_from_json(const Json& j);

Json vec_json(p2pa_vec3 v);
Json rotation_json(const double* r);
/// Finite numbers pass through; infinities become "inf"/"-inf", NaN null.
Json slope_json(double s);

}  // namespace p2pa_cli
