#include "scene.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <sstream>

namespace p2pa_cli {

namespace {

[[noreturn]] void bad(const std::string& path, const std::string& what) {
    throw InputError((path.empty() ? std::string("/") : path) + ": " + what);
}

void allow_keys(const Json& obj, const std::string& path, std::initializer_list<const char*> keys) {
    if (!obj.is_object()) bad(path, "expected an object");
    for (const auto& item : obj.items()) {
        const bool known = std::any_of(keys.begin(), keys.end(),
                                       [&](const char* k) { return item.key() == k; });
        if (!known) bad(path + "/" + item.key(), "unknown field");
    }
}

const Json& member(const Json& obj, const char* key, const std::string& path) {
    const auto it = obj.find(key);
    if (it == obj.end()) bad(path + "/" + key, "missing field");
    return *it;
}

double number(const Json& j, const std::string& path) {
    if (!j.is_number()) bad(path, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) bad(path, "number out of range");
    return v;
}

double number_at(const Json& obj, const char* key, const std::string& path) {
    return number(member(obj, key, path), path + "/" + key);
}

p2pa_vec3 triple(const Json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 3) bad(path, "expected an array of 3 numbers");
    return {number(j[0], path + "/0"), number(j[1], path + "/1"), number(j[2], path + "/2")};
}

long long integer(const Json& j, const std::string& path, long long lo, long long hi) {
    if (!j.is_number_integer()) bad(path, "expected an integer");
    const long long v = j.get<long long>();
    if (v < lo || v > hi) {
        bad(path, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return v;
}

void check(p2pa_status status, const std::string& path) {
    if (status != P2PA_OK) bad(path, p2pa_last_error());
}

std::array<std::string, 2> parse_landmarks(const Json& j, const std::string& path,
                                           p2pa_landmarks& out) {
    if (!j.is_array() || j.size() != 2) bad(path, "expected exactly two landmarks");
    std::array<std::string, 2> ids;
    p2pa_vec3* slots[2] = {&out.m1, &out.m2};
    for (std::size_t k = 0; k < 2; ++k) {
        const std::string p = path + "/" + std::to_string(k);
        allow_keys(j[k], p, {"id", "x", "y", "z"});
        const Json& id = member(j[k], "id", p);
        if (id.is_string()) {
            ids[k] = id.get<std::string>();
        } else if (id.is_number_integer()) {
            ids[k] = std::to_string(id.get<long long>());
        } else {
            bad(p + "/id", "expected a string or integer");
        }
        *slots[k] = {number_at(j[k], "x", p), number_at(j[k], "y", p), number_at(j[k], "z", p)};
    }
    if (ids[0] == ids[1]) bad(path + "/1/id", "landmark ids must differ");
    return ids;
}

Camera parse_camera(const Json& j, const std::string& path) {
    allow_keys(j, path, {"position", "rotation"});
    Camera c;
    c.position = triple(member(j, "position", path), path + "/position");
    if (const auto it = j.find("rotation"); it != j.end()) {
        const std::string p = path + "/rotation";
        if (!it->is_array() || it->size() != 9) bad(p, "expected 9 numbers (row-major 3x3)");
        std::array<double, 9> r{};
        for (std::size_t k = 0; k < 9; ++k) r[k] = number((*it)[k], p + "/" + std::to_string(k));
        c.rotation = r;
    }
    return c;
}

p2pa_observation parse_observation(const Json& j, const std::string& path) {
    allow_keys(j, path, {"v1", "v2", "u", "pixels", "focal_mm", "accel", "angles"});
    const bool rays = j.contains("v1") || j.contains("v2") || j.contains("u");
    const bool pixels = j.contains("pixels") || j.contains("focal_mm") || j.contains("accel");
    const bool angles = j.contains("angles");
    if (int(rays) + int(pixels) + int(angles) != 1) {
        bad(path, "give exactly one of {v1, v2, u}, {pixels, focal_mm, accel} or {angles}");
    }

    p2pa_observation obs{};
    if (rays) {
        check(p2pa_make_observation(triple(member(j, "v1", path), path + "/v1"),
                                    triple(member(j, "v2", path), path + "/v2"),
                                    triple(member(j, "u", path), path + "/u"), &obs),
              path);
    } else if (pixels) {
        const std::string p = path + "/pixels";
        const Json& px = member(j, "pixels", path);
        allow_keys(px, p, {"x1", "y1", "x2", "y2"});
        const double f = number_at(j, "focal_mm", path);
        check(p2pa_pinhole_ray(number_at(px, "x1", p), number_at(px, "y1", p), f, &obs.v1),
              path + "/focal_mm");
        check(p2pa_pinhole_ray(number_at(px, "x2", p), number_at(px, "y2", p), f, &obs.v2),
              path + "/focal_mm");
        check(p2pa_up_from_accelerometer(triple(member(j, "accel", path), path + "/accel"),
                                         &obs.u),
              path + "/accel");
    } else {
        const std::string p = path + "/angles";
        const Json& a = member(j, "angles", path);
        allow_keys(a, p, {"rho1", "rho2", "beta"});
        const p2pa_angles in{number_at(a, "rho1", p), number_at(a, "rho2", p),
                             number_at(a, "beta", p)};
        check(p2pa_observation_from_angles(&in, &obs), p);
    }
    return obs;
}

}  // namespace

Json parse_json(const std::string& text, const std::string& source) {
    try {
        return Json::parse(text);
    } catch (const Json::parse_error& e) {
        std::size_t line = 1, col = 1;
        const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t k = 0; k < end; ++k) {
            if (text[k] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::string what = e.what();
        if (const auto pos = what.find("syntax error"); pos != std::string::npos) {
            what = what.substr(pos);
        }
        throw InputError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " +
                         what);
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path + ": cannot open file");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Scene scene_from_json(const Json& j) {
    allow_keys(j, "", {"landmarks", "camera", "observation"});
    Scene s;
    s.ids = parse_landmarks(member(j, "landmarks", ""), "/landmarks", s.landmarks);
    if (const auto it = j.find("camera"); it != j.end()) s.camera = parse_camera(*it, "/camera");
    if (const auto it = j.find("observation"); it != j.end()) {
        s.observation = parse_observation(*it, "/observation");
    }
    return s;
}

Json scene_to_json(const Scene& scene) {
    Json j;
    const p2pa_vec3* m[2] = {&scene.landmarks.m1, &scene.landmarks.m2};
    j["landmarks"] = Json::array();
    for (std::size_t k = 0; k < 2; ++k) {
        j["landmarks"].push_back({{"id", scene.ids[k]}, {"x", m[k]->x}, {"y", m[k]->y}, {"z", m[k]->z}});
    }
    if (scene.camera) {
        Json c;
        c["position"] = vec_json(scene.camera->position);
        if (scene.camera->rotation) c["rotation"] = rotation_json(scene.camera->rotation->data());
        j["camera"] = c;
    }
    if (scene.observation) {
        j["observation"] = {{"v1", vec_json(scene.observation->v1)},
                            {"v2", vec_json(scene.observation->v2)},
                            {"u", vec_json(scene.observation->u)}};
    }
    return j;
}

p2pa_sweep_config sweep_config_from_json(const Json& j) {
    allow_keys(j, "", {"landmarks", "camera", "altitude_min", "altitude_max", "num_positions",
                       "samples_per_position", "noise", "spacing", "threads"});
    p2pa_sweep_config c;
    p2pa_sweep_config_default(&c);
    if (const auto it = j.find("landmarks"); it != j.end()) {
        parse_landmarks(*it, "/landmarks", c.landmarks);
    }
    if (const auto it = j.find("camera"); it != j.end()) {
        if (!it->is_array() || it->size() != 2) bad("/camera", "expected [x, y]");
        c.camera_x = number((*it)[0], "/camera/0");
        c.camera_y = number((*it)[1], "/camera/1");
    }
    if (j.contains("altitude_min")) c.altitude_min = number_at(j, "altitude_min", "");
    if (j.contains("altitude_max")) c.altitude_max = number_at(j, "altitude_max", "");
    constexpr long long kMaxInt = std::numeric_limits<int>::max();
    if (j.contains("num_positions")) {
        c.num_positions = static_cast<int>(integer(j["num_positions"], "/num_positions", 1, kMaxInt));
    }
    if (j.contains("samples_per_position")) {
        c.samples_per_position = static_cast<int>(
            integer(j["samples_per_position"], "/samples_per_position", 1, kMaxInt));
    }
    if (j.contains("threads")) {
        c.threads = static_cast<unsigned>(integer(j["threads"], "/threads", 0, 4096));
    }
    if (const auto it = j.find("spacing"); it != j.end()) {
        if (*it == "log") {
            c.spacing = P2PA_SPACING_LOGARITHMIC;
        } else if (*it == "linear") {
            c.spacing = P2PA_SPACING_LINEAR;
        } else {
            bad("/spacing", "expected \"log\" or \"linear\"");
        }
    }
    if (const auto it = j.find("noise"); it != j.end()) {
        allow_keys(*it, "/noise", {"cone_deg", "accel_noise", "seed"});
        if (it->contains("cone_deg")) {
            c.noise.direction_cone_radius =
                number_at(*it, "cone_deg", "/noise") * std::numbers::pi / 180.0;
        }
        if (it->contains("accel_noise")) {
            c.noise.accel_noise_half_width = number_at(*it, "accel_noise", "/noise");
        }
        if (const auto seed = it->find("seed"); seed != it->end()) {
            if (!seed->is_number_unsigned()) bad("/noise/seed", "expected a non-negative integer");
            c.noise.seed = seed->get<std::uint64_t>();
        }
    }
    return c;
}

Json vec_json(p2pa_vec3 v) { return Json::array({v.x, v.y, v.z}); }

Json rotation_json(const double* r) {
    Json out = Json::array();
    for (int k = 0; k < 9; ++k) out.push_back(r[k]);
    return out;
}

Json slope_json(double s) {
    if (std::isnan(s)) return nullptr;
    if (std::isinf(s)) return s > 0 ? "inf" : "-inf";
    return s;
}

}  // namespace p2pa_cli
