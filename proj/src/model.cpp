#include "lumpsum/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace lumpsum {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::invalid_model: return "invalid_model";
        case ErrorCode::invalid_grid: return "invalid_grid";
        case ErrorCode::invalid_argument: return "invalid_argument";
        case ErrorCode::domain: return "domain";
        case ErrorCode::config: return "config";
        case ErrorCode::io: return "io";
        case ErrorCode::numerical: return "numerical";
        case ErrorCode::invariant: return "invariant";
    }
    return "unknown";
}

namespace {

[[noreturn]] void reject(const std::string& what) {
    throw Error(ErrorCode::invalid_model, what);
}

}  // namespace

ValidatedModel validate(const ModelParams& p) {
    if (!std::isfinite(p.gamma) || !(p.gamma > 1.0)) reject("gamma must exceed 1");
    if (!std::isfinite(p.k_a) || p.k_a < 0.0) reject("k_a must be nonnegative");
    if (!std::isfinite(p.K) || !(p.K > 0.0)) reject("K must be positive");
    if (!std::isfinite(p.R_a) || p.R_a < 0.0) reject("R_a must be nonnegative");
    if (!std::isfinite(p.x0)) reject("x0 must be finite");
    if (p.schedule.size() < 2) reject("schedule needs at least two entries (T_0 = 0 and T_N = T)");
    if (p.schedule.front() != 0.0) reject("schedule must start at 0");
    for (std::size_t i = 1; i < p.schedule.size(); ++i) {
        if (!std::isfinite(p.schedule[i]) || !(p.schedule[i] > p.schedule[i - 1])) {
            reject("schedule must be strictly increasing");
        }
    }
    return ValidatedModel(p);
}

void validate_grid(const GridSpec& g) {
    if (!std::isfinite(g.y_max) || !(g.y_max > 0.0)) {
        throw Error(ErrorCode::invalid_grid, "y_max must be positive");
    }
    if (g.n_y < 16) throw Error(ErrorCode::invalid_grid, "n_y must be at least 16");
    if (!(g.safety > 0.0 && g.safety <= 1.0)) {
        throw Error(ErrorCode::invalid_grid, "safety must lie in (0, 1]");
    }
    if (g.z_grid_points == 1 || g.z_grid_points < 0) {
        throw Error(ErrorCode::invalid_grid, "z_grid_points must be 0 or at least 2");
    }
    if (g.checkpoints < 1) throw Error(ErrorCode::invalid_grid, "checkpoints must be positive");
}

GridSpec default_grid(const ValidatedModel& model) {
    GridSpec g;
    g.y_max = 4.0 * std::max(2.0 * model.R_a(), 2.0);
    g.n_y = 400;
    return g;
}

double utility(double xi, double gamma) {
    if (!(xi >= 0.0)) {
        throw Error(ErrorCode::domain, "utility: payment must be nonnegative");
    }
    return std::pow(xi, 1.0 / gamma);
}

double inverse_utility(double eta, double gamma) {
    if (!(eta >= 0.0)) {
        throw Error(ErrorCode::domain, "inverse_utility: utility must be nonnegative");
    }
    return std::pow(eta, gamma);
}

ModelParams model_from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::config, std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::config, "config must be a JSON object");

    ModelParams p;
    auto number = [](const nlohmann::json& v, const std::string& key) {
        if (!v.is_number()) throw Error(ErrorCode::config, "config key '" + key + "' must be a number");
        return v.get<double>();
    };
    for (const auto& [key, value] : j.items()) {
        if (key == "gamma") {
            p.gamma = number(value, key);
        } else if (key == "k_a") {
            p.k_a = number(value, key);
        } else if (key == "K") {
            p.K = number(value, key);
        } else if (key == "R_a") {
            p.R_a = number(value, key);
        } else if (key == "x0") {
            p.x0 = number(value, key);
        } else if (key == "schedule") {
            if (!value.is_array()) throw Error(ErrorCode::config, "config key 'schedule' must be an array");
            p.schedule.clear();
            for (const auto& t : value) p.schedule.push_back(number(t, key));
        } else {
            throw Error(ErrorCode::config, "unknown config key '" + key + "'");
        }
    }
    return p;
}

ModelParams load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io, "cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return model_from_json_text(ss.str());
}

std::string model_to_json_text(const ModelParams& p) {
    nlohmann::json j;
    j["gamma"] = p.gamma;
    j["k_a"] = p.k_a;
    j["K"] = p.K;
    j["R_a"] = p.R_a;
    j["x0"] = p.x0;
    j["schedule"] = p.schedule;
    return j.dump(2);
}

}  // namespace lumpsum
