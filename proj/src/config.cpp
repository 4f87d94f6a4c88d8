#include "mpi1d/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace mpi1d {

using nlohmann::json;

std::string to_string(Window w) { return w == Window::half ? "half" : "full"; }

Window window_from_string(const std::string& s) {
    if (s == "half") return Window::half;
    if (s == "full") return Window::full;
    throw std::invalid_argument("unknown window '" + s + "' (expected half or full)");
}

namespace {

double require_number(const json& j, const std::string& key) {
    if (!j.contains(key)) throw std::invalid_argument("config key '" + key + "' is required");
    const auto& v = j.at(key);
    if (!v.is_number()) throw std::invalid_argument("config key '" + key + "' must be a number");
    return v.get<double>();
}

std::size_t optional_count(const json& j, const std::string& key, std::size_t fallback,
                           std::size_t min_value, const char* constraint) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw std::invalid_argument("config key '" + key + "' must be a non-negative integer");
    }
    const auto n = static_cast<std::size_t>(v.get<long long>());
    if (n < min_value) throw std::invalid_argument(std::string(key) + " must be " + constraint);
    return n;
}

std::string optional_string(const json& j, const std::string& key, const std::string& fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_string()) throw std::invalid_argument("config key '" + key + "' must be a string");
    return v.get<std::string>();
}

} // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");

    static const std::set<std::string> known = {"A",      "G",          "T",     "a",
                                                "beta",   "n_space",    "trajectory",
                                                "oversample", "window", "n_max", "paths"};
    for (const auto& item : j.items()) {
        if (!known.contains(item.key())) {
            throw std::invalid_argument("unknown config key '" + item.key() + "'");
        }
    }

    ExperimentConfig cfg;
    cfg.params.A = require_number(j, "A");
    cfg.params.G = require_number(j, "G");
    cfg.params.T = require_number(j, "T");
    cfg.params.a = require_number(j, "a");
    cfg.params.beta = require_number(j, "beta");
    cfg.params.validate();

    if (!j.contains("n_space")) throw std::invalid_argument("config key 'n_space' is required");
    cfg.n_space = optional_count(j, "n_space", 0, 2, ">= 2");

    cfg.trajectory = trajectory_from_string(optional_string(j, "trajectory", "cosine"));
    cfg.oversample = optional_count(j, "oversample", 4, 1, ">= 1");
    cfg.window = window_from_string(optional_string(j, "window", "half"));
    cfg.n_max = optional_count(j, "n_max", 100, 1, ">= 1");

    if (j.contains("paths")) {
        const auto& p = j.at("paths");
        if (!p.is_object()) throw std::invalid_argument("config key 'paths' must be an object");
        for (const auto& item : p.items()) {
            if (item.key() != "input" && item.key() != "output") {
                throw std::invalid_argument("unknown config key 'paths." + item.key() + "'");
            }
            if (!item.value().is_string()) {
                throw std::invalid_argument("config key 'paths." + item.key() +
                                            "' must be a string");
            }
        }
        if (p.contains("input")) cfg.input_path = p.at("input").get<std::string>();
        if (p.contains("output")) cfg.output_path = p.at("output").get<std::string>();
    }
    return cfg;
}

std::string serialize_config(const ExperimentConfig& cfg) {
    json j;
    j["A"] = cfg.params.A;
    j["G"] = cfg.params.G;
    j["T"] = cfg.params.T;
    j["a"] = cfg.params.a;
    j["beta"] = cfg.params.beta;
    j["n_space"] = cfg.n_space;
    j["trajectory"] = to_string(cfg.trajectory);
    j["oversample"] = cfg.oversample;
    j["window"] = to_string(cfg.window);
    j["n_max"] = cfg.n_max;
    if (!cfg.input_path.empty() || !cfg.output_path.empty()) {
        json p = json::object();
        if (!cfg.input_path.empty()) p["input"] = cfg.input_path;
        if (!cfg.output_path.empty()) p["output"] = cfg.output_path;
        j["paths"] = p;
    }
    return j.dump(2) + "\n";
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

} // namespace mpi1d
