#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "csusy/errors.hpp"

namespace csusy {

struct RunConfig {
    // system
    std::string system = "coulomb"; // coulomb | oscillator | trig
    double m = 1.0;
    int ell = 1;
    double A = -5.0;
    double c1 = 1.0;
    double c2 = 0.0;

    // transformation
    int order = 2;
    int n0 = 0;                    // coulomb deletion level
    double lambda = 9.1;           // oscillator insertion energy
    double B = -0.01;
    double C = 0.0;
    std::optional<double> c;       // Riccati family parameter; absent -> particular

    // grid
    int n_points = 0;              // 0 -> system default

    // tolerances
    double tau_ode = 1e-8;
    double tau_fd = 1e-6;
    double tau_shoot = 1e-8;
    double tau_node = 1e-10;
    double tau_transform = 1e-6;

    // spectrum search
    double window_lo = 0.0;
    double window_hi = 0.0;        // lo == hi -> system default window
    int max_states = 8;

    bool allow_singular = false;
    std::string out_dir = ".";
};

inline RunConfig parse_config(const nlohmann::json& j) {
    RunConfig c;
    try {
        if (j.contains("system")) {
            const auto& s = j.at("system");
            if (s.contains("name")) c.system = s.at("name").get<std::string>();
            if (s.contains("m")) c.m = s.at("m").get<double>();
            if (s.contains("ell")) c.ell = s.at("ell").get<int>();
            if (s.contains("A")) c.A = s.at("A").get<double>();
            if (s.contains("c1")) c.c1 = s.at("c1").get<double>();
            if (s.contains("c2")) c.c2 = s.at("c2").get<double>();
        }
        if (j.contains("transform")) {
            const auto& t = j.at("transform");
            if (t.contains("order")) c.order = t.at("order").get<int>();
            if (t.contains("n0")) c.n0 = t.at("n0").get<int>();
            if (t.contains("lambda")) c.lambda = t.at("lambda").get<double>();
            if (t.contains("B")) c.B = t.at("B").get<double>();
            if (t.contains("C")) c.C = t.at("C").get<double>();
            if (t.contains("c") && !t.at("c").is_null()) c.c = t.at("c").get<double>();
        }
        if (j.contains("grid")) {
            const auto& g = j.at("grid");
            if (g.contains("n_points")) c.n_points = g.at("n_points").get<int>();
        }
        if (j.contains("tolerances")) {
            const auto& t = j.at("tolerances");
            if (t.contains("tau_ode")) c.tau_ode = t.at("tau_ode").get<double>();
            if (t.contains("tau_fd")) c.tau_fd = t.at("tau_fd").get<double>();
            if (t.contains("tau_shoot")) c.tau_shoot = t.at("tau_shoot").get<double>();
            if (t.contains("tau_node")) c.tau_node = t.at("tau_node").get<double>();
            if (t.contains("tau_transform"))
                c.tau_transform = t.at("tau_transform").get<double>();
        }
        if (j.contains("spectrum")) {
            const auto& s = j.at("spectrum");
            if (s.contains("window_lo")) c.window_lo = s.at("window_lo").get<double>();
            if (s.contains("window_hi")) c.window_hi = s.at("window_hi").get<double>();
            if (s.contains("max_states")) c.max_states = s.at("max_states").get<int>();
        }
        if (j.contains("allow_singular")) c.allow_singular = j.at("allow_singular").get<bool>();
        if (j.contains("out_dir")) c.out_dir = j.at("out_dir").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(e.what());
    }
    if (c.tau_ode <= 0 || c.tau_shoot <= 0 || c.tau_node <= 0 ||
        c.tau_transform <= 0 || c.tau_fd <= 0)
        throw ConfigError("tolerances must be positive");
    if (c.system != "coulomb" && c.system != "oscillator" && c.system != "trig")
        throw ConfigError("unknown system: " + c.system);
    return c;
}

} // namespace csusy
