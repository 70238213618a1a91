// config.hpp: flat key=value run configuration shared by the sweep and dynamics commands

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "spectra/csv.hpp"
#include "spectra/dynamics.hpp"
#include "spectra/oracle.hpp"
#include "spectra/spectrum.hpp"

namespace spectra {

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class ModelKind { rabi, ion };

struct RunConfig {
    ModelKind model = ModelKind::rabi;
    // model parameters (model = rabi)
    double omega0 = 1.0;
    double Omega = 1.0;
    double lambda = 0.0;
    // ion parameters (model = ion); the ion coupling is g
    double Omega0 = 1.0;
    double nu = 1.0;
    double g = 0.8;
    double epsilon = 0.0;
    // sweep
    std::vector<Method> orders{Method::order3, Method::exact};
    std::size_t levels = 6;
    std::string sweep = "lambda_over_omega0";
    double sweep_start = 0.0;
    double sweep_stop = 1.0;
    double sweep_step = 0.02;
    // truncation
    std::size_t N = 42;
    std::size_t K = 0;  // 0: automatic
    double tolerance = 1e-6;
    // dynamics
    double alpha = 1.0;
    double alpha_im = 0.0;
    SpinState spin = SpinState::lower;
    ReadoutFrame frame = ReadoutFrame::sigma_z;
    double horizon = 50.0;
    std::size_t samples = 1001;
    double max_gram_deviation = 0.5;
    // output
    std::string output;  // empty: default name in the output directory
    bool plot_script = false;
    std::size_t threads = 0;  // 0: hardware concurrency

    friend bool operator==(const RunConfig&, const RunConfig&) = default;

    /// Assigns one key from its text form. Throws ConfigError for unknown keys or bad values.
    void set(std::string_view key, std::string_view value);
    std::string get(std::string_view key) const;
    void validate() const;

    std::vector<double> sweep_grid() const;
    /// Model parameters at sweep coordinate x = lambda/omega0 (or g for ion runs).
    ModelParams model_at(double x) const;
    /// Parameters for a dynamics run, with the energy offset of the ion frame.
    IonMapping dynamics_model() const;
    TruncationPolicy truncation() const;
    InitialState initial_state() const;
};

/// Keys in serialization order.
inline const std::vector<std::string_view>& config_keys() {
    static const std::vector<std::string_view> keys{
        "model",  "omega0", "Omega",   "lambda",     "Omega0",      "nu",        "g",
        "epsilon", "orders", "levels", "sweep",      "sweep_start", "sweep_stop", "sweep_step",
        "N",      "K",      "tolerance", "alpha",    "alpha_im",    "spin",      "frame",
        "horizon", "samples", "max_gram_deviation", "output", "plot_script", "threads"};
    return keys;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double config_double(std::string_view key, std::string_view v) {
    try {
        const double x = parse_double(v);
        if (!std::isfinite(x)) throw std::invalid_argument("non-finite");
        return x;
    } catch (const std::invalid_argument&) {
        throw ConfigError(std::string(key) + ": expected a number, got '" + std::string(v) + "'");
    }
}

inline std::size_t config_size(std::string_view key, std::string_view v) {
    std::size_t x = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
    if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size()) {
        throw ConfigError(std::string(key) + ": expected a non-negative integer, got '" + std::string(v) + "'");
    }
    return x;
}

inline bool config_bool(std::string_view key, std::string_view v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError(std::string(key) + ": expected true or false, got '" + std::string(v) + "'");
}

inline std::vector<Method> config_orders(std::string_view v) {
    std::vector<Method> out;
    std::size_t pos = 0;
    while (pos <= v.size()) {
        const auto comma = v.find(',', pos);
        const auto item = trim(v.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
        try {
            out.push_back(parse_method(item));
        } catch (const std::invalid_argument&) {
            throw ConfigError("orders: unknown entry '" + std::string(item) + "' (use 0, 1, 2, 3, exact)");
        }
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

// Grid coordinates are snapped to 12 significant digits so that start + i*step prints cleanly.
inline double snap(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return parse_double(buf);
}

}  // namespace detail

inline void RunConfig::set(std::string_view key, std::string_view raw) {
    using namespace detail;
    const auto v = trim(raw);
    if (key == "model") {
        if (v == "rabi") model = ModelKind::rabi;
        else if (v == "ion") model = ModelKind::ion;
        else throw ConfigError("model: expected rabi or ion, got '" + std::string(v) + "'");
    } else if (key == "omega0") omega0 = config_double(key, v);
    else if (key == "Omega") Omega = config_double(key, v);
    else if (key == "lambda") lambda = config_double(key, v);
    else if (key == "Omega0") Omega0 = config_double(key, v);
    else if (key == "nu") nu = config_double(key, v);
    else if (key == "g") g = config_double(key, v);
    else if (key == "epsilon") epsilon = config_double(key, v);
    else if (key == "orders") orders = config_orders(v);
    else if (key == "levels") levels = config_size(key, v);
    else if (key == "sweep") sweep = std::string(v);
    else if (key == "sweep_start") sweep_start = config_double(key, v);
    else if (key == "sweep_stop") sweep_stop = config_double(key, v);
    else if (key == "sweep_step") sweep_step = config_double(key, v);
    else if (key == "N") N = config_size(key, v);
    else if (key == "K") K = config_size(key, v);
    else if (key == "tolerance") tolerance = config_double(key, v);
    else if (key == "alpha") alpha = config_double(key, v);
    else if (key == "alpha_im") alpha_im = config_double(key, v);
    else if (key == "spin") {
        if (v == "lower") spin = SpinState::lower;
        else if (v == "upper") spin = SpinState::upper;
        else throw ConfigError("spin: expected lower or upper, got '" + std::string(v) + "'");
    } else if (key == "frame") {
        if (v == "sigma_z") frame = ReadoutFrame::sigma_z;
        else if (v == "sigma_x") frame = ReadoutFrame::sigma_x;
        else throw ConfigError("frame: expected sigma_z or sigma_x, got '" + std::string(v) + "'");
    } else if (key == "horizon") horizon = config_double(key, v);
    else if (key == "samples") samples = config_size(key, v);
    else if (key == "max_gram_deviation") max_gram_deviation = config_double(key, v);
    else if (key == "output") output = std::string(v);
    else if (key == "plot_script") plot_script = config_bool(key, v);
    else if (key == "threads") threads = config_size(key, v);
    else throw ConfigError("unknown key '" + std::string(key) + "'");
}

inline std::string RunConfig::get(std::string_view key) const {
    if (key == "model") return model == ModelKind::rabi ? "rabi" : "ion";
    if (key == "omega0") return format_double(omega0);
    if (key == "Omega") return format_double(Omega);
    if (key == "lambda") return format_double(lambda);
    if (key == "Omega0") return format_double(Omega0);
    if (key == "nu") return format_double(nu);
    if (key == "g") return format_double(g);
    if (key == "epsilon") return format_double(epsilon);
    if (key == "orders") {
        std::string s;
        for (std::size_t i = 0; i < orders.size(); ++i) {
            if (i) s += ',';
            s += to_string(orders[i]);
        }
        return s;
    }
    if (key == "levels") return std::to_string(levels);
    if (key == "sweep") return sweep;
    if (key == "sweep_start") return format_double(sweep_start);
    if (key == "sweep_stop") return format_double(sweep_stop);
    if (key == "sweep_step") return format_double(sweep_step);
    if (key == "N") return std::to_string(N);
    if (key == "K") return std::to_string(K);
    if (key == "tolerance") return format_double(tolerance);
    if (key == "alpha") return format_double(alpha);
    if (key == "alpha_im") return format_double(alpha_im);
    if (key == "spin") return spin == SpinState::lower ? "lower" : "upper";
    if (key == "frame") return frame == ReadoutFrame::sigma_z ? "sigma_z" : "sigma_x";
    if (key == "horizon") return format_double(horizon);
    if (key == "samples") return std::to_string(samples);
    if (key == "max_gram_deviation") return format_double(max_gram_deviation);
    if (key == "output") return output;
    if (key == "plot_script") return plot_script ? "true" : "false";
    if (key == "threads") return std::to_string(threads);
    throw ConfigError("unknown key '" + std::string(key) + "'");
}

inline void RunConfig::validate() const {
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw ConfigError(what);
    };
    require(std::isfinite(omega0) && omega0 > 0.0, "omega0 must be > 0");
    require(Omega >= 0.0, "Omega must be >= 0");
    require(lambda >= 0.0, "lambda must be >= 0");
    require(Omega0 >= 0.0, "Omega0 must be >= 0");
    require(nu > 0.0, "nu must be > 0");
    require(g >= 0.0, "g must be >= 0");
    require(!orders.empty(), "orders must name at least one method");
    for (std::size_t i = 0; i < orders.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) require(orders[i] != orders[j], "orders lists a method twice");
    }
    require(levels >= 1 && levels <= 200, "levels must be in 1..200");
    require(sweep == "lambda_over_omega0", "sweep: the only sweep variable is lambda_over_omega0");
    require(sweep_step > 0.0, "sweep_step must be > 0");
    require(sweep_stop >= sweep_start, "sweep_stop must be >= sweep_start");
    require(sweep_start >= 0.0, "sweep_start must be >= 0");
    require((sweep_stop - sweep_start) / sweep_step <= 1e5, "sweep grid exceeds 100000 points");
    require(N >= 3 && N <= 256, "N must be in 3..256");
    require(K == 0 || (K >= N + 1 && K <= kIndexCap), "K must be 0 (automatic) or in N+1..512");
    require(tolerance > 0.0, "tolerance must be > 0");
    require(std::abs(std::complex<double>(alpha, alpha_im)) <= 4.0, "|alpha| must be <= 4");
    require(horizon > 0.0, "horizon must be > 0");
    require(samples >= 2 && samples <= 1000000, "samples must be in 2..1000000");
    require(max_gram_deviation >= 0.0, "max_gram_deviation must be >= 0");
    require(threads <= 256, "threads must be <= 256");
    require(output.find('\n') == std::string::npos, "output must be a single line");
}

inline std::vector<double> RunConfig::sweep_grid() const {
    const double span = (sweep_stop - sweep_start) / sweep_step;
    // Tolerate roundoff in span so that a stop value on the grid is included.
    const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i) {
        grid[i] = detail::snap(sweep_start + static_cast<double>(i) * sweep_step);
    }
    return grid;
}

inline ModelParams RunConfig::model_at(double x) const {
    if (model == ModelKind::ion) return map_ion_to_model({Omega0, nu, x, epsilon}).model;
    return {omega0, Omega, x * omega0};
}

inline IonMapping RunConfig::dynamics_model() const {
    if (model == ModelKind::ion) return map_ion_to_model({Omega0, nu, g, epsilon});
    IonMapping m;
    m.model = {omega0, Omega, lambda};
    m.model.validate();
    return m;
}

inline TruncationPolicy RunConfig::truncation() const {
    TruncationPolicy p;
    p.initial_N = N;
    p.tolerance = tolerance;
    return p;
}

inline InitialState RunConfig::initial_state() const {
    return {spin, {alpha, alpha_im}, frame};
}

inline std::string serialize(const RunConfig& c) {
    std::string out;
    for (auto key : config_keys()) {
        out += key;
        out += '=';
        out += c.get(key);
        out += '\n';
    }
    return out;
}

/// Applies key=value lines on top of `base`. `#` starts a comment; blank lines are skipped.
inline RunConfig parse_config(std::string_view text, RunConfig base = {}) {
    std::vector<std::string> seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        auto line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
        }
        const std::string key(detail::trim(line.substr(0, eq)));
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) {
            throw ConfigError("line " + std::to_string(line_no) + ": key '" + key + "' given twice");
        }
        seen.push_back(key);
        try {
            base.set(key, line.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return base;
}

inline RunConfig load_config(const std::string& path, RunConfig base = {}) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), std::move(base));
}

}  // namespace spectra
