#pragma once

#include <cctype>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "circdens/censoring.hpp"
#include "circdens/estimator.hpp"

namespace circdens {

class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

inline double parse_plain_number(const std::string& text) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last) {
        throw config_error("not a number: '" + text + "'");
    }
    return value;
}

}  // namespace detail

//! Numeric values in configs may use pi: `pi`, `2pi/3`, `0.5*pi`, `15pi/9`.
//! This keeps angles like 2*pi/3 at full double precision in text form.
inline double parse_number_expr(const std::string& raw) {
    std::string s;
    for (char ch : raw) {
        if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
    }
    if (s.empty()) throw config_error("empty numeric value");
    const std::size_t pos = s.find("pi");
    if (pos == std::string::npos) return detail::parse_plain_number(s);

    double coef = 1.0;
    std::string head = s.substr(0, pos);
    if (!head.empty() && head.back() == '*') head.pop_back();
    if (head == "-") coef = -1.0;
    else if (!head.empty()) coef = detail::parse_plain_number(head);

    double denom = 1.0;
    std::string tail = s.substr(pos + 2);
    if (!tail.empty()) {
        if (tail[0] != '/' || tail.size() < 2) {
            throw config_error("malformed pi expression: '" + raw + "'");
        }
        denom = detail::parse_plain_number(tail.substr(1));
        if (denom == 0.0) throw config_error("division by zero in '" + raw + "'");
    }
    return coef * std::numbers::pi / denom;
}

namespace detail {

struct Call {
    std::string name;
    std::vector<std::string> args;
};

//! Split `name(arg, arg, ...)` with nesting-aware commas; a bare word is a
//! zero-argument call.
inline Call parse_call(const std::string& raw) {
    const std::string s = trim(raw);
    const std::size_t open = s.find('(');
    Call call;
    if (open == std::string::npos) {
        call.name = s;
        return call;
    }
    if (s.empty() || s.back() != ')') {
        throw config_error("unbalanced parentheses in '" + raw + "'");
    }
    call.name = trim(s.substr(0, open));
    int depth = 0;
    std::size_t start = open + 1;
    for (std::size_t i = open + 1; i + 1 <= s.size(); ++i) {
        const char ch = s[i];
        if (ch == '(') ++depth;
        else if (ch == ')') {
            if (depth == 0) {
                if (i + 1 != s.size()) {
                    throw config_error("trailing text after ')' in '" + raw + "'");
                }
                const std::string arg = trim(s.substr(start, i - start));
                if (!arg.empty() || !call.args.empty()) call.args.push_back(arg);
                return call;
            }
            --depth;
        } else if (ch == ',' && depth == 0) {
            call.args.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    throw config_error("unbalanced parentheses in '" + raw + "'");
}

}  // namespace detail

//! Distribution grammar:
//!   vonmises(MU, KAPPA) | uniform | pointmass(AT)
//!   | mixture(W*DIST, W*DIST, ...)
inline CircularDistribution parse_distribution(const std::string& text) {
    const detail::Call call = detail::parse_call(text);
    if (call.name == "vonmises") {
        if (call.args.size() != 2) {
            throw config_error("vonmises expects (mu, kappa)");
        }
        VonMises vm{Angle::wrap(parse_number_expr(call.args[0])),
                    parse_number_expr(call.args[1])};
        if (!(vm.kappa >= 0.0)) {
            throw config_error("vonmises: kappa must be >= 0");
        }
        return vm;
    }
    if (call.name == "uniform") {
        if (!call.args.empty()) throw config_error("uniform takes no arguments");
        return UniformCircle{};
    }
    if (call.name == "pointmass") {
        if (call.args.size() != 1) throw config_error("pointmass expects (at)");
        return PointMass{Angle::wrap(parse_number_expr(call.args[0]))};
    }
    if (call.name == "mixture") {
        if (call.args.empty()) throw config_error("mixture needs components");
        Mixture mix;
        for (const auto& item : call.args) {
            const std::size_t star = item.find('*');
            if (star == std::string::npos) {
                throw config_error("mixture component must be WEIGHT*DIST");
            }
            const double w = parse_number_expr(detail::trim(item.substr(0, star)));
            mix.components.emplace_back(
                w, parse_distribution(item.substr(star + 1)));
        }
        CircularDistribution dist = mix;
        validate(dist);
        return dist;
    }
    throw config_error("unknown distribution '" + call.name + "'");
}

//! Censoring grammar:
//!   independent(DIST, DIST) | deterministic(L, U) | uniform_anchor(ALPHA)
inline CensoringModel parse_censoring(const std::string& text) {
    const detail::Call call = detail::parse_call(text);
    if (call.name == "independent") {
        if (call.args.size() != 2) {
            throw config_error("independent expects (law_l, law_u)");
        }
        return IndependentPair{parse_distribution(call.args[0]),
                               parse_distribution(call.args[1])};
    }
    if (call.name == "deterministic") {
        if (call.args.size() != 2) {
            throw config_error("deterministic expects (l, u)");
        }
        const Angle l = Angle::wrap(parse_number_expr(call.args[0]));
        const Angle u = Angle::wrap(parse_number_expr(call.args[1]));
        if (l == u) throw config_error("deterministic: l and u must differ");
        return DeterministicArc{l, u};
    }
    if (call.name == "uniform_anchor") {
        if (call.args.size() != 1) {
            throw config_error("uniform_anchor expects (alpha)");
        }
        const double alpha = parse_number_expr(call.args[0]);
        if (!(alpha > 0.0 && alpha < two_pi)) {
            throw config_error("uniform_anchor: alpha must be in (0, 2*pi)");
        }
        return UniformAnchorFixedArc{alpha};
    }
    throw config_error("unknown censoring model '" + call.name + "'");
}

struct ModelPreset {
    CircularDistribution dist;
    CensoringModel censor;
};

//! The four simulation presets used throughout the benchmark tables.
inline ModelPreset model_preset(int id) {
    const double pi = std::numbers::pi;
    const Angle two_thirds = Angle::wrap(2.0 * pi / 3.0);
    const Angle four_thirds = Angle::wrap(4.0 * pi / 3.0);
    switch (id) {
        case 1:
            return {VonMises{Angle::wrap(pi), 1.0},
                    IndependentPair{VonMises{two_thirds, 1.0},
                                    VonMises{four_thirds, 1.0}}};
        case 2:
            return {VonMises{Angle::wrap(pi), 1.0},
                    IndependentPair{VonMises{four_thirds, 1.0},
                                    VonMises{two_thirds, 1.0}}};
        case 3: {
            Mixture mix;
            mix.components.emplace_back(
                0.6, VonMises{Angle::wrap(pi / 3.0), 3.0});
            mix.components.emplace_back(
                0.4, VonMises{Angle::wrap(15.0 * pi / 9.0), 3.0});
            return {mix,
                    IndependentPair{VonMises{two_thirds, 3.0},
                                    VonMises{four_thirds, 3.0}}};
        }
        case 4:
            return {VonMises{Angle::wrap(pi), 1.0},
                    DeterministicArc{two_thirds, four_thirds}};
        default:
            throw config_error("model preset must be 1, 2, 3 or 4");
    }
}

//! Raw config file: `key = value` lines grouped by optional [section]
//! headers; keys before any header are shared by every command.
class ConfigFile {
public:
    static ConfigFile load(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw config_error("cannot open config: " + path.string());
        return parse(in);
    }

    static ConfigFile parse(std::istream& in) {
        ConfigFile cfg;
        std::string line;
        std::string section;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const std::string text = detail::trim(line);
            if (text.empty() || text[0] == '#') continue;
            if (text.front() == '[') {
                if (text.back() != ']') {
                    throw config_error("line " + std::to_string(line_no) +
                                       ": malformed section header");
                }
                section = detail::trim(text.substr(1, text.size() - 2));
                continue;
            }
            const std::size_t eq = text.find('=');
            if (eq == std::string::npos) {
                throw config_error("line " + std::to_string(line_no) +
                                   ": expected key = value");
            }
            const std::string key = detail::trim(text.substr(0, eq));
            const std::string value = detail::trim(text.substr(eq + 1));
            if (key.empty()) {
                throw config_error("line " + std::to_string(line_no) +
                                   ": empty key");
            }
            cfg.entries_[section].emplace_back(key, value);
        }
        return cfg;
    }

    //! Keys applicable to a command: globals first, then its section.
    std::vector<std::pair<std::string, std::string>> entries_for(
        const std::string& command) const {
        std::vector<std::pair<std::string, std::string>> out;
        if (const auto it = entries_.find(""); it != entries_.end()) {
            out.insert(out.end(), it->second.begin(), it->second.end());
        }
        if (const auto it = entries_.find(command); it != entries_.end()) {
            out.insert(out.end(), it->second.begin(), it->second.end());
        }
        return out;
    }

private:
    std::map<std::string, std::vector<std::pair<std::string, std::string>>>
        entries_;
};

struct CommonConfig {
    std::uint64_t seed = 1;
    std::filesystem::path out = ".";
    std::size_t grid_points = 1024;
};

struct SimulateConfig {
    CommonConfig common;
    CircularDistribution dist = UniformCircle{};
    CensoringModel censor = UniformAnchorFixedArc{1.0};
    std::size_t n = 0;
    std::string label;  // "modelK" for presets, otherwise "custom"
};

struct EstimateConfig {
    CommonConfig common;
    std::filesystem::path sample;
    std::optional<std::size_t> m_max;
    std::optional<double> kappa;  // nullopt = calibrate
    EstimatorVariant variant = EstimatorVariant::Thresholded;
    std::optional<CircularDistribution> true_dist;
};

struct BenchmarkConfig {
    CommonConfig common;
    std::vector<int> models = {1, 2, 3, 4};
    std::vector<std::size_t> sizes = {50, 200, 500, 1000};
    std::size_t replications = 100;
    std::optional<double> kappa;
    EstimatorVariant variant = EstimatorVariant::Thresholded;
};

struct CompareConfig {
    CommonConfig common;
    std::vector<double> concentrations = {1.0, 3.0};
    std::vector<double> alphas = {1.0, 3.0};
    std::size_t n = 100;
    std::size_t replications = 200;
    std::optional<double> kappa;
};

namespace detail {

inline std::uint64_t parse_u64(const std::string& text) {
    std::uint64_t value = 0;
    const auto res =
        std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        throw config_error("not an unsigned integer: '" + text + "'");
    }
    return value;
}

inline std::size_t parse_size(const std::string& text) {
    return static_cast<std::size_t>(parse_u64(text));
}

inline std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == ',') {
            const std::string item = trim(text.substr(start, i - start));
            if (!item.empty()) items.push_back(item);
            start = i + 1;
        }
    }
    return items;
}

inline std::optional<double> parse_kappa(const std::string& text) {
    if (text == "auto") return std::nullopt;
    const double value = parse_plain_number(text);
    if (!(value > 0.0)) throw config_error("kappa must be > 0 or 'auto'");
    return value;
}

inline EstimatorVariant parse_variant(const std::string& text) {
    if (text == "threshold") return EstimatorVariant::Thresholded;
    if (text == "window") return EstimatorVariant::DeterministicWindow;
    throw config_error("variant must be 'threshold' or 'window'");
}

inline bool take_common(CommonConfig& common, const std::string& key,
                        const std::string& value) {
    if (key == "seed") { common.seed = parse_u64(value); return true; }
    if (key == "out") { common.out = value; return true; }
    if (key == "grid") {
        common.grid_points = parse_size(value);
        if (common.grid_points < 16) {
            throw config_error("grid must be at least 16");
        }
        return true;
    }
    return false;
}

[[noreturn]] inline void reject_key(const std::string& command,
                                    const std::string& key) {
    throw config_error("unknown key '" + key + "' for command " + command);
}

}  // namespace detail

inline SimulateConfig load_simulate_config(const ConfigFile& file) {
    SimulateConfig cfg;
    bool have_dist = false, have_censor = false;
    for (const auto& [key, value] : file.entries_for("simulate")) {
        if (detail::take_common(cfg.common, key, value)) continue;
        if (key == "model") {
            const int id = static_cast<int>(detail::parse_u64(value));
            const ModelPreset preset = model_preset(id);
            cfg.dist = preset.dist;
            cfg.censor = preset.censor;
            cfg.label = "model" + std::to_string(id);
            have_dist = have_censor = true;
        } else if (key == "dist") {
            cfg.dist = parse_distribution(value);
            if (cfg.label.empty()) cfg.label = "custom";
            have_dist = true;
        } else if (key == "censor") {
            cfg.censor = parse_censoring(value);
            if (cfg.label.empty()) cfg.label = "custom";
            have_censor = true;
        } else if (key == "n") {
            cfg.n = detail::parse_size(value);
        } else {
            detail::reject_key("simulate", key);
        }
    }
    if (!have_dist || !have_censor) {
        throw config_error("simulate needs 'model' or both 'dist' and 'censor'");
    }
    if (cfg.n < 1) throw config_error("simulate: n must be >= 1");
    return cfg;
}

inline EstimateConfig load_estimate_config(const ConfigFile& file) {
    EstimateConfig cfg;
    for (const auto& [key, value] : file.entries_for("estimate")) {
        if (detail::take_common(cfg.common, key, value)) continue;
        if (key == "sample") cfg.sample = value;
        else if (key == "m_max") {
            cfg.m_max = detail::parse_size(value);
            if (*cfg.m_max < 1) throw config_error("m_max must be >= 1");
        } else if (key == "kappa") cfg.kappa = detail::parse_kappa(value);
        else if (key == "variant") cfg.variant = detail::parse_variant(value);
        else if (key == "true_dist") cfg.true_dist = parse_distribution(value);
        else if (key == "true_model") {
            cfg.true_dist = model_preset(
                static_cast<int>(detail::parse_u64(value))).dist;
        } else detail::reject_key("estimate", key);
    }
    return cfg;
}

inline BenchmarkConfig load_benchmark_config(const ConfigFile& file) {
    BenchmarkConfig cfg;
    for (const auto& [key, value] : file.entries_for("benchmark")) {
        if (detail::take_common(cfg.common, key, value)) continue;
        if (key == "models") {
            cfg.models.clear();
            for (const auto& item : detail::split_list(value)) {
                cfg.models.push_back(static_cast<int>(detail::parse_u64(item)));
            }
            if (cfg.models.empty()) throw config_error("models list is empty");
        } else if (key == "sizes") {
            cfg.sizes.clear();
            for (const auto& item : detail::split_list(value)) {
                cfg.sizes.push_back(detail::parse_size(item));
            }
            if (cfg.sizes.empty()) throw config_error("sizes list is empty");
        } else if (key == "replications") {
            cfg.replications = detail::parse_size(value);
            if (cfg.replications < 2) {
                throw config_error("replications must be >= 2");
            }
        } else if (key == "kappa") cfg.kappa = detail::parse_kappa(value);
        else if (key == "variant") cfg.variant = detail::parse_variant(value);
        else detail::reject_key("benchmark", key);
    }
    for (int id : cfg.models) model_preset(id);  // range check
    for (std::size_t n : cfg.sizes) {
        if (n < 4) throw config_error("benchmark sizes must be >= 4");
    }
    return cfg;
}

inline CompareConfig load_compare_config(const ConfigFile& file) {
    CompareConfig cfg;
    for (const auto& [key, value] : file.entries_for("compare")) {
        if (detail::take_common(cfg.common, key, value)) continue;
        if (key == "concentrations") {
            cfg.concentrations.clear();
            for (const auto& item : detail::split_list(value)) {
                cfg.concentrations.push_back(parse_number_expr(item));
            }
        } else if (key == "alphas") {
            cfg.alphas.clear();
            for (const auto& item : detail::split_list(value)) {
                cfg.alphas.push_back(parse_number_expr(item));
            }
        } else if (key == "n") {
            cfg.n = detail::parse_size(value);
            if (cfg.n < 4) throw config_error("compare: n must be >= 4");
        } else if (key == "replications") {
            cfg.replications = detail::parse_size(value);
            if (cfg.replications < 2) {
                throw config_error("replications must be >= 2");
            }
        } else if (key == "kappa") cfg.kappa = detail::parse_kappa(value);
        else detail::reject_key("compare", key);
    }
    if (cfg.concentrations.empty() || cfg.alphas.empty()) {
        throw config_error("compare needs concentrations and alphas");
    }
    for (double alpha : cfg.alphas) {
        if (!(alpha > 0.0 && alpha < two_pi)) {
            throw config_error("compare: alpha must be in (0, 2*pi)");
        }
    }
    for (double k : cfg.concentrations) {
        if (!(k >= 0.0)) throw config_error("compare: concentration < 0");
    }
    return cfg;
}

}  // namespace circdens
