#include "triofm/config_file.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "triofm/matrix_market.hpp"

namespace triofm {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "problem", "n", "seed", "p", "uniform_scale_n", "eigenvalues", "matrix_file",
        "grid_points", "lattice_x", "lattice_y", "electrons_up", "electrons_dn", "hopping_t",
        "interaction_u", "objective", "triangularized", "stepsize", "alpha",
        "linesearch_equation", "acceleration", "momentum_beta", "pr_plus_clamp", "tolerance",
        "max_iterations", "locking", "stopping", "residual_check_interval", "record_trace",
        "runs", "methods"};
    return keys;
}

}  // namespace

ConfigMap ConfigMap::parse_string(const std::string& text, const std::string& origin) {
    ConfigMap map;
    map.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = lower(trim(line.substr(0, eq)));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key or value");
        if (!known_keys().count(key))
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": unknown key '" + key +
                              "'");
        map.values_[key] = value;
    }
    return map;
}

ConfigMap ConfigMap::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_string(buffer.str(), path);
}

std::string ConfigMap::get_string(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError(origin_ + ": missing required key '" + key + "'");
    return it->second;
}

std::string ConfigMap::get_string_or(const std::string& key, const std::string& fallback) const {
    const auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

long ConfigMap::get_long_or(const std::string& key, long fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        std::size_t pos = 0;
        const long v = std::stol(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(origin_ + ": key '" + key + "' is not an integer: " + it->second);
    }
}

double ConfigMap::get_double_or(const std::string& key, double fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        std::size_t pos = 0;
        const double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError(origin_ + ": key '" + key + "' is not a number: " + it->second);
    }
}

bool ConfigMap::get_bool_or(const std::string& key, bool fallback) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    const std::string v = lower(it->second);
    if (v == "true" || v == "on" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "off" || v == "0" || v == "no") return false;
    throw ConfigError(origin_ + ": key '" + key + "' is not a boolean: " + it->second);
}

std::vector<double> ConfigMap::get_double_list(const std::string& key) const {
    std::vector<double> out;
    std::stringstream ss(get_string(key));
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw ConfigError(origin_ + ": key '" + key + "' has a non-numeric entry: " + item);
        }
    }
    return out;
}

ProblemConfig problem_from_config(const ConfigMap& map) {
    ProblemConfig cfg;
    const std::string kind = lower(map.get_string_or("problem", "uniform"));
    if (kind == "uniform" || kind == "logarithm" || kind == "ushape" || kind == "explicit") {
        cfg.kind = ProblemKind::kRandom;
        cfg.spectrum.family = kind == "uniform"     ? SpectrumFamily::kUniform
                              : kind == "logarithm" ? SpectrumFamily::kLogarithm
                              : kind == "ushape"    ? SpectrumFamily::kUshape
                                                    : SpectrumFamily::kExplicit;
        cfg.spectrum.n = static_cast<int>(map.get_long_or("n", 500));
        cfg.spectrum.seed = static_cast<std::uint64_t>(map.get_long_or("seed", 0));
        cfg.spectrum.uniform_scale_n = static_cast<int>(map.get_long_or("uniform_scale_n", 0));
        if (cfg.spectrum.family == SpectrumFamily::kExplicit) {
            cfg.spectrum.explicit_values = map.get_double_list("eigenvalues");
            cfg.spectrum.n = static_cast<int>(cfg.spectrum.explicit_values.size());
        }
    } else if (kind == "dft") {
        cfg.kind = ProblemKind::kDft;
        cfg.dft.grid_points = static_cast<int>(map.get_long_or("grid_points",
                                                               map.get_long_or("n", 500)));
    } else if (kind == "hubbard") {
        cfg.kind = ProblemKind::kHubbard;
        cfg.hubbard.lx = static_cast<int>(map.get_long_or("lattice_x", 4));
        cfg.hubbard.ly = static_cast<int>(map.get_long_or("lattice_y", 4));
        cfg.hubbard.n_up = static_cast<int>(map.get_long_or("electrons_up", 3));
        cfg.hubbard.n_dn = static_cast<int>(map.get_long_or("electrons_dn", 3));
        cfg.hubbard.t = map.get_double_or("hopping_t", 1.0);
        cfg.hubbard.u = map.get_double_or("interaction_u", 0.25 * cfg.hubbard.n_orb());
    } else if (kind == "file") {
        cfg.kind = ProblemKind::kMatrixFile;
        cfg.matrix_file = map.get_string("matrix_file");
    } else {
        throw ConfigError("unknown problem kind: " + kind);
    }
    return cfg;
}

BuiltProblem build_problem(const ProblemConfig& config) {
    BuiltProblem out;
    switch (config.kind) {
        case ProblemKind::kRandom: {
            RandomMatrixProblem p = build_random(config.spectrum);
            out.op = std::move(p.op);
            out.reference = std::move(p.reference);
            break;
        }
        case ProblemKind::kDft:
            out.op = build_dft(config.dft);
            break;
        case ProblemKind::kHubbard:
            try {
                out.op = build_hubbard(config.hubbard);
            } catch (const ConfigError&) {
                // Basis too large for sparse assembly: fall back to the
                // matrix-free operator (rows generated on demand per apply).
                out.op = build_hubbard_matrix_free(config.hubbard);
            }
            break;
        case ProblemKind::kMatrixFile:
            out.op = read_operator_matrix_market(config.matrix_file);
            out.op.set_norm_estimate(estimate_norm(out.op));
            break;
    }
    return out;
}

RunSetup run_setup_from_config(const ConfigMap& map) {
    RunSetup setup;
    setup.p = static_cast<int>(map.get_long_or("p", 5));
    if (setup.p < 1) throw ConfigError("p must be at least 1");
    SolverConfig& s = setup.solver;

    const std::string objective = lower(map.get_string_or("objective", "obj1"));
    if (objective == "obj1")
        s.objective = Objective::kObj1;
    else if (objective == "obj2")
        s.objective = Objective::kObj2;
    else
        throw ConfigError("objective must be obj1 or obj2");

    s.triangularized = map.get_bool_or("triangularized", true);

    const std::string stepsize = lower(map.get_string_or("stepsize", "exact-columnwise"));
    if (stepsize == "fixed")
        s.stepsize.kind = StepsizeKind::kFixed;
    else if (stepsize == "exact-full")
        s.stepsize.kind = StepsizeKind::kExactFull;
    else if (stepsize == "exact-columnwise")
        s.stepsize.kind = StepsizeKind::kExactColumnwise;
    else
        throw ConfigError("stepsize must be fixed, exact-full, or exact-columnwise");

    if (map.has("alpha")) {
        const std::string alpha = lower(map.get_string("alpha"));
        if (alpha != "auto") {
            const double a = map.get_double_or("alpha", 0.0);
            if (!(a > 0.0)) throw ConfigError("alpha must be positive (or 'auto')");
            s.stepsize.alpha = a;
        }
    }

    const std::string equation = lower(map.get_string_or("linesearch_equation", "direction"));
    if (equation == "direction")
        s.stepsize.equation = LinesearchEquation::kDirectionForm;
    else if (equation == "gradient")
        s.stepsize.equation = LinesearchEquation::kGradientForm;
    else
        throw ConfigError("linesearch_equation must be direction or gradient");

    const std::string accel = lower(map.get_string_or("acceleration", "cg"));
    if (accel == "none" || accel == "gd")
        s.acceleration = Acceleration::kNone;
    else if (accel == "momentum")
        s.acceleration = Acceleration::kMomentum;
    else if (accel == "cg")
        s.acceleration = Acceleration::kCgColumnwise;
    else
        throw ConfigError("acceleration must be none, momentum, or cg");

    if (map.has("momentum_beta")) s.momentum_beta = map.get_double_or("momentum_beta", 0.9);
    s.pr_plus_clamp = map.get_bool_or("pr_plus_clamp", false);
    s.tolerance = map.get_double_or("tolerance", 1e-8);
    if (!(s.tolerance > 0.0)) throw ConfigError("tolerance must be positive");
    s.max_iterations = map.get_long_or("max_iterations", 200000);
    if (s.max_iterations < 1) throw ConfigError("max_iterations must be at least 1");
    s.locking_enabled = map.get_bool_or("locking", true);

    const std::string stopping = lower(map.get_string_or("stopping", "either"));
    if (stopping == "direction-norm")
        s.stopping = Stopping::kDirectionNorm;
    else if (stopping == "residual")
        s.stopping = Stopping::kResidual;
    else if (stopping == "either")
        s.stopping = Stopping::kEither;
    else
        throw ConfigError("stopping must be direction-norm, residual, or either");

    s.residual_check_interval =
        static_cast<int>(map.get_long_or("residual_check_interval", 10));
    if (s.residual_check_interval < 1)
        throw ConfigError("residual_check_interval must be at least 1");
    s.seed = static_cast<std::uint64_t>(map.get_long_or("seed", 0));
    s.record_trace = map.get_bool_or("record_trace", true);
    return setup;
}

BenchMethod parse_bench_method(const std::string& token) {
    BenchMethod method;
    method.label = lower(trim(token));
    std::stringstream ss(method.label);
    std::string part;
    bool have_scheme = false, have_accel = false;
    while (std::getline(ss, part, '+')) {
        if (part == "triofm") {
            method.triangularized = true;
            have_scheme = true;
        } else if (part == "ofm") {
            method.triangularized = false;
            have_scheme = true;
        } else if (part == "gd" || part == "none") {
            method.acceleration = Acceleration::kNone;
            have_accel = true;
        } else if (part == "momentum") {
            method.acceleration = Acceleration::kMomentum;
            have_accel = true;
        } else if (part == "cg") {
            method.acceleration = Acceleration::kCgColumnwise;
            have_accel = true;
        } else if (part == "lock") {
            method.locking_override = true;
        } else if (part == "nolock") {
            method.locking_override = false;
        } else {
            throw ConfigError("unknown bench method component: " + part);
        }
    }
    if (!have_scheme || !have_accel)
        throw ConfigError("bench method needs a scheme and an acceleration, e.g. triofm+cg: " +
                          token);
    return method;
}

BenchConfig bench_from_config(const ConfigMap& map) {
    BenchConfig cfg;
    cfg.runs = static_cast<int>(map.get_long_or("runs", 20));
    if (cfg.runs < 1) throw ConfigError("runs must be at least 1");
    const std::string methods = map.get_string_or(
        "methods", "triofm+cg,ofm+cg,triofm+momentum,ofm+momentum,triofm+gd,ofm+gd");
    std::stringstream ss(methods);
    std::string token;
    while (std::getline(ss, token, ',')) {
        token = trim(token);
        if (!token.empty()) cfg.methods.push_back(parse_bench_method(token));
    }
    if (cfg.methods.empty()) throw ConfigError("bench needs at least one method");
    return cfg;
}

}  // namespace triofm
