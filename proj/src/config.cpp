#include "parc/config.hpp"

#include <fstream>
#include <sstream>

namespace parc {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& section, const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config: [" + section + "] " + key + ": not a number: " + v);
    }
}

long to_long(const std::string& section, const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const long d = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return d;
    } catch (const std::exception&) {
        throw ConfigError("config: [" + section + "] " + key + ": not an integer: " + v);
    }
}

AxisSpec parse_axis(const std::string& section, const std::string& key, const std::string& v) {
    std::istringstream ss(v);
    std::string name;
    AxisSpec a;
    if (!(ss >> name >> a.min >> a.max >> a.steps))
        throw ConfigError("config: [" + section + "] " + key +
                          ": expected '<param> <min> <max> <steps>', got: " + v);
    a.param = param_axis_from_string(name);
    a.validate();
    return a;
}

}  // namespace

void apply_config_entry(ExperimentConfig& cfg, const std::string& section, const std::string& key,
                        const std::string& value) {
    SeriesSpec& bench = cfg.benchmarks.front();
    if (section == "benchmark") {
        if (key == "system") {
            const ChaoticSystem sys = chaotic_system_from_string(value);
            const std::size_t n_points = bench.n_points;
            const std::size_t transient = bench.transient_discard;
            bench = SeriesSpec::defaults(sys);
            bench.n_points = n_points;
            bench.transient_discard = transient;
        } else if (key == "n_points") bench.n_points = static_cast<std::size_t>(to_long(section, key, value));
        else if (key == "sample_interval") bench.sample_interval = to_double(section, key, value);
        else if (key == "transient_discard") bench.transient_discard = static_cast<std::size_t>(to_long(section, key, value));
        else if (key == "substeps") bench.substeps = static_cast<int>(to_long(section, key, value));
        else if (key == "mg_tau_delay") bench.mackey_glass.tau_delay = to_double(section, key, value);
        else if (key == "mg_history") bench.mackey_glass.history = to_double(section, key, value);
        else throw ConfigError("config: unknown key [benchmark] " + key);
    } else if (section == "model") {
        if (key == "delta1") cfg.model.delta1 = to_double(section, key, value);
        else if (key == "kappa") cfg.model.kappa = to_double(section, key, value);
        else if (key == "gamma21") cfg.model.gamma21 = to_double(section, key, value);
        else throw ConfigError("config: unknown key [model] " + key);
    } else if (section == "encoding") {
        if (key == "f_avg") cfg.encoding.f_avg = to_double(section, key, value);
        else if (key == "delta_f") cfg.encoding.delta_f = to_double(section, key, value);
        else if (key == "symbol_duration") cfg.encoding.symbol_duration = to_double(section, key, value);
        else if (key == "data_rate") cfg.encoding.set_data_rate(to_double(section, key, value));
        else if (key == "gamma1_scale") cfg.encoding.gamma1_scale = to_double(section, key, value);
        else if (key == "warmup_symbols") cfg.encoding.warmup_symbols = static_cast<int>(to_long(section, key, value));
        else throw ConfigError("config: unknown key [encoding] " + key);
    } else if (section == "features") {
        if (key == "n_virtual_nodes") cfg.features.n_virtual_nodes = static_cast<int>(to_long(section, key, value));
        else if (key == "n_fft") cfg.features.n_fft = static_cast<int>(to_long(section, key, value));
        else if (key == "epsilon") cfg.features.epsilon = to_double(section, key, value);
        else throw ConfigError("config: unknown key [features] " + key);
    } else if (section == "integrator") {
        if (key == "rel_tol") cfg.integrator.rel_tol = to_double(section, key, value);
        else if (key == "abs_tol") cfg.integrator.abs_tol = to_double(section, key, value);
        else if (key == "initial_step") cfg.integrator.initial_step = to_double(section, key, value);
        else if (key == "max_step") cfg.integrator.max_step = to_double(section, key, value);
        else if (key == "blow_up_bound") cfg.integrator.blow_up_bound = to_double(section, key, value);
        else if (key == "fixed_step") cfg.integrator.fixed_step = to_double(section, key, value);
        else throw ConfigError("config: unknown key [integrator] " + key);
    } else if (section == "split") {
        if (key == "washout") cfg.split.washout = static_cast<std::size_t>(to_long(section, key, value));
        else if (key == "train_fraction") cfg.split.train_fraction = to_double(section, key, value);
        else throw ConfigError("config: unknown key [split] " + key);
    } else if (section == "readout") {
        if (key == "lambda") cfg.lambda = to_double(section, key, value);
        else throw ConfigError("config: unknown key [readout] " + key);
    } else if (section == "sweep") {
        if (key == "axis1") cfg.axis1 = parse_axis(section, key, value);
        else if (key == "axis2") cfg.axis2 = parse_axis(section, key, value);
        else if (key == "workers") cfg.workers = static_cast<int>(to_long(section, key, value));
        else throw ConfigError("config: unknown key [sweep] " + key);
    } else {
        throw ConfigError("config: unknown section [" + section + "]");
    }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config file " + path.string());
    ExperimentConfig cfg;
    std::string line, section;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw ConfigError("config: unterminated section at line " + std::to_string(lineno));
            section = trim(t.substr(1, t.size() - 2));
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: expected 'key = value' at line " + std::to_string(lineno));
        if (section.empty())
            throw ConfigError("config: key outside any section at line " + std::to_string(lineno));
        apply_config_entry(cfg, section, trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
    }
    return cfg;
}

}  // namespace parc
