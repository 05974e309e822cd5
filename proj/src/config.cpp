#include "nlslab/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace nlslab {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& val, int line) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(val, &pos);
        if (pos != val.size()) throw std::invalid_argument(val);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config line " + std::to_string(line) + ": key '" + key +
                          "' expects a number, got '" + val + "'");
    }
}

int parse_int(const std::string& key, const std::string& val, int line) {
    try {
        std::size_t pos = 0;
        const long x = std::stol(val, &pos);
        if (pos != val.size()) throw std::invalid_argument(val);
        return static_cast<int>(x);
    } catch (const std::exception&) {
        throw ConfigError("config line " + std::to_string(line) + ": key '" + key +
                          "' expects an integer, got '" + val + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& val, int line) {
    if (val == "true" || val == "1" || val == "on") return true;
    if (val == "false" || val == "0" || val == "off") return false;
    throw ConfigError("config line " + std::to_string(line) + ": key '" + key +
                      "' expects true/false, got '" + val + "'");
}

std::vector<double> parse_list(const std::string& key, const std::string& val,
                               int line) {
    std::vector<double> out;
    std::stringstream ss(val);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        out.push_back(parse_double(key, tok, line));
    }
    if (out.empty())
        throw ConfigError("config line " + std::to_string(line) + ": key '" + key +
                          "' expects a comma-separated list");
    return out;
}

}  // namespace

std::map<std::string, std::pair<std::string, int>> parse_config_text(
    const std::string& text) {
    std::map<std::string, std::pair<std::string, int>> entries;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        entries[key] = {val, lineno};
    }
    return entries;
}

std::map<std::string, std::pair<std::string, int>> parse_config_file(
    const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

RunConfig config_from_text(const std::string& text) {
    const auto entries = parse_config_text(text);
    RunConfig cfg;
    for (const auto& [key, vl] : entries) {
        const auto& [val, line] = vl;
        if (key == "mode") {
            if (val == "nonlinear")
                cfg.mode = RunMode::Nonlinear;
            else if (val == "linear")
                cfg.mode = RunMode::Linear;
            else
                throw ConfigError("config line " + std::to_string(line) +
                                  ": key 'mode' expects nonlinear|linear, got '" + val +
                                  "'");
        } else if (key == "grid.r0") {
            cfg.r0 = parse_double(key, val, line);
        } else if (key == "grid.r_max") {
            cfg.r_max = parse_double(key, val, line);
        } else if (key == "grid.n") {
            cfg.n = parse_int(key, val, line);
        } else if (key == "time.dt") {
            cfg.dt = parse_double(key, val, line);
        } else if (key == "time.t_end") {
            cfg.t_end = parse_double(key, val, line);
        } else if (key == "time.sample_every") {
            cfg.sample_every = parse_int(key, val, line);
        } else if (key == "sponge.enabled") {
            cfg.sponge_enabled = parse_bool(key, val, line);
        } else if (key == "sponge.width_frac") {
            cfg.sponge_width_frac = parse_double(key, val, line);
        } else if (key == "sponge.strength") {
            cfg.sponge_strength = parse_double(key, val, line);
        } else if (key == "init.kind") {
            if (val == "gaussian")
                cfg.init.kind = InitialData::Kind::Gaussian;
            else if (val == "ground_state")
                cfg.init.kind = InitialData::Kind::GroundStateScaled;
            else if (val == "ring")
                cfg.init.kind = InitialData::Kind::Ring;
            else
                throw ConfigError("config line " + std::to_string(line) +
                                  ": key 'init.kind' expects gaussian|ground_state|ring, "
                                  "got '" + val + "'");
        } else if (key == "init.amplitude") {
            cfg.init.amplitude = parse_double(key, val, line);
        } else if (key == "init.width") {
            cfg.init.width = parse_double(key, val, line);
        } else if (key == "init.center") {
            cfg.init.center = parse_double(key, val, line);
        } else if (key == "init.scale") {
            cfg.init.scale = parse_double(key, val, line);
        } else if (key == "cutoff.R") {
            cfg.cutoff_R = parse_double(key, val, line);
        } else if (key == "cutoff.eta") {
            cfg.cutoff_eta = parse_double(key, val, line);
        } else if (key == "cutoff.n_tab") {
            cfg.cutoff_n_tab = parse_int(key, val, line);
        } else if (key == "cutoff.R0") {
            cfg.r_scale0 = parse_double(key, val, line);
        } else if (key == "cutoff.J") {
            cfg.j_decades = parse_double(key, val, line);
        } else if (key == "cutoff.nR") {
            cfg.n_r = parse_int(key, val, line);
        } else if (key == "detector.eps") {
            cfg.eps = parse_double(key, val, line);
        } else if (key == "detector.window_len") {
            cfg.window_len = parse_double(key, val, line);
        } else if (key == "detector.delta_prime") {
            cfg.delta_prime = parse_double(key, val, line);
        } else if (key == "detector.rho") {
            cfg.rho = parse_double(key, val, line);
        } else if (key == "report.t0_list") {
            cfg.t0_list = parse_list(key, val, line);
        } else if (key == "ground_state.tol") {
            cfg.gs_tol = parse_double(key, val, line);
        } else if (key == "ground_state.r_max") {
            cfg.gs_r_max = parse_double(key, val, line);
        } else if (key == "ground_state.n") {
            cfg.gs_n = parse_int(key, val, line);
        } else if (key == "detector.blowup_factor") {
            cfg.detect_factor = parse_double(key, val, line);
        } else if (key == "solver.fp_tol") {
            cfg.fp_tol = parse_double(key, val, line);
        } else if (key == "solver.fp_max_iter") {
            cfg.fp_max_iter = parse_int(key, val, line);
        } else if (key == "solver.dt_guard_factor") {
            cfg.dt_guard_factor = parse_double(key, val, line);
        } else {
            throw ConfigError("config line " + std::to_string(line) +
                              ": unknown key '" + key + "'");
        }
    }
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

RunConfig config_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return config_from_text(buf.str());
}

std::string config_to_text(const RunConfig& cfg) {
    std::ostringstream out;
    out.precision(17);
    out << "mode = " << (cfg.mode == RunMode::Nonlinear ? "nonlinear" : "linear") << "\n";
    out << "grid.r0 = " << cfg.r0 << "\n";
    out << "grid.r_max = " << cfg.r_max << "\n";
    out << "grid.n = " << cfg.n << "\n";
    out << "time.dt = " << cfg.dt << "\n";
    out << "time.t_end = " << cfg.t_end << "\n";
    out << "time.sample_every = " << cfg.sample_every << "\n";
    out << "sponge.enabled = " << (cfg.sponge_enabled ? "true" : "false") << "\n";
    out << "sponge.width_frac = " << cfg.sponge_width_frac << "\n";
    out << "sponge.strength = " << cfg.sponge_strength << "\n";
    const char* kind = "gaussian";
    if (cfg.init.kind == InitialData::Kind::GroundStateScaled) kind = "ground_state";
    if (cfg.init.kind == InitialData::Kind::Ring) kind = "ring";
    out << "init.kind = " << kind << "\n";
    out << "init.amplitude = " << cfg.init.amplitude << "\n";
    out << "init.width = " << cfg.init.width << "\n";
    out << "init.center = " << cfg.init.center << "\n";
    out << "init.scale = " << cfg.init.scale << "\n";
    out << "cutoff.R = " << cfg.cutoff_R << "\n";
    out << "cutoff.eta = " << cfg.cutoff_eta << "\n";
    out << "cutoff.n_tab = " << cfg.cutoff_n_tab << "\n";
    out << "cutoff.R0 = " << cfg.r_scale0 << "\n";
    out << "cutoff.J = " << cfg.j_decades << "\n";
    out << "cutoff.nR = " << cfg.n_r << "\n";
    out << "detector.eps = " << cfg.eps << "\n";
    out << "detector.window_len = " << cfg.window_len << "\n";
    out << "detector.delta_prime = " << cfg.delta_prime << "\n";
    out << "detector.rho = " << cfg.rho << "\n";
    out << "report.t0_list = ";
    for (std::size_t i = 0; i < cfg.t0_list.size(); ++i)
        out << (i ? ", " : "") << cfg.t0_list[i];
    out << "\n";
    out << "ground_state.tol = " << cfg.gs_tol << "\n";
    out << "ground_state.r_max = " << cfg.gs_r_max << "\n";
    out << "ground_state.n = " << cfg.gs_n << "\n";
    out << "detector.blowup_factor = " << cfg.detect_factor << "\n";
    out << "solver.fp_tol = " << cfg.fp_tol << "\n";
    out << "solver.fp_max_iter = " << cfg.fp_max_iter << "\n";
    out << "solver.dt_guard_factor = " << cfg.dt_guard_factor << "\n";
    return out.str();
}

}  // namespace nlslab
