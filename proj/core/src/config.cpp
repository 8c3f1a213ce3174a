#include "nighthawk/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "nighthawk/errors.hpp"

namespace nh::config {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t");
    return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': not a number: '" + value + "'");
    }
}

int parse_int(const std::string& key, const std::string& value) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw ConfigError("key '" + key + "': not an integer: '" + value + "'");
    }
    return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw ConfigError("key '" + key + "': not an unsigned integer: '" + value + "'");
    }
    return v;
}

} // namespace

void RunConfig::validate() const {
    try {
        scenario.validate();
        space.validate();
        trigger.validate();
        if (budget.n_init < 2 || budget.max_evals < budget.n_init) {
            throw InvalidInputError("budget requires n_init >= 2 and max_evals >= n_init");
        }
        if (budget.ei_floor < 0.0) throw InvalidInputError("ei_floor must be >= 0");
        if (xi < 0.0) throw InvalidInputError("ei_xi must be >= 0");
        if (!(path_step_m > 0.0) || !(path_end_m > path_start_m) || path_start_m < 0.0) {
            throw InvalidInputError("path requires 0 <= start < end and step > 0");
        }
        if (match_k < 1 || match_radius < 0) {
            throw InvalidInputError("match_k must be >= 1 and match_radius >= 0");
        }
        if (sweep_frames < 2) throw InvalidInputError("sweep_frames must be >= 2");
        if (!(sweep_light >= 0.0 && sweep_light <= 1.0)) {
            throw InvalidInputError("sweep_light must lie in [0,1]");
        }
        if (sweep_pose_m < 0.0) throw InvalidInputError("sweep_pose_m must be >= 0");
        if (!(ae_target > 0.0 && ae_target <= 1.0) || ae_rate < 0.0) {
            throw InvalidInputError("invalid autoexposure parameters");
        }
        if (!(ae_min_ms > 0.0 && ae_max_ms > ae_min_ms)) {
            throw InvalidInputError("camera AE range requires 0 < min < max");
        }
    } catch (const InvalidInputError& e) {
        throw ConfigError(e.what());
    }
}

std::vector<double> RunConfig::make_path() const {
    std::vector<double> path;
    for (int i = 0;; ++i) {
        const double d = path_start_m + static_cast<double>(i) * path_step_m;
        if (d >= path_end_m) break;
        path.push_back(d);
    }
    return path;
}

mission::MissionConfig RunConfig::make_mission(mission::ConfigMode mode) const {
    mission::MissionConfig m;
    m.scenario = scenario;
    m.path = make_path();
    m.mode = mode;
    m.trigger = trigger;
    m.budget = budget;
    m.space = space;
    m.ae_target = ae_target;
    m.ae_rate = ae_rate;
    m.ae_min_ms = ae_min_ms;
    m.ae_max_ms = ae_max_ms;
    m.match_k = match_k;
    m.match_radius = match_radius;
    m.metric_params = metrics;
    m.seed = seed;
    return m;
}

RunConfig parse(const std::string& text) {
    RunConfig cfg;
    using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;
    static const std::map<std::string, Setter> setters = {
        {"width", [](RunConfig& c, const std::string& k, const std::string& v) { c.scenario.width = parse_int(k, v); }},
        {"height", [](RunConfig& c, const std::string& k, const std::string& v) { c.scenario.height = parse_int(k, v); }},
        {"texture_seed", [](RunConfig& c, const std::string& k, const std::string& v) { c.scenario.texture_seed = parse_u64(k, v); }},
        {"texture_cell_px", [](RunConfig& c, const std::string& k, const std::string& v) { c.scenario.texture_cell_px = parse_double(k, v); }},
        {"scroll_px_per_m", [](RunConfig& c, const std::string& k, const std::string& v) { c.scenario.scroll_px_per_m = parse_double(k, v); }},
        {"ambient_out", [](RunConfig& c, const std::string& k, const std::string& v) { c.scenario.ambient_out = parse_double(k, v); }},
        {"ambient_floor", [](RunConfig& c, const std::string& k, const std::string& v) { c.scenario.ambient_floor = parse_double(k, v); }},
        {"decay_depth_m", [](RunConfig& c, const std::string& k, const std::string& v) { c.scenario.decay_depth_m = parse_double(k, v); }},
        {"culvert_in_m", [](RunConfig& c, const std::string& k, const std::string& v) { c.scenario.culvert_in_m = parse_double(k, v); }},
        {"culvert_out_m", [](RunConfig& c, const std::string& k, const std::string& v) { c.scenario.culvert_out_m = parse_double(k, v); }},
        {"led_gain", [](RunConfig& c, const std::string& k, const std::string& v) { c.scenario.led_gain = parse_double(k, v); }},
        {"specular_fraction", [](RunConfig& c, const std::string& k, const std::string& v) { c.scenario.specular_fraction = parse_double(k, v); }},
        {"specular_strength", [](RunConfig& c, const std::string& k, const std::string& v) { c.scenario.specular_strength = parse_double(k, v); }},
        {"gamma", [](RunConfig& c, const std::string& k, const std::string& v) { c.scenario.gamma = parse_double(k, v); }},
        {"read_noise", [](RunConfig& c, const std::string& k, const std::string& v) { c.scenario.read_noise = parse_double(k, v); }},
        {"shot_noise", [](RunConfig& c, const std::string& k, const std::string& v) { c.scenario.shot_noise = parse_double(k, v); }},
        {"exposure_ref_ms", [](RunConfig& c, const std::string& k, const std::string& v) { c.scenario.exposure_ref_ms = parse_double(k, v); }},
        {"light_min", [](RunConfig& c, const std::string& k, const std::string& v) { c.space.light_min = parse_double(k, v); }},
        {"light_max", [](RunConfig& c, const std::string& k, const std::string& v) { c.space.light_max = parse_double(k, v); }},
        {"exposure_min_ms", [](RunConfig& c, const std::string& k, const std::string& v) { c.space.exposure_min_ms = parse_double(k, v); }},
        {"exposure_max_ms", [](RunConfig& c, const std::string& k, const std::string& v) { c.space.exposure_max_ms = parse_double(k, v); }},
        {"n_init", [](RunConfig& c, const std::string& k, const std::string& v) { c.budget.n_init = parse_int(k, v); }},
        {"max_evals", [](RunConfig& c, const std::string& k, const std::string& v) { c.budget.max_evals = parse_int(k, v); }},
        {"ei_floor", [](RunConfig& c, const std::string& k, const std::string& v) { c.budget.ei_floor = parse_double(k, v); }},
        {"ei_xi", [](RunConfig& c, const std::string& k, const std::string& v) { c.xi = parse_double(k, v); }},
        {"epsilon", [](RunConfig& c, const std::string& k, const std::string& v) { c.trigger.epsilon = parse_double(k, v); }},
        {"debounce_n", [](RunConfig& c, const std::string& k, const std::string& v) { c.trigger.debounce_n = parse_int(k, v); }},
        {"ae_target", [](RunConfig& c, const std::string& k, const std::string& v) { c.ae_target = parse_double(k, v); }},
        {"ae_rate", [](RunConfig& c, const std::string& k, const std::string& v) { c.ae_rate = parse_double(k, v); }},
        {"ae_min_ms", [](RunConfig& c, const std::string& k, const std::string& v) { c.ae_min_ms = parse_double(k, v); }},
        {"ae_max_ms", [](RunConfig& c, const std::string& k, const std::string& v) { c.ae_max_ms = parse_double(k, v); }},
        {"path_start_m", [](RunConfig& c, const std::string& k, const std::string& v) { c.path_start_m = parse_double(k, v); }},
        {"path_end_m", [](RunConfig& c, const std::string& k, const std::string& v) { c.path_end_m = parse_double(k, v); }},
        {"path_step_m", [](RunConfig& c, const std::string& k, const std::string& v) { c.path_step_m = parse_double(k, v); }},
        {"match_k", [](RunConfig& c, const std::string& k, const std::string& v) { c.match_k = parse_int(k, v); }},
        {"match_radius", [](RunConfig& c, const std::string& k, const std::string& v) { c.match_radius = parse_int(k, v); }},
        {"sweep_frames", [](RunConfig& c, const std::string& k, const std::string& v) { c.sweep_frames = parse_int(k, v); }},
        {"sweep_light", [](RunConfig& c, const std::string& k, const std::string& v) { c.sweep_light = parse_double(k, v); }},
        {"sweep_pose_m", [](RunConfig& c, const std::string& k, const std::string& v) { c.sweep_pose_m = parse_double(k, v); }},
        {"shim_lambda", [](RunConfig& c, const std::string& k, const std::string& v) { c.metrics.shim_lambda = parse_double(k, v); }},
        {"shim_delta", [](RunConfig& c, const std::string& k, const std::string& v) { c.metrics.shim_delta = parse_double(k, v); }},
        {"softperc_top_frac", [](RunConfig& c, const std::string& k, const std::string& v) { c.metrics.softperc_top_frac = parse_double(k, v); }},
        {"newg_c", [](RunConfig& c, const std::string& k, const std::string& v) { c.metrics.newg_c = parse_double(k, v); }},
        {"reliab_cn", [](RunConfig& c, const std::string& k, const std::string& v) { c.metrics.reliab_cn = parse_double(k, v); }},
        {"seed", [](RunConfig& c, const std::string& k, const std::string& v) { c.seed = parse_u64(k, v); }},
    };

    std::istringstream is(text);
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.resize(hash);
        }
        const std::string stripped = trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ConfigError("line " + std::to_string(line_no) + ": empty key or value");
        }
        const auto it = setters.find(key);
        if (it == setters.end()) {
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
        it->second(cfg, key, value);
    }
    cfg.budget.seed = cfg.seed;
    cfg.validate();
    return cfg;
}

RunConfig load(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ConfigError("cannot open config: " + path.string());
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse(buf.str());
}

} // namespace nh::config
