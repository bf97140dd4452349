#include "gcm/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "gcm/csv.hpp"
#include "gcm/errors.hpp"
#include "gcm/site_maps.hpp"

namespace gcm {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw ConfigError("");
        return v;
    } catch (...) {
        throw ConfigError("value for '" + key + "' is not a number: " + value);
    }
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw ConfigError("value for '" + key + "' is not an unsigned integer: " + value);
    }
    return v;
}

int parse_int(const std::string& key, const std::string& value) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw ConfigError("value for '" + key + "' is not an integer: " + value);
    }
    return v;
}

std::vector<int> parse_int_list(const std::string& key, const std::string& value) {
    std::vector<int> out;
    if (trim(value).empty()) return out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_int(key, trim(item)));
    return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

const std::map<std::string, std::map<std::string, Setter>>& schema() {
    static const std::map<std::string, std::map<std::string, Setter>> s = {
        {"experiment",
         {
             {"kind", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.kind = v; }},
             {"seed", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.seed = parse_u64(k, v); }},
             {"threads", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.threads = parse_int(k, v); }},
             {"out", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.out = v; }},
         }},
        {"feedback",
         {
             {"amplitude", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.feedback.amplitude = parse_double(k, v); }},
             {"strength", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.feedback.strength = parse_double(k, v); }},
         }},
        {"bifurcation",
         {
             {"b_min", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.bifurcation.b_min = parse_double(k, v); }},
             {"b_max", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.bifurcation.b_max = parse_double(k, v); }},
             {"b_step", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.bifurcation.b_step = parse_double(k, v); }},
         }},
        {"ifs_orbit",
         {
             {"initial", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.ifs_orbit.initial = v; }},
             {"y0", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.ifs_orbit.y0 = parse_double(k, v); }},
             {"r0", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.ifs_orbit.r0 = parse_double(k, v); }},
             {"atoms", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.ifs_orbit.atoms = parse_u64(k, v); }},
             {"max_iter", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.ifs_orbit.max_iter = parse_u64(k, v); }},
             {"tol", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.ifs_orbit.tol = parse_double(k, v); }},
             {"merge_tol", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.ifs_orbit.merge_tol = parse_double(k, v); }},
         }},
        {"ensemble",
         {
             {"n", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.ensemble.n = parse_u64(k, v); }},
             {"steps", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.ensemble.steps = parse_u64(k, v); }},
             {"noise_epsilon", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.ensemble.noise_epsilon = parse_double(k, v); }},
             {"init", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.ensemble.init = v; }},
             {"init_r", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.ensemble.init_r = parse_double(k, v); }},
             {"reference", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.ensemble.reference = v; }},
             {"reference_r", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.ensemble.reference_r = parse_double(k, v); }},
             {"stride", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.ensemble.stride = parse_u64(k, v); }},
         }},
        {"verify",
         {
             {"criteria", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.verify.criteria = parse_int_list(k, v); }},
         }},
    };
    return s;
}

} // namespace

ExperimentConfig parse_config(std::istream& in) {
    ExperimentConfig config;
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']') throw ConfigError("unterminated section at line " + std::to_string(line_no));
            section = trim(t.substr(1, t.size() - 2));
            if (schema().find(section) == schema().end()) {
                throw ConfigError("unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key = value at line " + std::to_string(line_no));
        if (section.empty()) throw ConfigError("key outside any section at line " + std::to_string(line_no));
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        const auto& keys = schema().at(section);
        const auto it = keys.find(key);
        if (it == keys.end()) throw ConfigError("unknown key '" + key + "' in section [" + section + "]");
        it->second(config, key, value);
    }
    return config;
}

ExperimentConfig parse_config_string(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    return parse_config(in);
}

std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream os;
    os << "[experiment]\n";
    os << "kind = " << c.kind << "\n";
    os << "seed = " << c.seed << "\n";
    os << "threads = " << c.threads << "\n";
    os << "out = " << c.out << "\n";
    os << "[feedback]\n";
    os << "amplitude = " << format_real(c.feedback.amplitude) << "\n";
    os << "strength = " << format_real(c.feedback.strength) << "\n";
    os << "[bifurcation]\n";
    os << "b_min = " << format_real(c.bifurcation.b_min) << "\n";
    os << "b_max = " << format_real(c.bifurcation.b_max) << "\n";
    os << "b_step = " << format_real(c.bifurcation.b_step) << "\n";
    os << "[ifs_orbit]\n";
    os << "initial = " << c.ifs_orbit.initial << "\n";
    os << "y0 = " << format_real(c.ifs_orbit.y0) << "\n";
    os << "r0 = " << format_real(c.ifs_orbit.r0) << "\n";
    os << "atoms = " << c.ifs_orbit.atoms << "\n";
    os << "max_iter = " << c.ifs_orbit.max_iter << "\n";
    os << "tol = " << format_real(c.ifs_orbit.tol) << "\n";
    os << "merge_tol = " << format_real(c.ifs_orbit.merge_tol) << "\n";
    os << "[ensemble]\n";
    os << "n = " << c.ensemble.n << "\n";
    os << "steps = " << c.ensemble.steps << "\n";
    os << "noise_epsilon = " << format_real(c.ensemble.noise_epsilon) << "\n";
    os << "init = " << c.ensemble.init << "\n";
    os << "init_r = " << format_real(c.ensemble.init_r) << "\n";
    os << "reference = " << c.ensemble.reference << "\n";
    os << "reference_r = " << format_real(c.ensemble.reference_r) << "\n";
    os << "stride = " << c.ensemble.stride << "\n";
    os << "[verify]\n";
    os << "criteria = ";
    for (std::size_t i = 0; i < c.verify.criteria.size(); ++i) {
        if (i) os << ",";
        os << c.verify.criteria[i];
    }
    os << "\n";
    return os.str();
}

void validate_config(const ExperimentConfig& c) {
    if (!(c.feedback.amplitude > 0.0 && c.feedback.amplitude <= kParamBound)) {
        throw ConfigError("feedback.amplitude must be in (0, 0.4]");
    }
    if (c.feedback.strength < 0.0 || c.feedback.strength > 18.0) {
        throw ConfigError("feedback.strength must be in [0, 18]");
    }
    if (c.threads < 1) throw ConfigError("experiment.threads must be >= 1");
    if (c.kind == "bifurcation") {
        if (c.bifurcation.b_step <= 0.0 || c.bifurcation.b_max < c.bifurcation.b_min) {
            throw ConfigError("bifurcation sweep needs b_step > 0 and b_max >= b_min");
        }
        if (c.bifurcation.b_min < 0.0 || c.bifurcation.b_max > 18.0) {
            throw ConfigError("bifurcation sweep must stay within [0, 18]");
        }
    } else if (c.kind == "ifs-orbit") {
        const auto& o = c.ifs_orbit;
        if (o.initial != "delta" && o.initial != "mu_r" && o.initial != "uniform-atoms" &&
            o.initial != "symmetric-pair") {
            throw ConfigError("ifs_orbit.initial must be delta | mu_r | uniform-atoms | symmetric-pair");
        }
        if (std::fabs(o.y0) > kDualHalfWidth) throw ConfigError("ifs_orbit.y0 outside Y");
        if (std::fabs(o.r0) > kParamBound) throw ConfigError("ifs_orbit.r0 outside R");
        if (o.atoms == 0 || o.max_iter == 0) throw ConfigError("ifs_orbit.atoms and max_iter must be positive");
        if (!(o.tol > 0.0) || o.merge_tol < 0.0) throw ConfigError("ifs_orbit tolerances out of range");
    } else if (c.kind == "ensemble") {
        const auto& e = c.ensemble;
        if (e.n == 0 || e.steps == 0 || e.stride == 0) {
            throw ConfigError("ensemble.n, steps and stride must be positive");
        }
        if (e.noise_epsilon < 0.0 || e.noise_epsilon > 0.1) {
            throw ConfigError("ensemble.noise_epsilon must be in [0, 0.1]");
        }
        if (e.init != "uniform" && e.init != "invariant") {
            throw ConfigError("ensemble.init must be uniform | invariant");
        }
        if (e.reference != "none" && e.reference != "uniform" && e.reference != "invariant") {
            throw ConfigError("ensemble.reference must be none | uniform | invariant");
        }
        if (std::fabs(e.init_r) > kParamBound || std::fabs(e.reference_r) > kParamBound) {
            throw ConfigError("ensemble parameters must stay within R");
        }
    } else if (c.kind == "verify") {
        for (int id : c.verify.criteria) {
            if (id < 1 || id > 14) throw ConfigError("verify.criteria ids must be in 1..14");
        }
    } else {
        throw ConfigError("experiment.kind must be bifurcation | ifs-orbit | ensemble | verify");
    }
}

} // namespace gcm
