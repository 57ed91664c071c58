#include "hetpanel/io/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "hetpanel/core/error.hpp"

namespace hetpanel {

namespace {

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

int edit_distance(const std::string& a, const std::string& b) {
    std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
    for (size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
    for (size_t i = 1; i <= a.size(); ++i) {
        cur[0] = static_cast<int>(i);
        for (size_t j = 1; j <= b.size(); ++j) {
            const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

struct KeySpec {
    std::string section;
    std::string key;
};

const std::vector<KeySpec>& known_keys() {
    static const std::vector<KeySpec> keys = {
        {"network", "layers"},        {"network", "hidden"},
        {"network", "activation"},    {"network", "lr"},
        {"network", "batch_size"},    {"network", "l2"},
        {"network", "heads"},         {"train", "epochs"},
        {"train", "seeds"},           {"train", "channel"},
        {"train", "variant"},         {"gen", "cases"},
        {"gen", "mesh_along"},        {"gen", "mesh_per_bay"},
        {"gen", "residual_tol"},      {"gen", "stiffeners_min"},
        {"gen", "stiffeners_max"},    {"gen", "pressure_min"},
        {"gen", "pressure_max"},
    };
    return keys;
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
    throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& origin, int line, const std::string& key,
                    const std::string& value) {
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || *end != '\0') {
        fail(origin, line, "key '" + key + "' expects a number, got '" + value + "'");
    }
    return v;
}

int parse_int(const std::string& origin, int line, const std::string& key,
              const std::string& value) {
    char* end = nullptr;
    const long v = std::strtol(value.c_str(), &end, 10);
    if (end == value.c_str() || *end != '\0') {
        fail(origin, line, "key '" + key + "' expects an integer, got '" + value + "'");
    }
    return static_cast<int>(v);
}

void reject_unknown(const std::string& origin, int line, const std::string& section,
                    const std::string& key) {
    std::string best;
    int best_dist = 4;  // only suggest close matches
    for (const auto& k : known_keys()) {
        const int d = edit_distance(key, k.key);
        if (d < best_dist) {
            best_dist = d;
            best = "[" + k.section + "] " + k.key;
        }
    }
    std::string msg = "unknown key '" + key + "' in section [" + section + "]";
    if (!best.empty()) msg += "; did you mean " + best + "?";
    fail(origin, line, msg);
}

}  // namespace

void TrainSettings::validate() const {
    if (epochs < 1) throw ConfigError("epochs must be at least 1");
    if (seeds < 1) throw ConfigError("seeds must be at least 1");
}

void GenSettings::validate() const {
    if (cases < 0) throw ConfigError("cases must be non-negative");
    if (!(residual_tol > 0.0)) throw ConfigError("residual_tol must be positive");
    mesh.validate();
    ranges.validate();
}

void RunConfig::validate() const {
    network.validate();
    train.validate();
    gen.validate();
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        const size_t hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(origin, line_no, "unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "network" && section != "train" && section != "gen") {
                fail(origin, line_no, "unknown section [" + section + "]");
            }
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos) {
            fail(origin, line_no, "expected 'key = value', got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(origin, line_no, "empty key");
        if (value.empty()) fail(origin, line_no, "empty value for key '" + key + "'");
        if (section.empty()) fail(origin, line_no, "key '" + key + "' appears before any section");

        bool known = false;
        for (const auto& k : known_keys()) {
            if (k.section == section && k.key == key) {
                known = true;
                break;
            }
        }
        if (!known) reject_unknown(origin, line_no, section, key);

        try {
            if (section == "network") {
                if (key == "layers") cfg.network.layers = parse_int(origin, line_no, key, value);
                else if (key == "hidden") cfg.network.hidden = parse_int(origin, line_no, key, value);
                else if (key == "activation") cfg.network.activation = value;
                else if (key == "lr") cfg.network.lr = parse_double(origin, line_no, key, value);
                else if (key == "batch_size") cfg.network.batch_size = parse_int(origin, line_no, key, value);
                else if (key == "l2") cfg.network.l2 = parse_double(origin, line_no, key, value);
                else if (key == "heads") cfg.network.heads = parse_int(origin, line_no, key, value);
            } else if (section == "train") {
                if (key == "epochs") cfg.train.epochs = parse_int(origin, line_no, key, value);
                else if (key == "seeds") cfg.train.seeds = parse_int(origin, line_no, key, value);
                else if (key == "channel") cfg.train.channel = channel_from_string(value);
                else if (key == "variant") cfg.train.variant = variant_from_string(value);
            } else {  // gen
                if (key == "cases") cfg.gen.cases = parse_int(origin, line_no, key, value);
                else if (key == "mesh_along") cfg.gen.mesh.n_along = parse_int(origin, line_no, key, value);
                else if (key == "mesh_per_bay") cfg.gen.mesh.per_bay = parse_int(origin, line_no, key, value);
                else if (key == "residual_tol") cfg.gen.residual_tol = parse_double(origin, line_no, key, value);
                else if (key == "stiffeners_min") cfg.gen.ranges.n_stiffeners_min = parse_int(origin, line_no, key, value);
                else if (key == "stiffeners_max") cfg.gen.ranges.n_stiffeners_max = parse_int(origin, line_no, key, value);
                else if (key == "pressure_min") cfg.gen.casegen.pressure_min_pa = parse_double(origin, line_no, key, value);
                else if (key == "pressure_max") cfg.gen.casegen.pressure_max_pa = parse_double(origin, line_no, key, value);
            }
        } catch (const ConfigError& e) {
            // Re-wrap value-level errors (e.g. unknown channel) with position.
            fail(origin, line_no, e.what());
        }
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

std::string config_to_string(const RunConfig& cfg) {
    std::ostringstream out;
    out.precision(17);
    out << "[network]\n";
    out << "layers = " << cfg.network.layers << "\n";
    out << "hidden = " << cfg.network.hidden << "\n";
    out << "activation = " << cfg.network.activation << "\n";
    out << "lr = " << cfg.network.lr << "\n";
    out << "batch_size = " << cfg.network.batch_size << "\n";
    out << "l2 = " << cfg.network.l2 << "\n";
    out << "heads = " << cfg.network.heads << "\n";
    out << "\n[train]\n";
    out << "epochs = " << cfg.train.epochs << "\n";
    out << "seeds = " << cfg.train.seeds << "\n";
    out << "channel = " << channel_name(cfg.train.channel) << "\n";
    out << "variant = " << variant_name(cfg.train.variant) << "\n";
    out << "\n[gen]\n";
    out << "cases = " << cfg.gen.cases << "\n";
    out << "mesh_along = " << cfg.gen.mesh.n_along << "\n";
    out << "mesh_per_bay = " << cfg.gen.mesh.per_bay << "\n";
    out << "residual_tol = " << cfg.gen.residual_tol << "\n";
    out << "stiffeners_min = " << cfg.gen.ranges.n_stiffeners_min << "\n";
    out << "stiffeners_max = " << cfg.gen.ranges.n_stiffeners_max << "\n";
    out << "pressure_min = " << cfg.gen.casegen.pressure_min_pa << "\n";
    out << "pressure_max = " << cfg.gen.casegen.pressure_max_pa << "\n";
    return out.str();
}

}  // namespace hetpanel
