#include "rdcauchy/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "rdcauchy/error.hpp"

namespace rdcauchy {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto* end = v.data() + v.size();
    auto [p, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || p != end || !std::isfinite(out)) {
        throw ConfigError("config: " + key + " expects a number, got '" + v + "'");
    }
    return out;
}

long to_long(const std::string& key, const std::string& v) {
    long out = 0;
    const auto* end = v.data() + v.size();
    auto [p, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || p != end) {
        throw ConfigError("config: " + key + " expects an integer, got '" + v + "'");
    }
    return out;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("config: " + key + " expects true/false, got '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item)));
    if (out.empty()) throw ConfigError("config: " + key + " expects a non-empty list");
    return out;
}

std::string list_str(const std::vector<double>& v) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    return os.str();
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;
using Getter = std::function<std::string(const ExperimentConfig&)>;

struct Field {
    Setter set;
    Getter get;
};

template <typename T>
std::string num(T v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

#define RD_DOUBLE(name, expr)                                                                    \
    {name,                                                                                       \
     {[](ExperimentConfig& c, const std::string& k, const std::string& v) { expr = to_double(k, v); }, \
      [](const ExperimentConfig& c) { return num(expr); }}}
#define RD_INT(name, expr)                                                                       \
    {name,                                                                                       \
     {[](ExperimentConfig& c, const std::string& k, const std::string& v) {                     \
          expr = static_cast<decltype(expr)>(to_long(k, v));                                     \
      },                                                                                         \
      [](const ExperimentConfig& c) { return num(expr); }}}
#define RD_LIST(name, expr)                                                                      \
    {name,                                                                                       \
     {[](ExperimentConfig& c, const std::string& k, const std::string& v) { expr = to_list(k, v); }, \
      [](const ExperimentConfig& c) { return list_str(expr); }}}
#define RD_BOOL(name, expr)                                                                      \
    {name,                                                                                       \
     {[](ExperimentConfig& c, const std::string& k, const std::string& v) { expr = to_bool(k, v); }, \
      [](const ExperimentConfig& c) { return std::string(expr ? "true" : "false"); }}}

const std::map<std::string, Field>& fields() {
    static const std::map<std::string, Field> f = {
        RD_DOUBLE("A", c.domain.half_width),
        RD_DOUBLE("L", c.domain.height),
        RD_DOUBLE("a", c.domain.access_left),
        RD_DOUBLE("b", c.domain.access_right),
        RD_INT("nx", c.nx),
        RD_DOUBLE("k2", c.params.k2),
        RD_DOUBLE("mu0", c.params.mu0),
        RD_DOUBLE("mu1", c.params.mu1),
        RD_INT("n_iter", c.n_iter),
        RD_INT("extension_factor", c.extension_factor),
        RD_INT("max_extensions", c.max_extensions),
        RD_LIST("table1_mu", c.table1_mu),
        RD_DOUBLE("table1_L", c.table1_L),
        RD_LIST("table2_A", c.table2_A),
        RD_DOUBLE("table2_mu", c.table2_mu),
        RD_DOUBLE("k2_lo", c.k2_lo),
        RD_DOUBLE("k2_hi", c.k2_hi),
        RD_DOUBLE("k2_resolution", c.k2_resolution),
        RD_LIST("table3_L", c.table3_L),
        RD_LIST("table3_k2", c.table3_k2),
        RD_DOUBLE("mu_max", c.mu_max),
        RD_DOUBLE("mu_resolution", c.mu_resolution),
        RD_DOUBLE("localization_tol", c.localization_tol),
        RD_DOUBLE("bump_bottom_center", c.bump_bottom.center),
        RD_DOUBLE("bump_bottom_half_width", c.bump_bottom.half_width),
        RD_DOUBLE("bump_bottom_amplitude", c.bump_bottom.amplitude),
        RD_DOUBLE("bump_top_center", c.bump_top.center),
        RD_DOUBLE("bump_top_half_width", c.bump_top.half_width),
        RD_DOUBLE("bump_top_amplitude", c.bump_top.amplitude),
        {"out",
         {[](ExperimentConfig& c, const std::string&, const std::string& v) { c.out = v; },
          [](const ExperimentConfig& c) { return c.out.string(); }}},
        RD_INT("seed", c.seed),
        RD_INT("threads", c.threads),
        RD_BOOL("render_svg", c.render_svg),
        RD_BOOL("paper_scale", c.paper_scale),
    };
    return f;
}

#undef RD_DOUBLE
#undef RD_INT
#undef RD_LIST
#undef RD_BOOL

}  // namespace

void ExperimentConfig::validate() const {
    try {
        domain.validate();
        params.validate();
        bump_bottom.validate();
        bump_top.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    auto fail = [](const std::string& m) { throw ConfigError("config: " + m); };
    if (nx < 8) fail("nx must be at least 8");
    if (n_iter < 100) fail("n_iter must be at least 100 for classification");
    if (extension_factor < 2) fail("extension_factor must be at least 2");
    if (max_extensions < 0) fail("max_extensions must be >= 0");
    if (!(k2_lo < k2_hi)) fail("k2_lo must be below k2_hi");
    if (!(k2_resolution > 0.0) || !(mu_resolution > 0.0)) fail("resolutions must be positive");
    if (!(mu_max >= 1.0)) fail("mu_max must be at least 1");
    if (!(localization_tol > 0.0 && localization_tol < 1.0)) fail("localization_tol must lie in (0, 1)");
    if (!(table1_L > 0.0)) fail("table1_L must be positive");
    if (!(table2_mu >= 0.0)) fail("table2_mu must be >= 0");
    for (double m : table1_mu) {
        if (!(m >= 0.0)) fail("table1_mu entries must be >= 0");
    }
    for (double A : table2_A) {
        if (!(A > domain.access_right && -A < domain.access_left)) fail("table2_A entries must contain [a, b]");
    }
    for (double L : table3_L) {
        if (!(L > 0.0)) fail("table3_L entries must be positive");
    }
    if (threads < 0) fail("threads must be >= 0");
    if (bump_bottom.center - bump_bottom.half_width < domain.access_left - 1e-12 ||
        bump_bottom.center + bump_bottom.half_width > domain.access_right + 1e-12) {
        fail("bottom bump must be supported in [a, b]");
    }
}

int ExperimentConfig::nx_for(double A) const {
    // Same mesh width on every half-width: nx intervals on the configured A,
    // or h = 8 / 1601 (the A = 4 setup) with paper_scale.
    if (paper_scale) return static_cast<int>(std::lround(1601.0 * A / 4.0));
    return static_cast<int>(std::lround(nx * A / domain.half_width));
}

SweepSetup ExperimentConfig::sweep_setup(const DomainSpec& d) const {
    SweepSetup s;
    s.domain = d;
    s.nx = nx_for(d.half_width);
    s.bottom = bump_bottom;
    s.top = bump_top;
    s.policy = ExtensionPolicy{n_iter, extension_factor, max_extensions, true};
    return s;
}

void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    const auto it = fields().find(key);
    if (it == fields().end()) throw ConfigError("config: unknown key '" + key + "'");
    it->second.set(cfg, key, value);
}

ExperimentConfig parse_config(const std::string& text, ExperimentConfig cfg) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty value for " + key);
        set_config_value(cfg, key, value);
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), std::move(base));
}

std::vector<std::string> config_keys() {
    std::vector<std::string> keys;
    for (const auto& [k, _] : fields()) keys.push_back(k);
    return keys;
}

std::string dump_config(const ExperimentConfig& cfg) {
    std::ostringstream os;
    for (const auto& [k, f] : fields()) os << k << " = " << f.get(cfg) << '\n';
    return os.str();
}

}  // namespace rdcauchy
