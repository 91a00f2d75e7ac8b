#include "mbump/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "mbump/errors.hpp"
#include "mbump/grid.hpp"

namespace mbump {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw ConfigError("key '" + key + "' expects a number, got '" + v + "'");
    return out;
}

long long to_integer(const std::string& key, const std::string& v) {
    long long out = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw ConfigError("key '" + key + "' expects an integer, got '" + v + "'");
    return out;
}

int to_int(const std::string& key, const std::string& v) {
    const long long x = to_integer(key, v);
    if (x < INT32_MIN || x > INT32_MAX) throw ConfigError("key '" + key + "' is out of range");
    return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("key '" + key + "' expects true or false, got '" + v + "'");
}

template <class T, class Conv>
std::vector<T> to_list(const std::string& key, const std::string& v, Conv conv) {
    std::vector<T> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(conv(key, trim(item)));
    if (out.empty()) throw ConfigError("key '" + key + "' expects a non-empty list");
    return out;
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"lambda", [](RunConfig& c, auto& k, auto& v) { c.params.lambda = to_double(k, v); }},
        {"alpha0", [](RunConfig& c, auto& k, auto& v) { c.params.alpha0 = to_double(k, v); }},
        {"alpha1", [](RunConfig& c, auto& k, auto& v) { c.params.alpha1 = to_double(k, v); }},
        {"beta",
         [](RunConfig& c, auto& k, auto& v) {
             if (v == "auto") {
                 c.beta_auto = true;
             } else {
                 c.params.beta = to_double(k, v);
                 c.beta_auto = false;
             }
         }},
        {"mu0", [](RunConfig& c, auto& k, auto& v) { c.params.mu0 = to_double(k, v); }},
        {"a", [](RunConfig& c, auto& k, auto& v) { c.params.a = to_double(k, v); }},
        {"m", [](RunConfig& c, auto& k, auto& v) { c.params.m = to_double(k, v); }},
        {"theta", [](RunConfig& c, auto& k, auto& v) { c.params.theta = to_double(k, v); }},
        {"tau0", [](RunConfig& c, auto& k, auto& v) { c.params.tau0 = to_double(k, v); }},
        {"k", [](RunConfig& c, auto& k, auto& v) { c.params.k = to_int(k, v); }},
        {"N", [](RunConfig& c, auto& k, auto& v) { c.params.dim = to_int(k, v); }},
        {"potential", [](RunConfig& c, auto&, auto& v) { c.params.potential = parse_potential_kind(v); }},
        {"potential_scale", [](RunConfig& c, auto& k, auto& v) { c.params.potential_scale = to_double(k, v); }},
        {"h", [](RunConfig& c, auto& k, auto& v) { c.h = to_double(k, v); }},
        {"L", [](RunConfig& c, auto& k, auto& v) { c.L = to_double(k, v); }},
        {"tol", [](RunConfig& c, auto& k, auto& v) { c.tol = to_double(k, v); }},
        {"max_iter", [](RunConfig& c, auto& k, auto& v) { c.max_iter = to_int(k, v); }},
        {"safety", [](RunConfig& c, auto& k, auto& v) { c.safety = to_double(k, v); }},
        {"n_coarse", [](RunConfig& c, auto& k, auto& v) { c.n_coarse = to_int(k, v); }},
        {"tol_R", [](RunConfig& c, auto& k, auto& v) { c.tol_R = to_double(k, v); }},
        {"R", [](RunConfig& c, auto& k, auto& v) { c.R = to_double(k, v); }},
        {"check_beta0", [](RunConfig& c, auto& k, auto& v) { c.check_beta0 = to_bool(k, v); }},
        {"dump_fields", [](RunConfig& c, auto& k, auto& v) { c.dump_fields = to_bool(k, v); }},
        {"k_list", [](RunConfig& c, auto& k, auto& v) { c.k_list = to_list<int>(k, v, to_int); }},
        {"etas", [](RunConfig& c, auto& k, auto& v) { c.etas = to_list<double>(k, v, to_double); }},
        {"samples", [](RunConfig& c, auto& k, auto& v) { c.samples = to_int(k, v); }},
        {"lemma_mu_radii",
         [](RunConfig& c, auto& k, auto& v) { c.lemma_mu_radii = to_list<double>(k, v, to_double); }},
        {"cross_radii", [](RunConfig& c, auto& k, auto& v) { c.cross_radii = to_list<double>(k, v, to_double); }},
        {"dr", [](RunConfig& c, auto& k, auto& v) { c.dr = to_double(k, v); }},
        {"sech_oracle", [](RunConfig& c, auto& k, auto& v) { c.sech_oracle = to_bool(k, v); }},
        {"seed",
         [](RunConfig& c, auto& k, auto& v) {
             const long long s = to_integer(k, v);
             if (s < 0) throw ConfigError("seed must be non-negative");
             c.seed = static_cast<std::uint64_t>(s);
         }},
    };
    return table;
}

void check(const RunConfig& c) {
    try {
        c.params.validate();
        derive_exponents(c.params);
    } catch (const AssumptionError& e) {
        throw ConfigError(e.what());
    }
    auto positive = [](double x, const char* name) {
        if (!(x > 0.0)) throw ConfigError(std::string(name) + " must be positive");
    };
    if (c.h != 0.0) positive(c.h, "h");
    if (c.L != 0.0) positive(c.L, "L");
    if (c.R != 0.0) positive(c.R, "R");
    positive(c.tol, "tol");
    positive(c.tol_R, "tol_R");
    positive(c.dr, "dr");
    if (!(c.safety > 0.0 && c.safety < 1.0)) throw ConfigError("safety must lie in (0, 1)");
    if (c.max_iter < 1) throw ConfigError("max_iter must be at least 1");
    if (c.n_coarse < 9) throw ConfigError("n_coarse must be at least 9");
    if (c.samples < 1) throw ConfigError("samples must be at least 1");
    for (int k : c.k_list)
        if (k < 2) throw ConfigError("entries of k_list must be at least 2");
    for (double e : c.etas)
        if (!(e > 0.0 && e <= 2.0)) throw ConfigError("entries of etas must lie in (0, 2]");
    for (double r : c.lemma_mu_radii) positive(r, "lemma_mu_radii entries");
    for (double r : c.cross_radii) positive(r, "cross_radii entries");
}

}  // namespace

double RunConfig::spacing() const { return h > 0.0 ? h : default_spacing(params.dim); }

RunConfig parse_config(const std::string& text) {
    RunConfig c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end()) throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (value.empty()) throw ConfigError("line " + std::to_string(lineno) + ": missing value for '" + key + "'");
        try {
            it->second(c, key, value);
        } catch (const Error& e) {
            throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    check(c);
    c.params = normalize_mu0(c.params);
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void to_json(nlohmann::json& j, const RunConfig& c) {
    const ModelParams& p = c.params;
    j = nlohmann::json{{"lambda", p.lambda},
                       {"alpha0", p.alpha0},
                       {"alpha1", p.alpha1},
                       {"beta", c.beta_auto ? nlohmann::json("auto") : nlohmann::json(p.beta)},
                       {"mu0", p.mu0},
                       {"a", p.a},
                       {"m", p.m},
                       {"theta", p.theta},
                       {"tau0", derive_exponents(p).tau0},
                       {"k", p.k},
                       {"N", p.dim},
                       {"potential", to_string(p.potential)},
                       {"potential_scale", p.potential_scale},
                       {"h", c.spacing()},
                       {"L", c.L},
                       {"tol", c.tol},
                       {"max_iter", c.max_iter},
                       {"safety", c.safety},
                       {"n_coarse", c.n_coarse},
                       {"tol_R", c.tol_R},
                       {"R", c.R},
                       {"check_beta0", c.check_beta0},
                       {"dump_fields", c.dump_fields},
                       {"k_list", c.k_list},
                       {"etas", c.etas},
                       {"samples", c.samples},
                       {"lemma_mu_radii", c.lemma_mu_radii},
                       {"cross_radii", c.cross_radii},
                       {"dr", c.dr},
                       {"sech_oracle", c.sech_oracle},
                       {"seed", c.seed}};
}

}  // namespace mbump
