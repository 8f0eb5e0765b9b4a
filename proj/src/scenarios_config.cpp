#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "json.hpp"

#include "ggred/errors.hpp"
#include "ggred/scenarios.hpp"

namespace ggred {

using nlohmann::json;

namespace {

const std::vector<std::string> kCommonParameters{"samples", "seed"};

std::string join(const std::vector<std::string>& v, const char* sep) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
    return out;
}

int line_of(const std::string& text, size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(byte), '\n'));
}

double as_number(const json& v, const std::string& where) {
    if (!v.is_number()) throw ConfigError(where + ": expected a number");
    return v.get<double>();
}

std::uint64_t as_seed(double v, const std::string& where) {
    if (v < 0 || v != std::floor(v) || v > 9007199254740992.0)
        throw ConfigError(where + ": seed must be a non-negative integer");
    return static_cast<std::uint64_t>(v);
}

std::string fmt(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

}  // namespace

const std::vector<std::pair<std::string, std::string>>& check_registry() {
    static const std::vector<std::pair<std::string, std::string>> checks{
        {"courant", "Bismut connection from the projected H-twisted Courant bracket"},
        {"pair_symmetry", "R-(X,Y,Z,W) = R+(Z,W,X,Y)"},
        {"lemma62", "curvature of the horizontal connections from dξ±"},
        {"thm63", "reduced curvature from ambient data vs the quotient chart"},
        {"oneill", "reduced curvature vs the O'Neill submersion formula (H = 0, ξ = 0)"},
        {"thm65", "curvature on the zero locus vs the induced data"},
        {"localization", "Berezin elimination chain vs the curvature contraction"},
        {"phi_closed_form", "stationary φ+- vs its closed form"},
        {"euler", "Gauss-Bonnet integral of Pf(R-)"},
        {"pfaffian", "Pf(A)^2 = det(A) on random antisymmetric matrices"},
        {"gk", "generalized Kähler validation or reduction"},
        {"extended_action", "isotropy, equivariance and invariance of the extended action"},
        {"identities", "dH = 0, metric compatibility and curvature symmetries"},
    };
    return checks;
}

const std::vector<ScenarioInfo>& scenario_registry() {
    static const std::vector<ScenarioInfo> reg{
        {"flat_torus", "flat T² with H = 0", {{"order", 8}},
         {"courant", "pair_symmetry", "identities", "euler", "pfaffian"}},
        {"round_sphere", "round S² of the given radius", {{"radius", 1.0}, {"order", 24}},
         {"courant", "pair_symmetry", "identities", "euler", "pfaffian"}},
        {"hopf", "S³ → S² Hopf quotient, H = λ vol, ξ solved from dξ = ι_V H",
         {{"lambda", 0.0}, {"xi_scale", 1.0}},
         {"courant", "pair_symmetry", "identities", "extended_action", "lemma62", "thm63", "oneill", "localization",
          "phi_closed_form"}},
        {"hopf_flux", "Hopf quotient at the Bismut-flat flux λ = 2", {{"lambda", 2.0}, {"xi_scale", 1.0}},
         {"courant", "pair_symmetry", "identities", "extended_action", "lemma62", "thm63", "localization",
          "phi_closed_form"}},
        {"product_qg", "S² × S¹ → S² with H = c vol_{S²} ∧ dt, ξ = −c cosθ dφ", {{"c", 0.7}},
         {"courant", "pair_symmetry", "identities", "extended_action", "lemma62", "thm63", "oneill", "localization",
          "phi_closed_form"}},
        {"sphere_in_flat", "unit sphere σ = |x|² − 1 in R³ with H = c dx∧dy∧dz", {{"c", 0.5}},
         {"courant", "pair_symmetry", "identities", "thm65", "localization"}},
        {"s3xs1_gk", "S³ × S¹ with H = λ sinη cosη dη∧dξ1∧dξ2 and left/right J±", {{"lambda", 2.0}, {"order", 8}},
         {"courant", "pair_symmetry", "identities", "gk", "euler"}},
        {"hopf_torus", "S³ × T² → S² × T² with two flux components", {{"lambda", 0.9}, {"nu", 0.4}, {"mu", 0.3}},
         {"courant", "pair_symmetry", "identities", "extended_action", "lemma62", "thm63", "localization",
          "phi_closed_form"}},
        {"kahler_hopf", "S³ ⊂ R⁴ divided by the circle, Kähler J", {},
         {"pair_symmetry", "identities", "extended_action", "lemma62", "gk"}},
        {"sphere_product", "S² × S² product of unit spheres", {{"order", 8}},
         {"pair_symmetry", "identities", "euler", "pfaffian"}},
    };
    return reg;
}

const ScenarioInfo& find_scenario(const std::string& name) {
    if (name == "custom")
        throw ConfigError("scenario 'custom' is built through the library API and cannot be loaded from a config");
    for (const auto& s : scenario_registry())
        if (s.name == name) return s;
    throw ConfigError("unknown scenario '" + name + "'");
}

ScenarioConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    ScenarioConfig cfg;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        const json& v = it.value();
        if (key == "scenario") {
            if (!v.is_string()) throw ConfigError("scenario: expected a string");
            cfg.scenario = v.get<std::string>();
        } else if (key == "parameters") {
            if (!v.is_object()) throw ConfigError("parameters: expected an object");
            for (auto p = v.begin(); p != v.end(); ++p)
                cfg.parameters[p.key()] = as_number(p.value(), "parameters." + p.key());
        } else if (key == "tolerances") {
            if (!v.is_object()) throw ConfigError("tolerances: expected an object");
            for (auto p = v.begin(); p != v.end(); ++p)
                cfg.tolerances[p.key()] = as_number(p.value(), "tolerances." + p.key());
        } else if (key == "checks") {
            if (!v.is_array()) throw ConfigError("checks: expected an array of check ids");
            for (const auto& c : v) {
                if (!c.is_string()) throw ConfigError("checks: expected an array of check ids");
                cfg.checks.push_back(c.get<std::string>());
            }
        } else if (key == "seed") {
            cfg.seed = as_seed(as_number(v, "seed"), "seed");
        } else {
            throw ConfigError("unknown key '" + key + "'");
        }
    }
    if (cfg.scenario.empty()) throw ConfigError("missing key 'scenario'");
    if (auto s = cfg.parameters.find("seed"); s != cfg.parameters.end()) {
        cfg.seed = as_seed(s->second, "parameters.seed");
        cfg.parameters.erase(s);
    }
    check_config(cfg);
    return cfg;
}

void apply_override(ScenarioConfig& config, const std::string& assignment) {
    auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + assignment + "'");
    std::string key = assignment.substr(0, eq), val = assignment.substr(eq + 1);
    double v;
    try {
        size_t used = 0;
        v = std::stod(val, &used);
        if (used != val.size()) throw std::invalid_argument(val);
    } catch (const std::exception&) {
        throw ConfigError(key + ": expected a number, got '" + val + "'");
    }
    if (key == "seed") config.seed = as_seed(v, "seed");
    else config.parameters[key] = v;
}

void check_config(const ScenarioConfig& config) {
    const ScenarioInfo& info = find_scenario(config.scenario);
    for (const auto& [key, v] : config.parameters) {
        bool known = info.defaults.count(key) ||
                     std::find(kCommonParameters.begin(), kCommonParameters.end(), key) != kCommonParameters.end();
        if (!known) {
            std::vector<std::string> names;
            for (const auto& [k, d] : info.defaults) names.push_back(k);
            names.insert(names.end(), kCommonParameters.begin(), kCommonParameters.end());
            throw ConfigError("unknown parameter '" + key + "' for scenario '" + info.name + "' (known: " +
                              join(names, ", ") + ")");
        }
        if (!std::isfinite(v)) throw ConfigError("parameters." + key + ": must be finite");
    }
    if (auto s = config.parameters.find("samples"); s != config.parameters.end())
        if (s->second < 1 || s->second != std::floor(s->second) || s->second > 100000)
            throw ConfigError("parameters.samples: expected an integer in [1, 100000]");
    if (auto s = config.parameters.find("order"); s != config.parameters.end())
        if (s->second < 1 || s->second != std::floor(s->second) || s->second > 64)
            throw ConfigError("parameters.order: expected an integer in [1, 64]");
    if (auto s = config.parameters.find("radius"); s != config.parameters.end())
        if (!(s->second > 0)) throw ConfigError("parameters.radius: must be positive");
    for (const auto& [key, v] : config.tolerances) {
        if (key != "identity" && key != "cross")
            throw ConfigError("unknown tolerance '" + key + "' (known: identity, cross)");
        if (!(v > 0)) throw ConfigError("tolerances." + key + ": must be positive");
    }
    const auto& all = check_registry();
    for (const auto& c : config.checks) {
        bool exists = std::any_of(all.begin(), all.end(), [&](const auto& p) { return p.first == c; });
        if (!exists) throw ConfigError("unknown check '" + c + "'");
        if (std::find(info.checks.begin(), info.checks.end(), c) == info.checks.end())
            throw ConfigError("check '" + c + "' is not available for scenario '" + info.name +
                              "' (available: " + join(info.checks, ", ") + ")");
    }
}

std::string report_json(const ScenarioReport& r) {
    nlohmann::ordered_json j;
    j["version"] = r.version;
    j["scenario"] = r.scenario;
    j["parameters"] = r.parameters;
    j["seed"] = r.seed;
    j["checks"] = nlohmann::ordered_json::array();
    for (const auto& c : r.checks) {
        nlohmann::ordered_json e;
        e["id"] = c.id;
        e["points"] = c.points;
        e["max_residual"] = c.max_residual;
        e["tolerance"] = c.tolerance;
        e["status"] = c.status;
        j["checks"].push_back(e);
    }
    j["status"] = r.pass ? "pass" : "fail";
    return j.dump(2) + "\n";
}

std::string report_text(const ScenarioReport& r) {
    std::ostringstream os;
    os << "scenario " << r.scenario << "  seed " << r.seed << "\n";
    os << "parameters";
    for (const auto& [k, v] : r.parameters) os << "  " << k << "=" << fmt(v);
    os << "\ntolerances";
    for (const auto& [k, v] : r.tolerances) os << "  " << k << "=" << fmt(v);
    os << "\n\n";
    os << std::left << std::setw(17) << "check" << std::right << std::setw(8) << "points" << std::setw(14)
       << "max_residual" << std::setw(12) << "tolerance" << "  " << std::left << std::setw(12) << "status"
       << "value\n";
    for (const auto& c : r.checks) {
        std::ostringstream res, tol;
        res << std::scientific << std::setprecision(2) << c.max_residual;
        tol << std::scientific << std::setprecision(1) << c.tolerance;
        os << std::left << std::setw(17) << c.id << std::right << std::setw(8) << c.points << std::setw(14)
           << res.str() << std::setw(12) << tol.str() << "  ";
        if (c.id == "euler") os << std::left << std::setw(12) << c.status << fmt(c.value);
        else os << c.status;
        os << "\n";
    }
    os << "\nstatus " << (r.pass ? "pass" : "fail") << "\n";
    return os.str();
}

std::string registry_text() {
    std::ostringstream os;
    os << "scenarios\n";
    for (const auto& s : scenario_registry()) {
        os << "  " << std::left << std::setw(16) << s.name << s.description << "\n";
        os << "  " << std::setw(16) << "" << "parameters:";
        for (const auto& [k, v] : s.defaults) os << " " << k << "=" << fmt(v);
        os << " samples=20 seed=42\n";
        os << "  " << std::setw(16) << "" << "checks: " << join(s.checks, " ") << "\n";
    }
    os << "\nchecks\n";
    for (const auto& [id, desc] : check_registry()) os << "  " << std::left << std::setw(17) << id << desc << "\n";
    return os.str();
}

}  // namespace ggred
