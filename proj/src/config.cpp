#include "infolab/config.hpp"

#include "infolab/identities.hpp"

#include "json.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace infolab {

namespace {

using nlohmann::json;

double number(const json& obj, const std::string& key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError("\"" + key + "\" must be a number");
    return v.get<double>();
}

Distribution make_distribution(const json& spec, const std::string& role) {
    if (!spec.is_object()) throw ConfigError(role + " must be an object with a \"kind\"");
    if (!spec.contains("kind") || !spec.at("kind").is_string()) throw ConfigError(role + " is missing \"kind\"");
    const std::string kind = spec.at("kind").get<std::string>();

    static const std::map<std::string, std::set<std::string>> allowed = {
        {"gaussian", {"mu", "var"}},
        {"exponential", {}},
        {"gamma", {"alpha", "beta"}},
        {"student_t", {"nu"}},
        {"truncated_gaussian", {"mu", "var", "lo", "hi"}},
    };
    const auto it = allowed.find(kind);
    if (it == allowed.end()) throw ConfigError(role + ": unknown kind \"" + kind + "\"");
    for (const auto& [key, value] : spec.items())
        if (key != "kind" && !it->second.count(key)) throw ConfigError(role + ": unknown parameter \"" + key + "\"");

    try {
        if (kind == "gaussian") return gaussian(number(spec, "mu", 0.0), number(spec, "var", 1.0));
        if (kind == "exponential") return exponential_unit();
        if (kind == "gamma") return gamma_dist(number(spec, "alpha", 2.0), number(spec, "beta", 1.0));
        if (kind == "student_t") return student_t(number(spec, "nu", 3.0));
        return truncated_gaussian(number(spec, "mu", 0.0), number(spec, "var", 1.0), number(spec, "lo", -1.0),
                                  number(spec, "hi", 1.0));
    } catch (const Error& e) {
        throw ConfigError(role + ": " + e.what());
    }
}

std::vector<double> number_list(const json& v, const std::string& key) {
    if (!v.is_array()) throw ConfigError("\"" + key + "\" must be a list of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) throw ConfigError("\"" + key + "\" must be a list of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
}

}  // namespace

Distribution distribution_from_json(const std::string& json_text) { return make_distribution(parse_json(json_text), "law"); }

RunConfig parse_run_config(const std::string& json_text) {
    const json j = parse_json(json_text);
    if (!j.is_object()) throw ConfigError("configuration must be a JSON object");

    static const std::set<std::string> keys = {"prior",      "noise", "a_values", "identities", "tolerances",
                                               "output_dir", "seed",  "mc_n",     "mmse_method", "costa_a_grid"};
    for (const auto& [key, value] : j.items())
        if (!keys.count(key)) throw ConfigError("unknown key \"" + key + "\"");
    if (!j.contains("prior")) throw ConfigError("missing prior specification");
    if (!j.contains("noise")) throw ConfigError("missing noise specification");

    RunConfig cfg{make_distribution(j.at("prior"), "prior"), make_distribution(j.at("noise"), "noise")};

    cfg.a_values = j.contains("a_values") ? number_list(j.at("a_values"), "a_values") : std::vector<double>{1.0};
    if (cfg.a_values.empty()) throw ConfigError("a_values must not be empty");
    for (double a : cfg.a_values)
        if (!(a > 0.0) || !std::isfinite(a)) throw ConfigError("a must be positive");

    const json ids = j.contains("identities") ? j.at("identities") : json("all");
    if (ids.is_string() && ids.get<std::string>() == "all") {
        for (const auto& v : verifier_registry()) cfg.identities.push_back(v.name);
    } else if (ids.is_array()) {
        for (const auto& name : ids) {
            if (!name.is_string() || !find_verifier(name.get<std::string>()))
                throw ConfigError("unknown verifier " + name.dump());
            cfg.identities.push_back(name.get<std::string>());
        }
    } else {
        throw ConfigError("\"identities\" must be \"all\" or a list of verifier names");
    }

    if (j.contains("tolerances")) {
        const json& t = j.at("tolerances");
        if (!t.is_object()) throw ConfigError("\"tolerances\" must map verifier names to numbers");
        for (const auto& [name, value] : t.items()) {
            if (!find_verifier(name)) throw ConfigError("unknown verifier \"" + name + "\" in tolerances");
            if (!value.is_number() || !(value.get<double>() > 0.0))
                throw ConfigError("tolerance for " + name + " must be a positive number");
            cfg.tolerances[name] = value.get<double>();
        }
    }

    if (j.contains("output_dir")) {
        if (!j.at("output_dir").is_string()) throw ConfigError("\"output_dir\" must be a string");
        cfg.output_dir = j.at("output_dir").get<std::string>();
    } else {
        cfg.output_dir = ".";
    }

    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned()) throw ConfigError("\"seed\" must be a nonnegative integer");
        cfg.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("mc_n")) {
        if (!j.at("mc_n").is_number_unsigned() || j.at("mc_n").get<std::uint64_t>() < 2)
            throw ConfigError("\"mc_n\" must be an integer >= 2");
        cfg.mc_n = j.at("mc_n").get<std::size_t>();
    }
    if (j.contains("mmse_method")) {
        const json& m = j.at("mmse_method");
        if (m == "monte_carlo") cfg.mmse_monte_carlo = true;
        else if (m == "quadrature") cfg.mmse_monte_carlo = false;
        else throw ConfigError("\"mmse_method\" must be \"monte_carlo\" or \"quadrature\"");
    }
    if (j.contains("costa_a_grid")) {
        cfg.costa_a_grid = number_list(j.at("costa_a_grid"), "costa_a_grid");
        for (double a : cfg.costa_a_grid)
            if (!(a > 0.0)) throw ConfigError("a must be positive");
    }
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str());
}

}  // namespace infolab
