#include <cmath>
#include <limits>

#include "json.hpp"
#include "oscint/error.hpp"
#include "oscint/harness.hpp"

namespace oscint {

using nlohmann::json;

namespace {

// JSON has no infinity; an unbounded band is written as null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }
double num_or(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    return j.at(key).is_null() ? std::numeric_limits<double>::infinity() : j.at(key).get<double>();
}

json witness_json(const WitnessSpec& w) {
    json j{{"kind", w.kind}, {"N", w.N},           {"sign", w.sign},
           {"b", w.b},       {"epsilon_mollify", w.epsilon_mollify}, {"seed", w.seed}};
    j["M_band"] = w.M_band ? json(*w.M_band) : json(nullptr);
    return j;
}

WitnessSpec witness_from(const json& j) {
    WitnessSpec w;
    w.kind = j.at("kind").get<std::string>();
    w.N = j.value("N", w.N);
    if (j.contains("M_band") && !j.at("M_band").is_null()) w.M_band = j.at("M_band").get<double>();
    w.sign = j.value("sign", w.sign);
    w.b = j.value("b", w.b);
    w.epsilon_mollify = j.value("epsilon_mollify", w.epsilon_mollify);
    w.seed = j.value("seed", w.seed);
    validate(w);
    return w;
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("config: ") + e.what());
    }
    ExperimentConfig c;
    const std::string kind = j.at("kind").get<std::string>();
    // Start from the calibrated defaults of the kind (first variant, or the named one).
    auto defaults = default_configs(kind);
    c = defaults.front();
    if (j.contains("variant")) {
        c.variant = j.at("variant").get<std::string>();
        for (const auto& d : defaults)
            if (d.variant == c.variant) c = d;
    }
    try {
        if (j.contains("exponents")) c.exponents = j.at("exponents").get<std::vector<double>>();
        if (j.contains("N_schedule")) c.N_schedule = j.at("N_schedule").get<std::vector<double>>();
        if (j.contains("grid")) {
            const json& g = j.at("grid");
            c.grid.M = g.value("M", c.grid.M);
            c.grid.xi_max = g.value("xi_max", c.grid.xi_max);
            c.grid.x_points = g.value("x_points", c.grid.x_points);
            c.grid.x_max = g.value("x_max", c.grid.x_max);
        }
        if (j.contains("witnesses"))
            for (const auto& w : j.at("witnesses")) c.witnesses.push_back(witness_from(w));
        c.seed = j.value("seed", c.seed);
        c.seeds = j.value("seeds", c.seeds);
        if (j.contains("protocol")) c.protocol = parse_protocol(j.at("protocol").get<std::string>());
        c.expected = j.value("expected", c.expected);
        c.tol = j.value("tol", c.tol);
        if (j.contains("thresholds")) {
            const json& t = j.at("thresholds");
            c.thresholds.bounded_slope = t.value("bounded_slope", c.thresholds.bounded_slope);
            c.thresholds.growth_slope = t.value("growth_slope", c.thresholds.growth_slope);
            c.thresholds.band = num_or(t, "band", c.thresholds.band);
            c.thresholds.min_r2 = t.value("min_r2", c.thresholds.min_r2);
        }
        c.output = j.value("output", c.output);
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("config: ") + e.what());
    }
    validate(c);
    return c;
}

std::string config_to_json(const ExperimentConfig& c) {
    json j;
    j["kind"] = c.kind;
    j["variant"] = c.variant;
    j["exponents"] = c.exponents;
    j["N_schedule"] = c.N_schedule;
    j["grid"] = {{"M", c.grid.M}, {"xi_max", c.grid.xi_max}, {"x_points", c.grid.x_points}, {"x_max", c.grid.x_max}};
    j["witnesses"] = json::array();
    for (const auto& w : c.witnesses) j["witnesses"].push_back(witness_json(w));
    j["seed"] = c.seed;
    j["seeds"] = c.seeds;
    j["protocol"] = protocol_name(c.protocol);
    j["expected"] = c.expected;
    j["tol"] = c.tol;
    j["thresholds"] = {{"bounded_slope", c.thresholds.bounded_slope},
                       {"growth_slope", c.thresholds.growth_slope},
                       {"band", num(c.thresholds.band)},
                       {"min_r2", c.thresholds.min_r2}};
    j["output"] = c.output;
    return j.dump(2);
}

}  // namespace oscint
