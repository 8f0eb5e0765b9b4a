#include <algorithm>
#include <set>

#include "doctest.h"
#include "ggred/errors.hpp"
#include "ggred/scenarios.hpp"

using namespace ggred;

namespace {

const CheckRecord& record(const ScenarioReport& r, const std::string& id) {
    auto it = std::find_if(r.checks.begin(), r.checks.end(), [&](const auto& c) { return c.id == id; });
    REQUIRE(it != r.checks.end());
    return *it;
}

std::string error_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("config parsing") {
    auto cfg = parse_config(R"({"scenario": "hopf", "parameters": {"lambda": 1.3, "seed": 7}, "checks": ["thm63"]})");
    CHECK(cfg.scenario == "hopf");
    CHECK(cfg.parameters.at("lambda") == 1.3);
    CHECK(cfg.seed == 7);
    CHECK(cfg.parameters.count("seed") == 0);
    CHECK(parse_config(R"({"scenario": "flat_torus"})").seed == 42);

    CHECK(error_of([] { parse_config(R"({"scenario": "hopf", "parameters": {"lamda": 1}})"); }).find("'lamda'") !=
          std::string::npos);
    CHECK(error_of([] { parse_config(R"({"scenario": "hopf", "colour": 1})"); }).find("'colour'") !=
          std::string::npos);
    CHECK(error_of([] { parse_config("{\"scenario\": \"hopf\",\n \"checks\": [}"); }).rfind("line 2", 0) == 0);
    CHECK_THROWS_AS(parse_config(R"({"scenario": "klein_bottle"})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"scenario": "custom"})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"scenario": "hopf", "checks": ["euler"]})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"scenario": "hopf", "checks": ["nope"]})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"scenario": "hopf", "seed": -1})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"scenario": "hopf", "tolerances": {"loose": 1}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"scenario": "hopf", "parameters": {"samples": 0}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"parameters": {}})"), ConfigError);

    ScenarioConfig c{"hopf"};
    apply_override(c, "lambda=0.5");
    apply_override(c, "seed=9");
    CHECK(c.parameters.at("lambda") == 0.5);
    CHECK(c.seed == 9);
    CHECK_THROWS_AS(apply_override(c, "lambda"), ConfigError);
    CHECK_THROWS_AS(apply_override(c, "lambda=abc"), ConfigError);
}

TEST_CASE("registry") {
    std::string a = registry_text(), b = registry_text();
    CHECK(a == b);
    CHECK(a.find("hopf") != std::string::npos);
    CHECK(a.find("thm65") != std::string::npos);
    // every check id is reachable from some scenario
    std::set<std::string> used;
    for (const auto& s : scenario_registry()) used.insert(s.checks.begin(), s.checks.end());
    for (const auto& [id, desc] : check_registry()) CHECK_MESSAGE(used.count(id) == 1, id);
}

TEST_CASE("run examples") {
    SUBCASE("flat torus euler") {
        auto r = run_scenario(parse_config(R"({"scenario": "flat_torus", "checks": ["euler"]})"));
        CHECK(r.pass);
        CHECK(std::abs(record(r, "euler").value) < 1e-10);
    }
    SUBCASE("untwisted Hopf quotient") {
        auto r = run_scenario(parse_config(R"({"scenario": "hopf", "parameters": {"lambda": 0}, "checks": ["thm63"]})"));
        CHECK(r.pass);
        CHECK(record(r, "thm63").max_residual <= 1e-6);
    }
    SUBCASE("round sphere at order 24") {
        auto r = run_scenario(
            parse_config(R"({"scenario": "round_sphere", "parameters": {"order": 24}, "checks": ["euler"]})"));
        CHECK(r.pass);
        CHECK(record(r, "euler").value == doctest::Approx(2.0).epsilon(0.01));
    }
    SUBCASE("radius does not change the Euler number") {
        auto r = run_scenario(
            parse_config(R"({"scenario": "round_sphere", "parameters": {"radius": 2.5}, "checks": ["euler"]})"));
        CHECK(record(r, "euler").value == doctest::Approx(2.0).epsilon(0.01));
    }
    SUBCASE("a tight tolerance fails the run") {
        auto r = run_scenario(parse_config(
            R"({"scenario": "round_sphere", "parameters": {"order": 2}, "checks": ["euler"], "tolerances": {"cross": 1e-9}})"));
        CHECK_FALSE(r.pass);
        CHECK(record(r, "euler").status == "fail");
    }
    SUBCASE("exploratory checks never fail the run") {
        auto r = run_scenario(parse_config(
            R"({"scenario": "s3xs1_gk", "parameters": {"lambda": 0.7, "order": 4}, "checks": ["euler"]})"));
        CHECK(record(r, "euler").status == "exploratory");
        CHECK(r.pass);
    }
}

TEST_CASE("every built-in scenario passes its default checks") {
    for (const auto& s : scenario_registry()) {
        CAPTURE(s.name);
        ScenarioConfig c{s.name};
        c.parameters["samples"] = 5;
        auto r = run_scenario(c, 2);
        for (const auto& rec : r.checks) CHECK_MESSAGE(rec.status != "fail", rec.id);
        CHECK(r.pass);
    }
}

TEST_CASE("validate") {
    CHECK_NOTHROW(validate_scenario(parse_config(R"({"scenario": "hopf", "parameters": {"lambda": 1.3}})")));
    auto msg = error_of([] {
        validate_scenario(parse_config(R"({"scenario": "hopf", "parameters": {"lambda": 1.3, "xi_scale": 0.5}})"));
    });
    CHECK(msg.find("dξ_a = ι_{V_a}H") != std::string::npos);
    CHECK_THROWS_AS(validate_scenario(parse_config(R"({"scenario": "product_qg", "checks": ["oneill"]})")),
                    ConfigError);
    // ξ vanishes at λ = 0, so scaling it changes nothing
    CHECK_NOTHROW(validate_scenario(parse_config(R"({"scenario": "hopf", "parameters": {"xi_scale": 3}})")));
}

TEST_CASE("reports are deterministic") {
    auto cfg = parse_config(R"({"scenario": "hopf_torus", "parameters": {"samples": 6}, "seed": 5})");
    std::string a = report_json(run_scenario(cfg, 1));
    std::string b = report_json(run_scenario(cfg, 4));
    CHECK(a == b);
    cfg.seed = 6;
    CHECK(report_json(run_scenario(cfg, 1)) != a);
    CHECK(a.find("\"max_residual\"") != std::string::npos);
    auto text = report_text(run_scenario(cfg, 1));
    CHECK(text.find("status pass") != std::string::npos);
}
