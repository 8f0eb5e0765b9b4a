#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "ggred/errors.hpp"
#include "ggred/parallel.hpp"
#include "ggred/scenarios.hpp"

namespace {

enum Exit { kPass = 0, kFail = 1, kConfig = 2, kSetup = 3 };

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ggred::ConfigError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalized geometry reduction checks"};
    app.require_subcommand(1);

    auto* list = app.add_subcommand("list", "scenarios and check ids");

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "check a config without running it");
    validate->add_option("config", validate_path, "JSON config")->required();

    std::string config_path, scenario, report_path, format = "json";
    std::vector<std::string> sets;
    std::int64_t seed = -1;
    int jobs = ggred::default_jobs();
    auto* run = app.add_subcommand("run", "run a scenario");
    run->add_option("config", config_path, "JSON config");
    run->add_option("--scenario", scenario, "built-in scenario name");
    run->add_option("--set", sets, "parameter override key=value")->take_all();
    run->add_option("--report", report_path, "also write the report here");
    run->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
    run->add_option("--seed", seed, "random seed (default 42)")->check(CLI::NonNegativeNumber);
    run->add_option("--jobs", jobs, "worker threads; never changes results")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kPass : kConfig;
    }

    try {
        if (list->parsed()) {
            std::cout << ggred::registry_text();
            return kPass;
        }
        if (validate->parsed()) {
            ggred::validate_scenario(ggred::parse_config(read_file(validate_path)));
            std::cout << "ok\n";
            return kPass;
        }
        ggred::ScenarioConfig cfg;
        if (!config_path.empty() && !scenario.empty())
            throw ggred::ConfigError("give either a config file or --scenario, not both");
        if (!config_path.empty()) cfg = ggred::parse_config(read_file(config_path));
        else if (!scenario.empty()) cfg.scenario = scenario;
        else throw ggred::ConfigError("run needs a config file or --scenario");
        for (const auto& s : sets) ggred::apply_override(cfg, s);
        if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
        ggred::check_config(cfg);

        auto report = ggred::run_scenario(cfg, jobs);
        std::string out = format == "json" ? ggred::report_json(report) : ggred::report_text(report);
        std::cout << out;
        if (!report_path.empty()) {
            std::ofstream f(report_path);
            if (!f) throw ggred::ConfigError("cannot write '" + report_path + "'");
            f << out;
        }
        return report.pass ? kPass : kFail;
    } catch (const ggred::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const ggred::Error& e) {
        std::cerr << "scenario error: " << e.what() << "\n";
        return kSetup;
    }
}
