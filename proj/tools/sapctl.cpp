#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sap/config.hpp"
#include "sap/errors.hpp"
#include "sap/experiments.hpp"
#include "sap/validation.hpp"

namespace {

enum Exit : int { kOk = 0, kConfig = 2, kNumeric = 3, kAcceptance = 4 };

struct Flags {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::string out = "out";
    double tolerance_scale = 1.0;
    std::optional<double> budget_scale;
    std::vector<int> criteria;
};

sap::ExperimentConfig resolve(const Flags& f, bool config_required) {
    sap::ExperimentConfig cfg;
    if (!f.config.empty())
        cfg = sap::load_config(f.config);
    else if (config_required)
        throw sap::ConfigError("--config", "required for this command");
    if (f.seed) cfg.seed = *f.seed;
    if (f.workers) {
        if (*f.workers < 1) throw sap::ConfigError("--workers", "must be at least 1");
        cfg.workers = *f.workers;
    }
    if (!(f.tolerance_scale > 0.0)) throw sap::ConfigError("--tolerance-scale", "must be positive");
    if (f.budget_scale) {
        if (!(*f.budget_scale > 0.0)) throw sap::ConfigError("--budget-scale", "must be positive");
        cfg.validate.budget_scale = *f.budget_scale;
    }
    return cfg;
}

nlohmann::json metadata(const Flags& f, const sap::ExperimentConfig& cfg) {
    return {{"config_path", f.config},
            {"name", cfg.name},
            {"seed", cfg.seed},
            {"workers", cfg.workers},
            {"parameters", sap::resolved_parameters(cfg)}};
}

int run_experiment(const Flags& f, const std::string& command,
                   const std::function<sap::CommandResult(const sap::ExperimentConfig&)>& fn) {
    const sap::ExperimentConfig cfg = resolve(f, true);
    const sap::CommandResult result = fn(cfg);
    sap::write_outputs(f.out, command, result, metadata(f, cfg));
    for (const auto& [stem, table] : result.files)
        std::cout << f.out << "/" << stem << ".csv (" << table.size() << " rows)\n";
    return kOk;
}

int run_validate(const Flags& f) {
    const sap::ExperimentConfig cfg = resolve(f, false);
    sap::ValidationOptions opt;
    opt.seed = cfg.seed;
    opt.workers = cfg.workers;
    opt.budget_scale = cfg.validate.budget_scale;
    opt.tolerance_scale = f.tolerance_scale;
    opt.numerics = cfg.numerics;
    std::vector<int> ids = f.criteria;
    if (ids.empty())
        for (int i = 1; i < sap::kCriteriaCount; ++i) ids.push_back(i);
    for (int id : ids)
        if (id < 1 || id >= sap::kCriteriaCount)
            throw sap::ConfigError("--criteria", "ids run from 1 to " + std::to_string(sap::kCriteriaCount - 1));

    const auto progress = [](const sap::CriterionResult& r, double s) {
        std::cerr << "  criterion " << r.id << " done in " << sap::format_number(s) << " s\n";
    };
    std::cerr << "validation, first pass\n";
    sap::ValidationReport first = sap::run_validation(opt, ids, progress);
    std::cerr << "validation, second pass (determinism)\n";
    const sap::ValidationReport second = sap::run_validation(opt, ids, progress);
    first.criteria.push_back(sap::determinism_check(first, second));

    sap::CommandResult result;
    result.files.emplace_back("validation", first.criteria_table());
    result.files.emplace_back("validation_info", first.info_table());
    nlohmann::json timing = nlohmann::json::array();
    for (std::size_t i = 0; i < first.seconds.size(); ++i)
        timing.push_back({{"criterion", first.criteria[i].id},
                          {"first_pass_s", first.seconds[i]},
                          {"second_pass_s", second.seconds[i]}});
    result.diagnostics = {{"seconds", timing},
                          {"budget_scale", opt.budget_scale},
                          {"tolerance_scale", opt.tolerance_scale},
                          {"all_passed", first.all_passed()}};
    sap::write_outputs(f.out, "validate", result, metadata(f, cfg));

    for (const auto& r : first.criteria) std::cout << sap::summary_line(r) << '\n';
    return first.all_passed() ? kOk : kAcceptance;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sense-and-Predict cognitive-radio MAC: analysis, simulation and validation"};
    app.require_subcommand(1);
    Flags f;
    const auto common = [&f](CLI::App* sub) {
        sub->add_option("--config", f.config, "JSON experiment config");
        sub->add_option("--seed", f.seed, "master seed (overrides the config)");
        sub->add_option("--workers", f.workers, "simulation worker threads (overrides the config)");
        sub->add_option("--out", f.out, "output directory")->capture_default_str();
        sub->add_option("--tolerance-scale", f.tolerance_scale, "multiplies validation tolerances")
            ->capture_default_str();
    };
    struct Sub {
        const char* name;
        const char* help;
        std::function<sap::CommandResult(const sap::ExperimentConfig&)> fn;
    };
    const std::vector<Sub> subs{
        {"op-curve", "opportunistic probability against sensed interference or beta", sap::cmd_op_curve},
        {"ase-sweep", "area spectral efficiency against beta with beta_min and beta* markers", sap::cmd_ase_sweep},
        {"compare-macs", "simulated ASE of several MACs with common random numbers", sap::cmd_compare_macs},
        {"fit-l", "fit the joint-visibility axis length against the blockage factor", sap::cmd_fit_l},
        {"census", "hidden and exposed node rates against beamwidth", sap::cmd_census},
    };
    std::vector<std::pair<CLI::App*, const Sub*>> handlers;
    for (const auto& s : subs) {
        CLI::App* sub = app.add_subcommand(s.name, s.help);
        common(sub);
        handlers.emplace_back(sub, &s);
    }
    CLI::App* validate = app.add_subcommand("validate", "run the acceptance criteria and report pass/fail");
    common(validate);
    validate->add_option("--budget-scale", f.budget_scale, "multiplies every Monte Carlo budget");
    validate->add_option("--criteria", f.criteria, "subset of criteria 1..9 (criterion 10 always runs)")
        ->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    try {
        if (validate->parsed()) return run_validate(f);
        for (const auto& [sub, s] : handlers)
            if (sub->parsed()) return run_experiment(f, s->name, s->fn);
    } catch (const sap::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const sap::ParameterError& e) {
        std::cerr << "parameter error: " << e.what() << '\n';
        return kConfig;
    } catch (const sap::NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kNumeric;
    } catch (const sap::DomainError& e) {
        std::cerr << "domain error: " << e.what() << '\n';
        return kNumeric;
    } catch (const sap::InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return kNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return kOk;
}
