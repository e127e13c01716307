#include "hydro_cba/aggregator.hpp"
#include "hydro_cba/costs.hpp"
#include "hydro_cba/csv.hpp"
#include "hydro_cba/error.hpp"
#include "hydro_cba/pipeline.hpp"
#include "hydro_cba/survey.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>

using namespace hydro_cba;

namespace {

constexpr int kExitInput = 1;
constexpr int kExitInternal = 2;

struct Common {
    std::string config_path;
    std::string out_dir;
    std::vector<std::string> overrides;
};

RunConfig load_config(const Common& common) {
    std::string path = common.config_path;
    if (path.empty())
        if (const char* env = std::getenv(kConfigEnvVar))
            path = env;
    RunConfig config = path.empty() ? RunConfig{} : RunConfig::from_file(path);
    for (const auto& kv : common.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw Error(ErrorCode::InvalidArgument, fmt::format("--set expects key=value, got '{}'", kv));
        config.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    config.validate();
    return config;
}

void emit(const Common& common, const std::string& file, const nlohmann::json& j) {
    const auto text = j.dump(2) + "\n";
    if (common.out_dir.empty()) {
        std::cout << text;
        return;
    }
    std::filesystem::create_directories(common.out_dir);
    const auto path = std::filesystem::path(common.out_dir) / file;
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorCode::IoError, fmt::format("cannot write '{}'", path.string()));
    out << text;
    std::cout << path.string() << "\n";
}

void write_component_series(const Common& common, const ValuationComponent& c) {
    if (common.out_dir.empty())
        return;
    std::filesystem::create_directories(common.out_dir);
    for (const auto& s : c.series)
        write_series_csv(std::filesystem::path(common.out_dir) / (s.label() + ".csv"), s);
}

void print_summary(const NetBenefitReport& report) {
    for (const auto* list : {&report.benefits, &report.costs, &report.excluded})
        for (const auto& c : *list)
            std::cout << fmt::format("{:<16} {:>16} {}\n", to_string(c.kind),
                                     c.available() ? fmt::format("{:.2f}", c.npv->millions()) : "Unavailable",
                                     list == &report.excluded ? "(not counted)" : "");
    std::cout << fmt::format("{:<16} {:>16.2f}\n{:<16} {:>16.2f}\n{:<16} {:>16.2f}\n", "gross_benefit",
                             report.gross_benefit.millions(), "gross_cost", report.gross_cost.millions(),
                             "net_benefit", report.net_benefit.millions());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cost-benefit valuation engine for a hydroelectric dam"};
    app.require_subcommand(1);
    app.fallthrough();

    Common common;
    app.add_option("--config", common.config_path, "Run configuration file (falls back to $HYDRO_CBA_CONFIG)");
    app.add_option("--out", common.out_dir, "Output directory");
    app.add_option("--set", common.overrides, "Override a config key, e.g. --set electricity.mode=cpi");

    auto* deflate_cmd = app.add_subcommand("deflate", "Move an amount between price years with the run CPI");
    double amount = 0.0;
    int from_year = 0, to_year = 0;
    deflate_cmd->add_option("--value", amount, "Amount in BDT")->required();
    deflate_cmd->add_option("--from", from_year, "Price year of the amount")->required();
    deflate_cmd->add_option("--to", to_year, "Target price year")->required();

    auto* elec_cmd = app.add_subcommand("value-electricity", "Value electricity generation");
    std::string mode;
    elec_cmd->add_option("--mode", mode, "discount or cpi (default from config)");

    auto* fish_cmd = app.add_subcommand("value-fisheries", "Value lake fisheries");
    auto* tour_cmd = app.add_subcommand("value-tourism", "Value tourism with the zonal travel-cost model");
    auto* cost_cmd = app.add_subcommand("value-costs", "Value displacement, lives, construction and environment");

    auto* agg_cmd = app.add_subcommand("aggregate", "Run the full pipeline, or aggregate supplied components");
    std::string components_csv;
    bool with_construction = false, with_environmental = false;
    agg_cmd->add_option("--components", components_csv, "Component CSV to aggregate instead of running valuations");
    agg_cmd->add_flag("--include-construction", with_construction, "Count construction cost (with --components)");
    agg_cmd->add_flag("--include-environmental", with_environmental, "Count environmental cost (with --components)");

    auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate the pipeline over a parameter grid");
    std::string grid_csv;
    sweep_cmd->add_option("--grid", grid_csv, "CSV whose header names config keys")->required();

    auto* sum_cmd = app.add_subcommand("summarize", "Summary statistics of one survey column");
    std::string sum_file, sum_column = "monthly_income";
    sum_cmd->add_option("--file", sum_file, "CSV file (default: inputs.survey)");
    sum_cmd->add_option("--column", sum_column, "Column name");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitInput;
    }

    try {
        const auto config = load_config(common);

        if (*deflate_cmd) {
            const auto cpi = backcast_cpi(load_cpi(config), std::min(from_year, to_year),
                                          GeometricTrend{config.get_int("series.cpi_backcast_window")});
            const auto out = deflate(MoneyAmount::bdt(amount, from_year), to_year, cpi);
            emit(common, "deflate.json",
                 {{"value", amount},
                  {"from", from_year},
                  {"to", to_year},
                  {"ratio", cpi.ratio(from_year, to_year)},
                  {"result", out.value()}});
        } else if (*elec_cmd) {
            const auto cpi = load_cpi(config);
            const auto c = value_electricity(
                config, cpi, mode.empty() ? std::nullopt : std::optional(backcast_mode_from_string(mode)));
            emit(common, "electricity.json", component_to_json(c, "benefit"));
            write_component_series(common, c);
        } else if (*fish_cmd) {
            const auto c = value_fisheries(config, load_cpi(config));
            emit(common, "fisheries.json", component_to_json(c, "benefit"));
            write_component_series(common, c);
        } else if (*tour_cmd) {
            const auto t = value_tourism(config, load_cpi(config));
            auto j = component_to_json(t.component, "benefit");
            j["consumer_surplus_mbdt"] = t.surplus.annual_value.millions();
            j["choke_fee"] = t.surplus.choke_fee;
            emit(common, "tourism.json", j);
            write_component_series(common, t.component);
            if (!common.out_dir.empty()) {
                std::vector<std::vector<std::string>> rows;
                for (const auto& p : t.surplus.curve)
                    rows.push_back({csv::format_number(p.fee), csv::format_number(p.visits)});
                csv::write(std::filesystem::path(common.out_dir) / "demand_curve.csv", {"fee", "visits"}, rows);
            }
        } else if (*cost_cmd) {
            auto j = nlohmann::json::array();
            for (const auto& c : value_costs(config, load_cpi(config)))
                j.push_back(component_to_json(c, "cost"));
            emit(common, "costs.json", j);
        } else if (*agg_cmd) {
            if (!components_csv.empty()) {
                const auto report =
                    aggregate(read_components_csv(components_csv), {with_construction, with_environmental});
                print_summary(report);
                if (!common.out_dir.empty()) {
                    emit(common, "report.json", report_to_json(report));
                    write_report_csv(std::filesystem::path(common.out_dir) / "report.csv", report);
                }
            } else {
                const auto out = common.out_dir.empty() ? std::string("out") : common.out_dir;
                const auto result = run_pipeline(config, out);
                print_summary(result.report);
                for (const auto& r : result.references)
                    std::cout << fmt::format("reference {:<32} engine {:>12.2f} published {:>12.2f} {:+8.2f}% {}\n",
                                             r.label, r.engine_mbdt, r.reference_mbdt, r.deviation_pct,
                                             to_string(r.band));
                std::cout << "wrote " << out << "\n";
            }
        } else if (*sweep_cmd) {
            const auto grid = read_parameter_grid(grid_csv);
            const auto rows = sensitivity_sweep(config, grid);
            const auto out = std::filesystem::path(common.out_dir.empty() ? "out" : common.out_dir);
            std::filesystem::create_directories(out);
            write_sweep_csv(out / "sweep.csv", grid, rows);
            for (const auto& r : rows)
                std::cout << fmt::format("{:>4} net {:.2f}\n", r.index, r.net_benefit_mbdt);
        } else if (*sum_cmd) {
            const auto path = sum_file.empty() ? config.get_path("inputs.survey") : std::filesystem::path(sum_file);
            const auto values = read_numeric_column(path, sum_column);
            const auto s = summarize_survey(values);
            emit(common, "summary.json",
                 {{"column", sum_column},
                  {"n", s.n},
                  {"mean", s.mean},
                  {"sd", s.sd},
                  {"sd_defined", s.sd_defined},
                  {"min", s.min},
                  {"max", s.max}});
        }
        return 0;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
