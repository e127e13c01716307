#include "hydro_cba/pipeline.hpp"

#include "hydro_cba/costs.hpp"
#include "hydro_cba/csv.hpp"
#include "hydro_cba/error.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <future>
#include <set>
#include <thread>

namespace hydro_cba {

namespace {

YearRange year_range(const RunConfig& config, const std::string& section) {
    return {config.get_int(section + ".start_year"), config.get_int(section + ".end_year")};
}

// Two-anchor deflator from the configured ratio, or the run CPI.
CpiIndexTable deflator(const RunConfig& config, const std::string& mode_key, const std::string& ratio_key, int from,
                       int to, const CpiIndexTable& cpi) {
    if (config.get(mode_key) == "cpi")
        return cpi;
    return CpiIndexTable::from_anchor_ratio(from, to, config.get_double(ratio_key));
}

void rebase(ValuationComponent& c, int year, const std::string& mode, const CpiIndexTable& cpi,
            std::vector<std::string>& notes) {
    if (!c.available() || c.npv->base_year() == year)
        return;
    const int from = c.npv->base_year();
    if (mode == "relabel") {
        c.npv = c.npv->relabeled(year);
        notes.push_back(fmt::format("{}: {} value relabeled as {} without price adjustment", to_string(c.kind), from,
                                    year));
    } else {
        c.npv = deflate(*c.npv, year, cpi);
        notes.push_back(fmt::format("{}: rebased from {} to {} by CPI ratio {}", to_string(c.kind), from, year,
                                    csv::format_number(cpi.ratio(from, year))));
    }
}

nlohmann::json check_to_json(const ReferenceCheck& c) {
    nlohmann::json j = {{"label", c.label},
                        {"engine_mbdt", c.engine_mbdt},
                        {"reference_mbdt", c.reference_mbdt},
                        {"deviation_mbdt", c.deviation_mbdt},
                        {"deviation_pct", c.deviation_pct},
                        {"band", std::string(to_string(c.band))}};
    if (!c.note.empty())
        j["note"] = c.note;
    return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(ErrorCode::IoError, fmt::format("cannot write '{}'", path.string()));
    out << text;
    if (!out)
        throw Error(ErrorCode::IoError, fmt::format("write to '{}' failed", path.string()));
}

} // namespace

int required_cpi_start(const RunConfig& config) {
    int earliest = std::min({config.get_int("electricity.start_year"), config.get_int("electricity.price_year"),
                             config.get_int("tourism.start_year"), config.get_int("tourism.survey_year"),
                             config.get_int("fisheries.start_year"), config.get_int("fisheries.unit_cost_year"),
                             config.get_int("fisheries.avg_price_year")});
    if (config.get("costs.land_deflator") == "cpi")
        earliest = std::min(earliest, config.get_int("costs.land_value_year"));
    if (config.get("costs.construction_deflator") == "cpi")
        earliest = std::min(earliest, config.get_int("costs.construction_year"));
    return earliest;
}

CpiIndexTable load_cpi(const RunConfig& config) {
    const CpiIndexTable observed(read_series_csv(config.get_path("inputs.cpi"), "cpi"));
    return backcast_cpi(observed, required_cpi_start(config),
                        GeometricTrend{config.get_int("series.cpi_backcast_window")});
}

ValuationComponent value_electricity(const RunConfig& config, const CpiIndexTable& cpi,
                                     std::optional<BackcastMode> mode) {
    ElectricityParams p;
    p.avg_capacity_mw = config.get_double("electricity.capacity_mw");
    p.hours_per_day = config.get_double("electricity.hours_per_day");
    p.days_per_year = config.get_double("electricity.days_per_year");
    p.unit_price = config.get_double("electricity.unit_price");
    p.unit_cost = config.get_double("electricity.unit_cost");
    p.years = year_range(config, "electricity");
    p.price_year = config.get_int("electricity.price_year");
    p.mode = mode.value_or(backcast_mode_from_string(config.get("electricity.mode")));
    p.discount_rate = config.get_double("electricity.discount_rate");
    return electricity_npv(p, cpi);
}

ValuationComponent value_fisheries(const RunConfig& config, const CpiIndexTable& cpi) {
    const auto path = config.get_path("inputs.fisheries");
    const auto records = read_fisheries_csv(path);
    const YearRange years{config.get_int("fisheries.start_year"), config.get_int("fisheries.base_year")};
    auto prepared =
        prepare_fisheries_series(records, years, cpi, CatchFill{config.get_optional_double("fisheries.catch_backfill_growth")});

    FisheriesParams p{std::move(prepared.catch_tons), std::move(prepared.revenue_mbdt)};
    p.avg_price = config.get_double("fisheries.avg_price");
    p.avg_price_year = config.get_int("fisheries.avg_price_year");
    p.price_anchor = price_anchor_from_string(config.get("fisheries.price_anchor"));
    p.unit_cost = config.get_double("fisheries.unit_cost");
    p.unit_cost_year = config.get_int("fisheries.unit_cost_year");
    p.discount_rate = config.get_double("fisheries.discount_rate");
    p.start_year = years.first;
    p.base_year = years.last;
    p.accumulation = accumulation_from_string(config.get("fisheries.accumulation"));
    try {
        return fisheries_npv(p, cpi);
    } catch (const Error& e) {
        throw Error(e.code(), fmt::format("{}: {}", path.string(), e.what()));
    }
}

TourismValuation value_tourism(const RunConfig& config, const CpiIndexTable& cpi) {
    const auto survey = read_survey_csv(config.get_path("inputs.survey"));
    const auto zones = build_zones(survey, read_zones_csv(config.get_path("inputs.zones")));
    const auto fit = read_fit_json(config.get_path("inputs.regression_fit"));

    ConsumerSurplusOptions options;
    options.cost_regressor = config.get("tourism.cost_regressor");
    options.max_steps = static_cast<std::size_t>(config.get_int("tourism.max_steps"));
    options.price_year = config.get_int("tourism.survey_year");
    auto surplus = consumer_surplus(fit, zones, config.get_double("tourism.fee_step"), options);

    auto annual = surplus.annual_value;
    bool overridden = false;
    if (const auto fixed = config.get_optional_double("tourism.annual_value_mbdt")) {
        annual = MoneyAmount::bdt(*fixed * 1e6, options.price_year);
        overridden = true;
    }
    auto component = tourism_npv(annual, year_range(config, "tourism"), cpi);
    if (overridden)
        component.warnings.push_back(
            fmt::format("annual value fixed at {} M by configuration; computed consumer surplus is {} M",
                        csv::format_number(annual.millions()), csv::format_number(surplus.annual_value.millions())));
    return {std::move(component), std::move(surplus), zones, annual, overridden};
}

std::vector<ValuationComponent> value_costs(const RunConfig& config, const CpiIndexTable& cpi) {
    std::vector<ValuationComponent> out;
    const int survey_year = config.get_int("costs.survey_year");

    // Displacement, with lost land merged in.
    {
        const int from = config.get_int("costs.land_value_year");
        const int to = config.get_int("costs.land_target_year");
        const auto table = deflator(config, "costs.land_deflator", "costs.land_deflator_ratio", from, to, cpi);
        const auto per_family = deflate(MoneyAmount::bdt(config.get_double("costs.land_value_per_family"), from), to, table);
        const double families = config.get_double("costs.families");
        ValuationComponent c{ComponentKind::Displacement, "Cost of lost land and displacement",
                             displacement_cost(per_family, families)};
        c.years = {to, to};
        c.method = fmt::format("{} BDT/family at {} x {} deflator {} x {} families",
                               config.get("costs.land_value_per_family"), from, config.get("costs.land_deflator"),
                               csv::format_number(table.ratio(from, to)), csv::format_number(families));
        c.warnings.push_back("land use change is valued inside this component");
        out.push_back(std::move(c));
    }

    // Lives lost.
    {
        std::optional<double> per_life = config.get_optional_double("costs.value_per_life");
        std::string method;
        if (per_life) {
            method = fmt::format("{} BDT per life", csv::format_number(*per_life));
        } else {
            const auto income = config.get_optional_double("costs.life_annual_income");
            if (!income)
                throw Error(ErrorCode::InvalidArgument,
                            "costs.value_per_life and costs.life_annual_income are both unset");
            const auto table = LifeExpectancyTable::read_csv(config.get_path("inputs.life_expectancy"));
            LifeLossParams lp{config.get_double("costs.life_age_at_death"),
                              table.at(config.get_int("costs.life_death_year")), *income, 1.0, survey_year};
            per_life = value_of_life(lp).value();
            method = fmt::format("(T - X) x W = ({} - {}) x {}", csv::format_number(lp.life_expectancy),
                                 csv::format_number(lp.age_at_death), csv::format_number(lp.annual_income));
        }
        const double deaths = config.get_double("costs.deaths");
        ValuationComponent c{ComponentKind::LivesLost, "Cost of lives lost",
                             lives_lost_total(MoneyAmount::bdt(*per_life, survey_year), deaths)};
        c.years = {survey_year, survey_year};
        c.method = fmt::format("{} x {} deaths", method, csv::format_number(deaths));
        out.push_back(std::move(c));
    }

    // Construction.
    {
        const int year = config.get_int("costs.construction_year");
        const int to = config.get_int("costs.construction_target_year");
        ConstructionCostSheet sheet{MoneyAmount(config.get_double("costs.establishment_mrs") * 1e6, "Rs", year),
                                    MoneyAmount::bdt(config.get_double("costs.compensation_mbdt") * 1e6, year),
                                    config.get_double("costs.compensation_rate"), config.get_double("costs.acres"),
                                    config.get_double("costs.rs_to_bdt")};
        const auto table =
            deflator(config, "costs.construction_deflator", "costs.construction_deflator_ratio", year, to, cpi);
        const auto nominal = construction_nominal_total(sheet);
        ValuationComponent c{ComponentKind::Construction, "Construction cost", deflate(nominal, to, table)};
        c.years = {to, to};
        c.method = fmt::format("{} M nominal at {} x {} deflator {}", csv::format_number(nominal.millions()), year,
                               config.get("costs.construction_deflator"), csv::format_number(table.ratio(year, to)));
        out.push_back(std::move(c));
    }

    // Environmental (household CVM).
    {
        const auto records = read_household_losses_csv(config.get_path("inputs.households"), survey_year);
        const auto population = config.get_optional_double("costs.environmental_population");
        auto env = environmental_cost_cvm(records, population, survey_year);
        ValuationComponent c{ComponentKind::Environmental, "Environmental cost (household survey)", env.total};
        c.years = {survey_year, survey_year};
        c.method = population ? fmt::format("mean household loss over {} records x {}", env.records,
                                            csv::format_number(*population))
                              : fmt::format("sum over {} household records", env.records);
        c.warnings = std::move(env.warnings);
        out.push_back(std::move(c));
    }
    return out;
}

PipelineResult evaluate(const RunConfig& config) {
    config.validate();
    auto cpi = load_cpi(config);

    std::vector<ElectricityModeResult> modes;
    for (auto mode : {BackcastMode::Discount, BackcastMode::CpiScale}) {
        const auto c = value_electricity(config, cpi, mode);
        modes.push_back({mode, c.npv->millions(),
                         compare_to_reference(fmt::format("electricity ({})", to_string(mode)), c.npv->millions(),
                                              published::kElectricityMbdt,
                                              "published recipe is ambiguous; reported, not asserted")});
    }

    std::vector<ValuationComponent> components;
    components.push_back(value_electricity(config, cpi));
    components.push_back(value_fisheries(config, cpi));
    auto tourism = value_tourism(config, cpi);
    components.push_back(tourism.component);
    for (auto& c : value_costs(config, cpi))
        components.push_back(std::move(c));

    auto survey = read_survey_csv(config.get_path("inputs.survey"));
    std::vector<double> incomes;
    for (const auto& r : survey)
        incomes.push_back(r.monthly_income);
    const auto income = summarize_survey(incomes);

    // References are taken at each component's own price year.
    std::vector<ReferenceCheck> references;
    auto value_of = [&](ComponentKind kind) {
        for (const auto& c : components)
            if (c.kind == kind)
                return c.npv->millions();
        throw Error(ErrorCode::MissingComponent, std::string(to_string(kind)));
    };
    references.push_back(compare_to_reference("electricity", value_of(ComponentKind::Electricity),
                                              published::kElectricityMbdt));
    references.push_back(compare_to_reference("fisheries", value_of(ComponentKind::Fisheries),
                                              published::kFisheriesMbdt));
    references.push_back(compare_to_reference("tourism", value_of(ComponentKind::Tourism), published::kTourismMbdt,
                                              "survey microdata unavailable; reported, not asserted"));
    references.push_back(compare_to_reference("tourism annual consumer surplus",
                                              tourism.surplus.annual_value.millions(),
                                              published::kTourismAnnualMbdt,
                                              "survey microdata unavailable; reported, not asserted"));
    references.push_back(compare_to_reference("displacement", value_of(ComponentKind::Displacement),
                                              published::kDisplacementMbdt));
    references.push_back(compare_to_reference("lives_lost", value_of(ComponentKind::LivesLost),
                                              published::kLivesLostMbdt));
    references.push_back(compare_to_reference("construction", value_of(ComponentKind::Construction),
                                              published::kConstructionMbdt));

    std::vector<std::string> rebase_notes;
    const int base_year = config.get_int("report.base_year");
    for (auto& c : components)
        rebase(c, base_year, config.get("report.rebase"), cpi, rebase_notes);

    // Run log: every imputed datum once, CPI first, then components in kind order.
    std::vector<std::string> log;
    std::vector<std::string> summary;
    std::set<std::pair<std::string, int>> seen;
    auto log_series = [&](const AnnualSeries& s) {
        std::size_t imputed = 0;
        for (const auto& p : s.points()) {
            if (p.provenance != Provenance::Imputed)
                continue;
            ++imputed;
            if (seen.emplace(s.label(), p.year).second)
                log.push_back(fmt::format("imputed,{},{},{}", s.label(), p.year, csv::format_number(p.value)));
        }
        summary.push_back(fmt::format("summary,{},{},{},{:.1f}", s.label(), s.size() - imputed, imputed,
                                      100.0 * s.imputed_fraction()));
    };
    log_series(cpi.series());
    for (const auto& c : components)
        for (const auto& s : c.series)
            log_series(s);

    AggregateOptions options{config.get_bool("report.include_construction"),
                             config.get_bool("report.include_environmental")};
    auto report = aggregate(std::move(components), options);
    for (auto& n : rebase_notes)
        report.notes.push_back(std::move(n));
    report.notes.push_back(fmt::format("published gross benefit exceeds the sum of its published parts by {:.2f} M",
                                       published::gross_benefit_slack()));
    references.push_back(compare_to_reference("net_benefit", report.net_benefit.millions(),
                                              published::kNetBenefitMbdt,
                                              fmt::format("published addition carries {:.2f} M of rounding slack",
                                                          published::gross_benefit_slack())));

    std::vector<std::string> run_log{"# kind,series,year,value"};
    run_log.insert(run_log.end(), log.begin(), log.end());
    run_log.push_back("# summary,series,actual,imputed,imputed_pct");
    run_log.insert(run_log.end(), summary.begin(), summary.end());
    for (const auto& n : report.notes)
        run_log.push_back("note," + n);

    return PipelineResult{std::move(report), std::move(references), std::move(modes), std::move(tourism),
                          income,           std::move(cpi),        std::move(run_log), config.values()};
}

nlohmann::json result_to_json(const PipelineResult& r) {
    auto j = report_to_json(r.report);
    auto refs = nlohmann::json::array();
    for (const auto& c : r.references)
        refs.push_back(check_to_json(c));
    j["references"] = refs;

    auto modes = nlohmann::json::array();
    for (const auto& m : r.electricity_modes)
        modes.push_back({{"mode", std::string(to_string(m.mode))},
                         {"total_mbdt", m.total_mbdt},
                         {"published_mbdt", m.reference.reference_mbdt},
                         {"deviation_pct", m.reference.deviation_pct}});
    j["electricity_modes"] = modes;

    auto zones = nlohmann::json::array();
    for (const auto& z : r.tourism.zones)
        zones.push_back({{"zone", z.name},
                         {"population", z.population},
                         {"visitors", z.visitors_observed},
                         {"rate_per_million", visitation_rate(z)}});
    j["tourism"] = {{"consumer_surplus_mbdt", r.tourism.surplus.annual_value.millions()},
                    {"annual_value_used_mbdt", r.tourism.annual_value.millions()},
                    {"annual_value_overridden", r.tourism.annual_value_overridden},
                    {"choke_fee", r.tourism.surplus.choke_fee},
                    {"price_year", r.tourism.annual_value.base_year()},
                    {"zones", zones}};
    j["survey_income"] = {{"n", r.income.n},       {"mean", r.income.mean}, {"sd", r.income.sd},
                          {"sd_defined", r.income.sd_defined}, {"min", r.income.min}, {"max", r.income.max}};
    j["config"] = r.config_snapshot;
    return j;
}

std::string render_demand_svg(const std::vector<DemandPoint>& curve) {
    constexpr double kWidth = 640, kHeight = 400, kMargin = 50;
    std::string svg = fmt::format(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
        "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n",
        kWidth, kHeight);
    double max_fee = 0.0, max_visits = 0.0;
    for (const auto& p : curve) {
        max_fee = std::max(max_fee, p.fee);
        max_visits = std::max(max_visits, p.visits);
    }
    if (max_fee <= 0.0)
        max_fee = 1.0;
    if (max_visits <= 0.0)
        max_visits = 1.0;
    const double plot_w = kWidth - 2 * kMargin, plot_h = kHeight - 2 * kMargin;
    svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n", kMargin,
                       kHeight - kMargin, kWidth - kMargin);
    svg += fmt::format("<line x1=\"{0}\" y1=\"{0}\" x2=\"{0}\" y2=\"{1}\" stroke=\"black\"/>\n", kMargin,
                       kHeight - kMargin);
    svg += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">fee (BDT), max {}</text>\n",
                       kWidth / 2, kHeight - 15, csv::format_number(max_fee));
    svg += fmt::format("<text x=\"15\" y=\"{}\" font-size=\"12\" transform=\"rotate(-90 15 {})\" "
                       "text-anchor=\"middle\">visits, max {:.0f}</text>\n",
                       kHeight / 2, kHeight / 2, max_visits);
    const std::size_t stride = std::max<std::size_t>(1, curve.size() / 400);
    std::string points;
    for (std::size_t i = 0; i < curve.size(); i += stride) {
        const auto& p = curve[i];
        points += fmt::format("{:.2f},{:.2f} ", kMargin + plot_w * p.fee / max_fee,
                              kHeight - kMargin - plot_h * p.visits / max_visits);
    }
    if (!curve.empty() && (curve.size() - 1) % stride != 0) {
        const auto& p = curve.back();
        points += fmt::format("{:.2f},{:.2f} ", kMargin + plot_w * p.fee / max_fee,
                              kHeight - kMargin - plot_h * p.visits / max_visits);
    }
    if (!points.empty())
        points.pop_back();
    svg += fmt::format("<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"{}\"/>\n", points);
    svg += "</svg>\n";
    return svg;
}

void write_outputs(const PipelineResult& result, const std::filesystem::path& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec)
        throw Error(ErrorCode::IoError, fmt::format("cannot create '{}': {}", out_dir.string(), ec.message()));

    write_text(out_dir / "report.json", result_to_json(result).dump(2) + "\n");
    write_report_csv(out_dir / "report.csv", result.report);

    std::vector<std::vector<std::string>> rows;
    rows.reserve(result.tourism.surplus.curve.size());
    for (const auto& p : result.tourism.surplus.curve)
        rows.push_back({csv::format_number(p.fee), csv::format_number(p.visits)});
    csv::write(out_dir / "demand_curve.csv", {"fee", "visits"}, rows);
    write_text(out_dir / "demand_curve.svg", render_demand_svg(result.tourism.surplus.curve));

    std::string log;
    for (const auto& line : result.run_log)
        log += line + "\n";
    write_text(out_dir / "run_log.txt", log);
}

PipelineResult run_pipeline(const RunConfig& config, const std::filesystem::path& out_dir) {
    auto result = evaluate(config);
    write_outputs(result, out_dir);
    return result;
}

// --- sweeps ------------------------------------------------------------------

ParameterGrid read_parameter_grid(const std::filesystem::path& path) {
    const auto table = csv::read(path);
    ParameterGrid grid{table.header, table.rows};
    const RunConfig probe;
    for (const auto& key : grid.keys)
        if (!probe.known(key))
            throw Error(ErrorCode::UnknownParameter, fmt::format("{}: '{}'", path.string(), key));
    return grid;
}

std::vector<SweepRow> sensitivity_sweep(const RunConfig& base, const ParameterGrid& grid) {
    std::vector<RunConfig> configs;
    configs.reserve(grid.points.size());
    for (const auto& point : grid.points) {
        if (point.size() != grid.keys.size())
            throw Error(ErrorCode::InvalidArgument,
                        fmt::format("grid point has {} values for {} keys", point.size(), grid.keys.size()));
        RunConfig c = base;
        for (std::size_t i = 0; i < grid.keys.size(); ++i)
            c.set(grid.keys[i], point[i]);
        configs.push_back(std::move(c));
    }

    auto run_point = [](const RunConfig& config) {
        const auto r = evaluate(config);
        SweepRow row;
        row.net_benefit_mbdt = r.report.net_benefit.millions();
        row.gross_benefit_mbdt = r.report.gross_benefit.millions();
        row.gross_cost_mbdt = r.report.gross_cost.millions();
        for (const auto* list : {&r.report.benefits, &r.report.costs, &r.report.excluded})
            for (const auto& c : *list)
                if (c.available())
                    row.components[std::string(to_string(c.kind))] = c.npv->millions();
        return row;
    };

    std::vector<SweepRow> rows(configs.size());
    const std::size_t batch = std::max(1u, std::thread::hardware_concurrency());
    for (std::size_t start = 0; start < configs.size(); start += batch) {
        const std::size_t end = std::min(configs.size(), start + batch);
        std::vector<std::future<SweepRow>> pending;
        for (std::size_t i = start; i < end; ++i)
            pending.push_back(std::async(std::launch::async, run_point, std::cref(configs[i])));
        for (std::size_t i = start; i < end; ++i) {
            rows[i] = pending[i - start].get();
            rows[i].index = i;
            rows[i].values = grid.points[i];
        }
    }
    return rows;
}

void write_sweep_csv(const std::filesystem::path& path, const ParameterGrid& grid, const std::vector<SweepRow>& rows) {
    std::vector<std::string> header{"index"};
    header.insert(header.end(), grid.keys.begin(), grid.keys.end());
    header.insert(header.end(), {"net_benefit_mbdt", "gross_benefit_mbdt", "gross_cost_mbdt"});
    std::vector<std::string> kinds;
    for (int k = 0; k <= static_cast<int>(ComponentKind::Environmental); ++k)
        kinds.emplace_back(to_string(static_cast<ComponentKind>(k)));
    for (const auto& k : kinds)
        header.push_back(k + "_mbdt");

    std::vector<std::vector<std::string>> out;
    for (const auto& r : rows) {
        std::vector<std::string> line{std::to_string(r.index)};
        line.insert(line.end(), r.values.begin(), r.values.end());
        for (double v : {r.net_benefit_mbdt, r.gross_benefit_mbdt, r.gross_cost_mbdt})
            line.push_back(csv::format_number(v));
        for (const auto& k : kinds) {
            const auto it = r.components.find(k);
            line.push_back(it == r.components.end() ? std::string{} : csv::format_number(it->second));
        }
        out.push_back(std::move(line));
    }
    csv::write(path, header, out);
}

} // namespace hydro_cba
