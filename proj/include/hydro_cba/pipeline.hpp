#pragma once

#include "hydro_cba/aggregator.hpp"
#include "hydro_cba/benefits.hpp"
#include "hydro_cba/config.hpp"
#include "hydro_cba/econometrics.hpp"
#include "hydro_cba/survey.hpp"

#include <nlohmann/json_fwd.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace hydro_cba {

/// Earliest year any configured valuation reads from the CPI.
int required_cpi_start(const RunConfig& config);

/// Reads `inputs.cpi` and backcasts it to required_cpi_start().
CpiIndexTable load_cpi(const RunConfig& config);

ValuationComponent value_electricity(const RunConfig& config, const CpiIndexTable& cpi,
                                     std::optional<BackcastMode> mode = std::nullopt);
ValuationComponent value_fisheries(const RunConfig& config, const CpiIndexTable& cpi);

struct TourismValuation {
    ValuationComponent component;
    /// Consumer surplus computed from the fit and zones.
    ConsumerSurplus surplus;
    std::vector<Zone> zones;
    /// Annual value actually used; differs from `surplus` when
    /// `tourism.annual_value_mbdt` is set.
    MoneyAmount annual_value;
    bool annual_value_overridden = false;
};

TourismValuation value_tourism(const RunConfig& config, const CpiIndexTable& cpi);

/// Displacement, lives lost, construction and environmental cost.
std::vector<ValuationComponent> value_costs(const RunConfig& config, const CpiIndexTable& cpi);

struct ElectricityModeResult {
    BackcastMode mode;
    double total_mbdt = 0.0;
    ReferenceCheck reference;
};

struct PipelineResult {
    NetBenefitReport report;
    std::vector<ReferenceCheck> references;
    std::vector<ElectricityModeResult> electricity_modes;
    TourismValuation tourism;
    SurveySummary income;
    CpiIndexTable cpi;
    /// `imputed,<series>,<year>,<value>` lines, then per-series summaries.
    std::vector<std::string> run_log;
    std::map<std::string, std::string> config_snapshot;
};

/// Runs ingestion, series preparation, every valuation and the aggregation in
/// memory.
PipelineResult evaluate(const RunConfig& config);

nlohmann::json result_to_json(const PipelineResult& result);

/// Writes report.json, report.csv, demand_curve.csv, demand_curve.svg and
/// run_log.txt into `out_dir`.
void write_outputs(const PipelineResult& result, const std::filesystem::path& out_dir);

PipelineResult run_pipeline(const RunConfig& config, const std::filesystem::path& out_dir);

/// Fee vs predicted visits as a static SVG line chart.
std::string render_demand_svg(const std::vector<DemandPoint>& curve);

// --- sweeps ------------------------------------------------------------------

struct ParameterGrid {
    std::vector<std::string> keys;
    /// One row of values per grid point, aligned with `keys`.
    std::vector<std::vector<std::string>> points;
};

/// CSV whose header names config keys and whose rows are grid points.
ParameterGrid read_parameter_grid(const std::filesystem::path& path);

struct SweepRow {
    std::size_t index = 0;
    std::vector<std::string> values;
    double net_benefit_mbdt = 0.0;
    double gross_benefit_mbdt = 0.0;
    double gross_cost_mbdt = 0.0;
    /// Component name -> value in million BDT; Unavailable components absent.
    std::map<std::string, double> components;
};

/// One full evaluation per grid point. Points may run concurrently; rows come
/// back in grid order.
std::vector<SweepRow> sensitivity_sweep(const RunConfig& base, const ParameterGrid& grid);

void write_sweep_csv(const std::filesystem::path& path, const ParameterGrid& grid, const std::vector<SweepRow>& rows);

} // namespace hydro_cba
