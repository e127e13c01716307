#pragma once

#include "hydro_cba/series.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hydro_cba {

/// Regressor names used by the zonal travel-cost model.
namespace regressor {
inline constexpr const char* kTravelCost = "travel_cost";
inline constexpr const char* kMonthlyIncome = "monthly_income";
inline constexpr const char* kAlone = "alone";
inline constexpr const char* kDhaka = "dhaka";
} // namespace regressor

struct Regressor {
    std::string name;
    std::vector<double> values;
    bool dummy = false;
};

/// Response vector plus named regressor columns; the intercept is implicit.
class ObservationSet {
public:
    ObservationSet(std::vector<double> response, std::vector<Regressor> regressors);

    std::size_t n() const noexcept { return response_.size(); }
    std::size_t k() const noexcept { return regressors_.size(); }
    const std::vector<double>& response() const noexcept { return response_; }
    const std::vector<Regressor>& regressors() const noexcept { return regressors_; }

private:
    std::vector<double> response_;
    std::vector<Regressor> regressors_;
};

struct RegressionTerm {
    std::string name;
    double estimate = 0.0;
    std::optional<double> std_error;
    std::optional<double> t_stat;
    std::optional<double> p_value;
};

struct RegressionFit {
    RegressionTerm intercept{"intercept"};
    std::vector<RegressionTerm> coefficients;
    double r_squared = 0.0;
    /// Absent when undefined (perfect fit).
    std::optional<double> f_stat;
    std::vector<double> residuals;
    std::size_t n = 0;
    std::size_t k = 0;
    /// p-values use the normal approximation to the t distribution; flagged
    /// when the residual degrees of freedom are below 30.
    bool p_values_approximate = false;
    /// Free-text provenance, e.g. "published" for ingested coefficient tables.
    std::string source = "ols_fit";

    const RegressionTerm* find(const std::string& name) const noexcept;
    /// Throws MissingRegressor.
    double coefficient(const std::string& name) const;
};

RegressionFit ols_fit(const ObservationSet& data);

void to_json(nlohmann::json& j, const RegressionFit& fit);
void from_json(const nlohmann::json& j, RegressionFit& fit);
RegressionFit read_fit_json(const std::filesystem::path& path);
void write_fit_json(const std::filesystem::path& path, const RegressionFit& fit);

using Covariates = std::map<std::string, double>;

/// alpha + sum(beta_j * x_j). Not clamped: negative rates are returned as-is.
double predict_rate(const RegressionFit& fit, const Covariates& covariates);

struct Zone {
    std::string name;
    double population = 0.0;
    double visitors_observed = 0.0;
    /// Zone-mean covariates (travel cost, income, alone share, Dhaka flag).
    Covariates covariates;
};

inline constexpr double kRatePerMillion = 1'000'000.0;

double visitation_rate(const Zone& zone, double per = kRatePerMillion);

struct DemandPoint {
    double fee;
    double visits;
};

struct ConsumerSurplusOptions {
    std::string cost_regressor = regressor::kTravelCost;
    /// Rates produced by the fit are per this many people.
    double rate_per = kRatePerMillion;
    std::size_t max_steps = 1'000'000;
    int price_year = 2018;
    std::string currency = "BDT";
};

struct ConsumerSurplus {
    MoneyAmount annual_value;
    double choke_fee = 0.0;
    std::vector<DemandPoint> curve;
};

/// Second-stage travel-cost demand: raise every zone's travel cost by a
/// hypothetical fee in `fee_step` increments, clamp predicted rates at zero,
/// convert to visits with zone population, and integrate visits over fee by the
/// trapezoidal rule up to the choke fee.
ConsumerSurplus consumer_surplus(const RegressionFit& fit, const std::vector<Zone>& zones, double fee_step,
                                 const ConsumerSurplusOptions& options = {});

// --- survey ingestion --------------------------------------------------------

struct SurveyResponse {
    std::string respondent_id;
    std::string zone;
    double travel_cost = 0.0;
    double monthly_income = 0.0;
    int alone = 0;
    int dhaka = 0;
    double visits = 0.0;
};

std::vector<SurveyResponse> read_survey_csv(const std::filesystem::path& path);
/// zone -> population of potential visitors.
std::map<std::string, double> read_zones_csv(const std::filesystem::path& path);

/// Aggregates respondents into zones: observed visitors are summed, covariates
/// averaged. Zones appear in the order of `populations`; a respondent from a
/// zone without a population entry is an error.
std::vector<Zone> build_zones(const std::vector<SurveyResponse>& survey,
                              const std::map<std::string, double>& populations);

/// One observation per respondent, response = the respondent's zone visitation
/// rate, regressors = the respondent's own covariates.
ObservationSet zonal_observations(const std::vector<SurveyResponse>& survey, const std::vector<Zone>& zones,
                                  double per = kRatePerMillion);

} // namespace hydro_cba
