#include "hydro_cba/econometrics.hpp"

#include "hydro_cba/csv.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

namespace hydro_cba {

ObservationSet::ObservationSet(std::vector<double> response, std::vector<Regressor> regressors)
    : response_(std::move(response)), regressors_(std::move(regressors)) {
    const auto n = response_.size();
    for (const auto& r : regressors_) {
        if (r.values.size() != n)
            throw Error(ErrorCode::InvalidArgument,
                        fmt::format("regressor '{}' has {} values, response has {}", r.name, r.values.size(), n));
        if (r.dummy)
            for (double v : r.values)
                if (v != 0.0 && v != 1.0)
                    throw Error(ErrorCode::InvalidArgument,
                                fmt::format("dummy regressor '{}' contains {}", r.name, v));
    }
    if (n <= regressors_.size() + 1)
        throw Error(ErrorCode::InsufficientObservations,
                    fmt::format("{} observations for {} regressors plus intercept", n, regressors_.size()));
}

const RegressionTerm* RegressionFit::find(const std::string& name) const noexcept {
    for (const auto& c : coefficients)
        if (c.name == name)
            return &c;
    return nullptr;
}

double RegressionFit::coefficient(const std::string& name) const {
    if (const auto* term = find(name))
        return term->estimate;
    throw Error(ErrorCode::MissingRegressor, fmt::format("fit has no regressor '{}'", name));
}

namespace {

using Matrix = std::vector<std::vector<double>>;

// Cholesky factor of a symmetric positive semi-definite matrix with diagonal
// pivoting: P A P^T = L L^T. Stops with SingularDesign when the largest
// remaining pivot falls below `tolerance` times the largest original diagonal.
struct PivotedCholesky {
    Matrix lower;
    std::vector<std::size_t> order; // order[i] = original index of pivoted row i

    PivotedCholesky(Matrix a, double tolerance) {
        const auto p = a.size();
        order.resize(p);
        std::iota(order.begin(), order.end(), std::size_t{0});
        double max_diag = 0.0;
        for (std::size_t i = 0; i < p; ++i)
            max_diag = std::max(max_diag, a[i][i]);
        if (!(max_diag > 0.0))
            throw Error(ErrorCode::SingularDesign, "normal matrix has no positive diagonal");

        lower.assign(p, std::vector<double>(p, 0.0));
        for (std::size_t j = 0; j < p; ++j) {
            // a holds the Schur complement in rows/cols j..p-1 (pivoted order).
            std::size_t best = j;
            for (std::size_t i = j + 1; i < p; ++i)
                if (a[i][i] > a[best][best])
                    best = i;
            if (a[best][best] <= tolerance * max_diag)
                throw Error(ErrorCode::SingularDesign,
                            fmt::format("design matrix is rank deficient (rank {} of {})", j, p));
            if (best != j) {
                std::swap(a[j], a[best]);
                for (auto& row : a)
                    std::swap(row[j], row[best]);
                std::swap(lower[j], lower[best]);
                std::swap(order[j], order[best]);
            }
            const double d = std::sqrt(a[j][j]);
            lower[j][j] = d;
            for (std::size_t i = j + 1; i < p; ++i)
                lower[i][j] = a[i][j] / d;
            for (std::size_t i = j + 1; i < p; ++i)
                for (std::size_t c = j + 1; c <= i; ++c) {
                    a[i][c] -= lower[i][j] * lower[c][j];
                    a[c][i] = a[i][c];
                }
        }
    }

    std::vector<double> solve(const std::vector<double>& rhs) const {
        const auto p = lower.size();
        std::vector<double> z(p);
        for (std::size_t i = 0; i < p; ++i) {
            double s = rhs[order[i]];
            for (std::size_t c = 0; c < i; ++c)
                s -= lower[i][c] * z[c];
            z[i] = s / lower[i][i];
        }
        for (std::size_t i = p; i-- > 0;) {
            double s = z[i];
            for (std::size_t r = i + 1; r < p; ++r)
                s -= lower[r][i] * z[r];
            z[i] = s / lower[i][i];
        }
        std::vector<double> x(p);
        for (std::size_t i = 0; i < p; ++i)
            x[order[i]] = z[i];
        return x;
    }
};

constexpr double kPivotTolerance = 1e-10;

double two_sided_normal_p(double t) { return std::erfc(std::abs(t) / std::sqrt(2.0)); }

} // namespace

RegressionFit ols_fit(const ObservationSet& data) {
    const auto n = data.n();
    const auto k = data.k();
    const auto p = k + 1;

    // Column j of the design: 0 is the intercept.
    auto design = [&](std::size_t row, std::size_t col) {
        return col == 0 ? 1.0 : data.regressors()[col - 1].values[row];
    };

    // Equilibrate columns to unit norm so the pivot tolerance is scale-free.
    std::vector<double> scale(p, 0.0);
    for (std::size_t c = 0; c < p; ++c) {
        double ss = 0.0;
        for (std::size_t r = 0; r < n; ++r)
            ss += design(r, c) * design(r, c);
        if (!(ss > 0.0))
            throw Error(ErrorCode::SingularDesign,
                        fmt::format("regressor '{}' is identically zero", data.regressors()[c - 1].name));
        scale[c] = 1.0 / std::sqrt(ss);
    }

    Matrix normal(p, std::vector<double>(p, 0.0));
    std::vector<double> rhs(p, 0.0);
    for (std::size_t a = 0; a < p; ++a) {
        for (std::size_t b = 0; b <= a; ++b) {
            double s = 0.0;
            for (std::size_t r = 0; r < n; ++r)
                s += design(r, a) * design(r, b);
            normal[a][b] = normal[b][a] = s * scale[a] * scale[b];
        }
        double s = 0.0;
        for (std::size_t r = 0; r < n; ++r)
            s += design(r, a) * data.response()[r];
        rhs[a] = s * scale[a];
    }

    const PivotedCholesky chol(normal, kPivotTolerance);
    auto beta = chol.solve(rhs);
    for (std::size_t c = 0; c < p; ++c)
        beta[c] *= scale[c];

    RegressionFit fit;
    fit.n = n;
    fit.k = k;
    fit.residuals.resize(n);
    const double mean_y = std::accumulate(data.response().begin(), data.response().end(), 0.0) / static_cast<double>(n);
    double ssr = 0.0;
    double sst = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
        double yhat = 0.0;
        for (std::size_t c = 0; c < p; ++c)
            yhat += design(r, c) * beta[c];
        const double e = data.response()[r] - yhat;
        fit.residuals[r] = e;
        ssr += e * e;
        sst += (data.response()[r] - mean_y) * (data.response()[r] - mean_y);
    }

    const double dof = static_cast<double>(n - k - 1);
    const double sigma2 = ssr / dof;
    fit.p_values_approximate = dof < 30.0;

    // Diagonal of (X'X)^-1 = S (scaled inverse) S.
    std::vector<double> unit(p, 0.0);
    auto make_term = [&](std::size_t c, std::string name) {
        std::fill(unit.begin(), unit.end(), 0.0);
        unit[c] = 1.0;
        const double inv_diag = chol.solve(unit)[c] * scale[c] * scale[c];
        RegressionTerm term{std::move(name), beta[c]};
        const double se = std::sqrt(std::max(0.0, sigma2 * inv_diag));
        term.std_error = se;
        if (se > 0.0) {
            term.t_stat = beta[c] / se;
            term.p_value = two_sided_normal_p(*term.t_stat);
        }
        return term;
    };
    fit.intercept = make_term(0, "intercept");
    for (std::size_t c = 1; c < p; ++c)
        fit.coefficients.push_back(make_term(c, data.regressors()[c - 1].name));

    fit.r_squared = sst > 0.0 ? std::clamp(1.0 - ssr / sst, 0.0, 1.0) : 1.0;
    if (fit.r_squared < 1.0)
        fit.f_stat = (fit.r_squared / static_cast<double>(k)) / ((1.0 - fit.r_squared) / dof);
    return fit;
}

// --- serialization -----------------------------------------------------------

namespace {

nlohmann::json optional_to_json(const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::optional<double> optional_from_json(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null())
        return std::nullopt;
    return j.at(key).get<double>();
}

nlohmann::json term_to_json(const RegressionTerm& t) {
    return {{"name", t.name},
            {"estimate", t.estimate},
            {"std_error", optional_to_json(t.std_error)},
            {"t_stat", optional_to_json(t.t_stat)},
            {"p_value", optional_to_json(t.p_value)}};
}

RegressionTerm term_from_json(const nlohmann::json& j) {
    RegressionTerm t;
    t.name = j.at("name").get<std::string>();
    t.estimate = j.at("estimate").get<double>();
    t.std_error = optional_from_json(j, "std_error");
    t.t_stat = optional_from_json(j, "t_stat");
    t.p_value = optional_from_json(j, "p_value");
    return t;
}

} // namespace

void to_json(nlohmann::json& j, const RegressionFit& fit) {
    auto coefficients = nlohmann::json::array();
    for (const auto& c : fit.coefficients)
        coefficients.push_back(term_to_json(c));
    j = {{"intercept", term_to_json(fit.intercept)},
         {"coefficients", coefficients},
         {"r_squared", fit.r_squared},
         {"f_stat", optional_to_json(fit.f_stat)},
         {"residuals", fit.residuals},
         {"n", fit.n},
         {"k", fit.k},
         {"p_values_approximate", fit.p_values_approximate},
         {"source", fit.source}};
}

void from_json(const nlohmann::json& j, RegressionFit& fit) {
    fit.intercept = term_from_json(j.at("intercept"));
    fit.coefficients.clear();
    for (const auto& c : j.at("coefficients"))
        fit.coefficients.push_back(term_from_json(c));
    fit.r_squared = j.at("r_squared").get<double>();
    fit.f_stat = optional_from_json(j, "f_stat");
    fit.residuals = j.value("residuals", std::vector<double>{});
    fit.n = j.at("n").get<std::size_t>();
    fit.k = j.at("k").get<std::size_t>();
    fit.p_values_approximate = j.value("p_values_approximate", false);
    fit.source = j.value("source", std::string("unknown"));
    if (fit.k != fit.coefficients.size())
        throw Error(ErrorCode::ParseError,
                    fmt::format("fit declares k = {} but lists {} coefficients", fit.k, fit.coefficients.size()));
}

RegressionFit read_fit_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::IoError, fmt::format("cannot open '{}'", path.string()));
    try {
        return nlohmann::json::parse(in).get<RegressionFit>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, fmt::format("{}: {}", path.string(), e.what()));
    }
}

void write_fit_json(const std::filesystem::path& path, const RegressionFit& fit) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error(ErrorCode::IoError, fmt::format("cannot write '{}'", path.string()));
    out << nlohmann::json(fit).dump(2) << '\n';
}

// --- prediction and demand ---------------------------------------------------

double predict_rate(const RegressionFit& fit, const Covariates& covariates) {
    double rate = fit.intercept.estimate;
    for (const auto& term : fit.coefficients) {
        const auto it = covariates.find(term.name);
        if (it == covariates.end())
            throw Error(ErrorCode::MissingRegressor, fmt::format("no covariate supplied for '{}'", term.name));
        rate += term.estimate * it->second;
    }
    return rate;
}

double visitation_rate(const Zone& zone, double per) {
    if (zone.population == 0.0)
        throw Error(ErrorCode::DivisionByZero, fmt::format("zone '{}' has zero population", zone.name));
    if (zone.population < 0.0 || zone.visitors_observed < 0.0)
        throw Error(ErrorCode::InvalidArgument, fmt::format("zone '{}' has negative counts", zone.name));
    return zone.visitors_observed / zone.population * per;
}

ConsumerSurplus consumer_surplus(const RegressionFit& fit, const std::vector<Zone>& zones, double fee_step,
                                 const ConsumerSurplusOptions& options) {
    if (!(fee_step > 0.0) || !std::isfinite(fee_step))
        throw Error(ErrorCode::InvalidStep, fmt::format("fee step must be positive, got {}", fee_step));
    const double slope = fit.coefficient(options.cost_regressor);
    if (!(slope < 0.0))
        throw Error(ErrorCode::UpwardSlopingDemand,
                    fmt::format("'{}' coefficient is {}, demand must slope downward", options.cost_regressor, slope));
    for (const auto& z : zones)
        if (!(z.population > 0.0))
            throw Error(ErrorCode::InvalidArgument, fmt::format("zone '{}' needs a positive population", z.name));

    // Base rate per zone at zero added fee; each fee increment shifts it by
    // slope * fee because the model is linear in travel cost.
    std::vector<double> base_rate;
    base_rate.reserve(zones.size());
    for (const auto& z : zones) {
        if (!z.covariates.contains(options.cost_regressor))
            throw Error(ErrorCode::MissingRegressor,
                        fmt::format("zone '{}' has no '{}' covariate", z.name, options.cost_regressor));
        base_rate.push_back(predict_rate(fit, z.covariates));
    }

    auto total_visits = [&](double fee) {
        double total = 0.0;
        for (std::size_t i = 0; i < zones.size(); ++i) {
            const double rate = std::max(0.0, base_rate[i] + slope * fee);
            total += rate * zones[i].population / options.rate_per;
        }
        return total;
    };

    ConsumerSurplus result{MoneyAmount(0.0, options.currency, options.price_year), 0.0, {}};
    double previous = total_visits(0.0);
    result.curve.push_back({0.0, previous});
    if (previous <= 0.0)
        return result;

    std::vector<double> slices;
    for (std::size_t step = 1; step <= options.max_steps; ++step) {
        const double fee = static_cast<double>(step) * fee_step;
        const double visits = total_visits(fee);
        result.curve.push_back({fee, visits});
        slices.push_back(0.5 * (previous + visits) * fee_step);
        if (visits <= 0.0) {
            result.choke_fee = fee;
            result.annual_value = result.annual_value.with_value(compensated_sum(slices));
            return result;
        }
        previous = visits;
    }
    throw Error(ErrorCode::ChokeNotFound,
                fmt::format("visits still positive after {} steps of {}", options.max_steps, fee_step));
}

// --- survey ingestion --------------------------------------------------------

std::vector<SurveyResponse> read_survey_csv(const std::filesystem::path& path) {
    const auto table = csv::read(path);
    const auto id = table.require_column("respondent_id");
    const auto zone = table.require_column("zone");
    const auto tc = table.require_column("travel_cost");
    const auto mi = table.require_column("monthly_income");
    const auto alone = table.require_column("alone");
    const auto dhaka = table.require_column("dhaka");
    const auto visits = table.require_column("visits");

    auto dummy = [&](const std::string& cell, std::size_t r, const char* name) {
        const auto v = csv::to_integer(cell, table, r);
        if (v != 0 && v != 1)
            throw Error(ErrorCode::ParseError, fmt::format("{}: {} must be 0 or 1", table.where(r), name));
        return static_cast<int>(v);
    };

    std::vector<SurveyResponse> out;
    out.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        SurveyResponse s;
        s.respondent_id = row[id];
        s.zone = row[zone];
        s.travel_cost = csv::to_double(row[tc], table, r);
        s.monthly_income = csv::to_double(row[mi], table, r);
        s.alone = dummy(row[alone], r, "alone");
        s.dhaka = dummy(row[dhaka], r, "dhaka");
        s.visits = csv::to_double(row[visits], table, r);
        if (s.visits < 0.0)
            throw Error(ErrorCode::ParseError, fmt::format("{}: negative visits", table.where(r)));
        out.push_back(std::move(s));
    }
    return out;
}

std::map<std::string, double> read_zones_csv(const std::filesystem::path& path) {
    const auto table = csv::read(path);
    const auto zone = table.require_column("zone");
    const auto pop = table.require_column("population");
    std::map<std::string, double> out;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const double population = csv::to_double(table.rows[r][pop], table, r);
        if (!(population > 0.0))
            throw Error(ErrorCode::ParseError, fmt::format("{}: population must be positive", table.where(r)));
        if (!out.emplace(table.rows[r][zone], population).second)
            throw Error(ErrorCode::ParseError,
                        fmt::format("{}: zone '{}' listed twice", table.where(r), table.rows[r][zone]));
    }
    return out;
}

std::vector<Zone> build_zones(const std::vector<SurveyResponse>& survey,
                              const std::map<std::string, double>& populations) {
    struct Accumulator {
        double count = 0, visits = 0, tc = 0, mi = 0, alone = 0, dhaka = 0;
    };
    std::map<std::string, Accumulator> acc;
    for (const auto& s : survey) {
        if (!populations.contains(s.zone))
            throw Error(ErrorCode::InvalidArgument,
                        fmt::format("respondent '{}' is from zone '{}' which has no population", s.respondent_id,
                                    s.zone));
        auto& a = acc[s.zone];
        a.count += 1;
        a.visits += s.visits;
        a.tc += s.travel_cost;
        a.mi += s.monthly_income;
        a.alone += s.alone;
        a.dhaka += s.dhaka;
    }
    std::vector<Zone> zones;
    for (const auto& [name, population] : populations) {
        Zone z{name, population, 0.0, {}};
        if (const auto it = acc.find(name); it != acc.end() && it->second.count > 0) {
            const auto& a = it->second;
            z.visitors_observed = a.visits;
            z.covariates = {{regressor::kTravelCost, a.tc / a.count},
                            {regressor::kMonthlyIncome, a.mi / a.count},
                            {regressor::kAlone, a.alone / a.count},
                            {regressor::kDhaka, a.dhaka / a.count}};
        }
        zones.push_back(std::move(z));
    }
    return zones;
}

ObservationSet zonal_observations(const std::vector<SurveyResponse>& survey, const std::vector<Zone>& zones,
                                  double per) {
    std::map<std::string, double> rate;
    for (const auto& z : zones)
        rate[z.name] = visitation_rate(z, per);
    std::vector<double> response;
    Regressor tc{regressor::kTravelCost, {}, false};
    Regressor mi{regressor::kMonthlyIncome, {}, false};
    Regressor alone{regressor::kAlone, {}, true};
    Regressor dhaka{regressor::kDhaka, {}, true};
    for (const auto& s : survey) {
        const auto it = rate.find(s.zone);
        if (it == rate.end())
            throw Error(ErrorCode::InvalidArgument, fmt::format("no zone '{}' for respondent '{}'", s.zone,
                                                                s.respondent_id));
        response.push_back(it->second);
        tc.values.push_back(s.travel_cost);
        mi.values.push_back(s.monthly_income);
        alone.values.push_back(s.alone);
        dhaka.values.push_back(s.dhaka);
    }
    return ObservationSet(std::move(response), {tc, mi, alone, dhaka});
}

} // namespace hydro_cba
