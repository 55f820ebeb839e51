#include "lumpsum/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>

#include "CLI11.hpp"
#include "lumpsum/bounds.hpp"
#include "lumpsum/contract_pipeline.hpp"
#include "lumpsum/dp_oracle.hpp"
#include "lumpsum/io.hpp"
#include "lumpsum/parallel.hpp"
#include "lumpsum/simulate.hpp"

namespace lumpsum {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// Everything a command needs after config and overrides are merged.
struct Settings {
    ModelParams model;
    std::optional<double> y_max;
    std::optional<int> n_y;
    double safety = 0.9;
    int checkpoints = 200;
    int z_grid = 0;

    int paths = 100000;
    int steps = 200;
    std::uint64_t seed = 20240601;
    std::optional<double> y0;
    bool write_paths = false;
    std::vector<double> deviations;

    WeightExponent exponent = WeightExponent::gamma_minus_one;
    ReservationUnits units = ReservationUnits::time_zero;
    std::optional<double> tolerance;

    std::optional<double> T;
    std::vector<double> N_values{1, 5, 10};
    std::vector<double> R_values{0.0, 0.5, 1.0, 1.5, 2.0};
    std::vector<double> T1_values{1.0, 1.5, 2.0, 2.5, 3.0, 3.5};
    std::vector<double> k_values{0.0, 0.05, 0.2};

    int oracle_n_t = 0;  // 0: derived from the PDE step
    int oracle_n_z = 101;
    int oracle_n_y = 40;
    double oracle_y_max = 4.0;
};

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
    throw Error(ErrorCode::config, "invalid value for " + key + ": '" + value + "'");
}

double parse_double(const std::string& key, const std::string& s) {
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(x)) bad_value(key, s);
    return x;
}

long long parse_int(const std::string& key, const std::string& s) {
    long long x = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
    if (ec != std::errc() || ptr != s.data() + s.size()) bad_value(key, s);
    return x;
}

std::vector<double> parse_list(const std::string& key, const std::string& s) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const std::size_t comma = s.find(',', start);
        const std::size_t end = comma == std::string::npos ? s.size() : comma;
        out.push_back(parse_double(key, s.substr(start, end - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

bool parse_bool(const std::string& key, const std::string& s) {
    if (s == "true" || s == "1") return true;
    if (s == "false" || s == "0") return false;
    bad_value(key, s);
}

int positive_int(const std::string& key, const std::string& s) {
    const long long v = parse_int(key, s);
    if (v < 1 || v > 1000000000) bad_value(key, s);
    return static_cast<int>(v);
}

using Setter = std::function<void(Settings&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"gamma", [](Settings& s, const std::string& k, const std::string& v) { s.model.gamma = parse_double(k, v); }},
        {"k_a", [](Settings& s, const std::string& k, const std::string& v) { s.model.k_a = parse_double(k, v); }},
        {"K", [](Settings& s, const std::string& k, const std::string& v) { s.model.K = parse_double(k, v); }},
        {"R_a", [](Settings& s, const std::string& k, const std::string& v) { s.model.R_a = parse_double(k, v); }},
        {"x0", [](Settings& s, const std::string& k, const std::string& v) { s.model.x0 = parse_double(k, v); }},
        {"schedule", [](Settings& s, const std::string& k, const std::string& v) { s.model.schedule = parse_list(k, v); }},
        {"y_max", [](Settings& s, const std::string& k, const std::string& v) { s.y_max = parse_double(k, v); }},
        {"n_y", [](Settings& s, const std::string& k, const std::string& v) { s.n_y = positive_int(k, v); }},
        {"safety", [](Settings& s, const std::string& k, const std::string& v) { s.safety = parse_double(k, v); }},
        {"checkpoints", [](Settings& s, const std::string& k, const std::string& v) { s.checkpoints = positive_int(k, v); }},
        {"z_grid", [](Settings& s, const std::string& k, const std::string& v) {
             s.z_grid = static_cast<int>(parse_int(k, v));
         }},
        {"paths", [](Settings& s, const std::string& k, const std::string& v) { s.paths = positive_int(k, v); }},
        {"steps", [](Settings& s, const std::string& k, const std::string& v) { s.steps = positive_int(k, v); }},
        {"seed", [](Settings& s, const std::string& k, const std::string& v) {
             std::uint64_t x = 0;
             const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
             if (ec != std::errc() || ptr != v.data() + v.size()) bad_value(k, v);
             s.seed = x;
         }},
        {"y0", [](Settings& s, const std::string& k, const std::string& v) { s.y0 = parse_double(k, v); }},
        {"write_paths", [](Settings& s, const std::string& k, const std::string& v) { s.write_paths = parse_bool(k, v); }},
        {"deviations", [](Settings& s, const std::string& k, const std::string& v) { s.deviations = parse_list(k, v); }},
        {"exponent", [](Settings& s, const std::string& k, const std::string& v) {
             if (v == "gamma_minus_one") s.exponent = WeightExponent::gamma_minus_one;
             else if (v == "gamma") s.exponent = WeightExponent::gamma;
             else bad_value(k, v);
         }},
        {"units", [](Settings& s, const std::string& k, const std::string& v) {
             if (v == "time_zero") s.units = ReservationUnits::time_zero;
             else if (v == "period_start") s.units = ReservationUnits::period_start;
             else bad_value(k, v);
         }},
        {"tolerance", [](Settings& s, const std::string& k, const std::string& v) { s.tolerance = parse_double(k, v); }},
        {"T", [](Settings& s, const std::string& k, const std::string& v) { s.T = parse_double(k, v); }},
        {"N_values", [](Settings& s, const std::string& k, const std::string& v) { s.N_values = parse_list(k, v); }},
        {"R_values", [](Settings& s, const std::string& k, const std::string& v) { s.R_values = parse_list(k, v); }},
        {"T1_values", [](Settings& s, const std::string& k, const std::string& v) { s.T1_values = parse_list(k, v); }},
        {"k_values", [](Settings& s, const std::string& k, const std::string& v) { s.k_values = parse_list(k, v); }},
        {"oracle_n_t", [](Settings& s, const std::string& k, const std::string& v) { s.oracle_n_t = positive_int(k, v); }},
        {"oracle_n_z", [](Settings& s, const std::string& k, const std::string& v) { s.oracle_n_z = positive_int(k, v); }},
        {"oracle_n_y", [](Settings& s, const std::string& k, const std::string& v) { s.oracle_n_y = positive_int(k, v); }},
        {"oracle_y_max", [](Settings& s, const std::string& k, const std::string& v) {
             s.oracle_y_max = parse_double(k, v);
         }},
    };
    return table;
}

Settings resolve(const RunManifest& m) {
    Settings s;
    if (!m.config_path.empty()) s.model = load_model_file(m.config_path);
    for (const std::string& item : m.overrides) {
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw Error(ErrorCode::config, "override must look like key=value: '" + item + "'");
        }
        const std::string key = item.substr(0, eq);
        const auto it = setters().find(key);
        if (it == setters().end()) throw Error(ErrorCode::config, "unknown override key: " + key);
        it->second(s, key, item.substr(eq + 1));
    }
    if (m.seed) s.seed = *m.seed;
    if (m.paths) s.paths = *m.paths;
    if (m.n_y) s.n_y = *m.n_y;
    if (m.y_max) s.y_max = *m.y_max;
    return s;
}

// Grid for a model; `largest_R` widens the default domain for sweeps.
GridSpec grid_for(const Settings& s, const ValidatedModel& model, double largest_R = 0.0) {
    GridSpec g = default_grid(model);
    g.y_max = std::max(g.y_max, 4.0 * std::max(2.0 * largest_R, 2.0));
    if (s.y_max) g.y_max = *s.y_max;
    if (s.n_y) g.n_y = *s.n_y;
    g.safety = s.safety;
    g.checkpoints = s.checkpoints;
    g.z_grid_points = s.z_grid;
    validate_grid(g);
    return g;
}

// Files of one run. They are written only after the command succeeds and
// removed again if any write fails.
class Staging {
public:
    explicit Staging(std::string dir) : dir_(std::move(dir)) {}

    void add(const std::string& name, std::string content) { files_.emplace_back(name, std::move(content)); }
    void add_json(const std::string& name, const ordered_json& j) { add(name, j.dump(2) + "\n"); }

    /// Registers a file that a callee writes itself.
    std::string external(const std::string& name) {
        ensure_dir();
        const std::string path = (fs::path(dir_) / name).string();
        created_.push_back(path);
        return path;
    }

    void commit() {
        ensure_dir();
        for (const auto& [name, content] : files_) {
            const std::string path = (fs::path(dir_) / name).string();
            created_.push_back(path);
            write_text_file(path, content);
        }
    }

    void rollback() noexcept {
        std::error_code ec;
        for (const std::string& p : created_) fs::remove(p, ec);
        if (made_dir_) fs::remove(dir_, ec);  // only succeeds if empty
    }

private:
    void ensure_dir() {
        if (dir_ready_) return;
        std::error_code ec;
        if (!fs::exists(dir_, ec)) {
            if (!fs::create_directories(dir_, ec) || ec) {
                throw Error(ErrorCode::io, "cannot create output directory: " + dir_);
            }
            made_dir_ = true;
        } else if (!fs::is_directory(dir_, ec)) {
            throw Error(ErrorCode::io, "output path is not a directory: " + dir_);
        }
        dir_ready_ = true;
    }

    std::string dir_;
    std::vector<std::pair<std::string, std::string>> files_;
    std::vector<std::string> created_;
    bool dir_ready_ = false;
    bool made_dir_ = false;
};

ordered_json header(const std::string& command, const ModelParams& p, const GridSpec& g) {
    ordered_json j;
    j["command"] = command;
    j["model"] = to_json(p);
    j["grid"] = to_json(g);
    return j;
}

ordered_json nodes_json(const Indicator& ind) { return ind.nodes(); }

void cmd_solve(const Settings& s, Staging& out, std::ostream& log) {
    const ValidatedModel model = validate(s.model);
    const GridSpec grid = grid_for(s, model);
    const ContractSolution sol = solve_initial(model, grid);
    const NegotiationReport rep = principal_value(sol, model.R_a());

    ordered_json j = header("solve", s.model, grid);
    j["value"] = to_json(rep);
    ordered_json periods = ordered_json::array();
    for (int i = 1; i <= model.N(); ++i) {
        const PeriodSolution& p = sol.period(i);
        periods.push_back({{"index", i},
                           {"t_start", p.t_start()},
                           {"t_end", p.t_end()},
                           {"steps", p.total_steps},
                           {"stored_levels", p.n_levels()},
                           {"residual", discrete_residual(p, model, grid)}});
        out.add("period_" + std::to_string(i) + ".csv", grid_csv(p));
    }
    j["periods"] = std::move(periods);
    ordered_json payments = ordered_json::array();
    for (int i = 1; i < model.N(); ++i) {
        payments.push_back({{"index", i},
                            {"employment_nodes", nodes_json(employment_interval(sol, i))},
                            {"truncation_nodes", nodes_json(truncation_region(sol, i))}});
        out.add("payment_" + std::to_string(i) + ".csv", payment_csv(sol.payment(i)));
    }
    j["payments"] = std::move(payments);
    out.add_json("summary.json", j);
    log << "solve: V_p=" << format_double(rep.V_p) << " Y0*=" << format_double(rep.Y0_star) << "\n";
}

void cmd_simulate(const Settings& s, Staging& out, std::ostream& log) {
    const ValidatedModel model = validate(s.model);
    const GridSpec grid = grid_for(s, model);
    const ContractSolution sol = solve_initial(model, grid);
    const NegotiationReport rep = principal_value(sol, model.R_a());

    SimConfig cfg;
    cfg.n_paths = s.paths;
    cfg.n_steps_per_period = s.steps;
    cfg.seed = s.seed;
    cfg.y0 = s.y0.value_or(rep.Y0_star);
    const std::string paths_csv = s.write_paths ? out.external("paths.csv") : std::string{};
    const SimReport report = simulate_principal(sol, cfg, {}, paths_csv);

    ordered_json j = header("simulate", s.model, grid);
    j["y0"] = cfg.y0;
    j["report"] = to_json(report);
    j["tolerance"] = 3.0 * report.std_error + 2.0 * (grid.dy() + report.max_dt);
    j["consistent"] = std::abs(report.estimate - report.pde_value) <= j["tolerance"].get<double>();
    ordered_json devs = ordered_json::array();
    for (double d : s.deviations) {
        const DeviationReport r = agent_deviation(sol, cfg, Deviation::constant(d));
        ordered_json e = to_json(r);
        e["eps"] = d;
        e["optimal"] = r.J_dev <= r.J_star + 3.0 * r.se_diff;
        devs.push_back(std::move(e));
    }
    j["deviations"] = std::move(devs);
    out.add_json("sim.json", j);
    log << "simulate: estimate=" << format_double(report.estimate) << " pde=" << format_double(report.pde_value)
        << " se=" << format_double(report.std_error) << "\n";
}

void cmd_verify_bounds(const Settings& s, Staging& out, std::ostream& log) {
    const ValidatedModel model = validate(s.model);
    const GridSpec grid = grid_for(s, model);
    const VerificationGrid vg = VerificationGrid::from(grid);
    const Delta delta = search_delta0(model.gamma(), model.N(), model.k_a(), model.T(), model.K(), vg, {}, s.exponent);
    const SupersolutionReport sup =
        verify_supersolution(delta, model.gamma(), model.N(), model.k_a(), model.T(), model.K(), vg, s.exponent);
    const ContractSolution sol = solve_initial(model, grid);
    const SandwichReport sandwich = check_sandwich(sol, delta, s.exponent);

    ordered_json j = header("verify-bounds", s.model, grid);
    j["exponent"] = s.exponent == WeightExponent::gamma ? "gamma" : "gamma_minus_one";
    j["delta0"] = to_json(delta);
    j["supersolution"] = to_json(sup);
    j["sandwich"] = to_json(sandwich);
    j["passed"] = sup.min_residual >= 0.0 && sandwich.passed(1e-6);
    out.add_json("bounds.json", j);
    log << "verify-bounds: min residual=" << format_double(sup.min_residual)
        << " lower margin=" << format_double(sandwich.lower_margin)
        << " upper margin=" << format_double(sandwich.upper_margin) << "\n";
}

int as_count(double x, const char* key) {
    const double r = std::round(x);
    if (!(r >= 1.0 && std::abs(x - r) < 1e-12)) throw Error(ErrorCode::config, std::string(key) + " must hold positive integers");
    return static_cast<int>(r);
}

struct SweepPoint {
    std::string label;
    double parameter = 0.0;
    ModelParams params;
};

struct SweepRow {
    std::vector<NegotiationReport> reports;  // one per R_a
};

// Solves every point once (in parallel across points) and evaluates the
// principal value at each R_a of the sweep.
std::vector<SweepRow> run_sweep(const Settings& s, const std::vector<SweepPoint>& points, GridSpec& grid_out) {
    const double largest_R = s.R_values.empty() ? 0.0 : *std::max_element(s.R_values.begin(), s.R_values.end());
    for (double R : s.R_values) {
        if (!(R >= 0.0)) throw Error(ErrorCode::config, "R_values must be nonnegative");
    }
    std::vector<ValidatedModel> models;
    for (const SweepPoint& p : points) models.push_back(validate(p.params));
    grid_out = grid_for(s, models.front(), largest_R);
    const GridSpec grid = grid_out;
    std::vector<SweepRow> rows(points.size());
    parallel_for(points.size(), 0, [&](std::size_t k) {
        const ContractSolution sol = solve_initial(models[k], grid);
        for (double R : s.R_values) rows[k].reports.push_back(principal_value(sol, R));
    });
    return rows;
}

std::string sweep_csv(const std::vector<SweepPoint>& points, const std::vector<SweepRow>& rows,
                      const std::vector<double>& R_values, const char* parameter) {
    std::string text = std::string("label,") + parameter + ",R_a,V_p,Y0_star,rent\n";
    for (std::size_t k = 0; k < points.size(); ++k) {
        for (std::size_t r = 0; r < R_values.size(); ++r) {
            const NegotiationReport& rep = rows[k].reports[r];
            text += points[k].label + ',' + format_double(points[k].parameter) + ',' + format_double(R_values[r]) + ',' +
                    format_double(rep.V_p) + ',' + format_double(rep.Y0_star) + ',' + format_double(rep.rent) + '\n';
        }
    }
    return text;
}

ordered_json sweep_json(const std::string& command, const Settings& s, const GridSpec& grid,
                        const std::vector<SweepPoint>& points, const std::vector<SweepRow>& rows) {
    ordered_json j = header(command, s.model, grid);
    j["R_values"] = s.R_values;
    ordered_json series = ordered_json::array();
    for (std::size_t k = 0; k < points.size(); ++k) {
        ordered_json vp = ordered_json::array();
        for (const auto& rep : rows[k].reports) vp.push_back(rep.V_p);
        series.push_back({{"label", points[k].label},
                          {"parameter", points[k].parameter},
                          {"schedule", points[k].params.schedule},
                          {"V_p", std::move(vp)}});
    }
    j["series"] = std::move(series);
    return j;
}

// True if series[a] <= series[b] at every R_a, for consecutive a < b in `order`.
bool nondecreasing(const std::vector<SweepRow>& rows, const std::vector<std::size_t>& order) {
    for (std::size_t k = 0; k + 1 < order.size(); ++k) {
        const auto& lo = rows[order[k]].reports;
        const auto& hi = rows[order[k + 1]].reports;
        for (std::size_t r = 0; r < lo.size(); ++r) {
            if (hi[r].V_p < lo[r].V_p) return false;
        }
    }
    return true;
}

void cmd_sweep_frequency(const Settings& s, Staging& out, std::ostream& log) {
    const double T = s.T.value_or(10.0);
    std::vector<SweepPoint> points;
    for (double n : s.N_values) {
        const int N = as_count(n, "N_values");
        SweepPoint p{"N=" + std::to_string(N), static_cast<double>(N), s.model};
        p.params.schedule.clear();
        for (int i = 0; i <= N; ++i) p.params.schedule.push_back(i * T / N);
        points.push_back(std::move(p));
    }
    if (points.empty()) throw Error(ErrorCode::config, "N_values is empty");
    GridSpec grid;
    const std::vector<SweepRow> rows = run_sweep(s, points, grid);
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return points[a].parameter < points[b].parameter; });
    ordered_json j = sweep_json("sweep-frequency", s, grid, points, rows);
    j["T"] = T;
    j["nondecreasing_in_N"] = nondecreasing(rows, order);
    out.add("frequency.csv", sweep_csv(points, rows, s.R_values, "N"));
    out.add_json("frequency.json", j);
    log << "sweep-frequency: " << points.size() << " schedules, nondecreasing=" << j["nondecreasing_in_N"] << "\n";
}

void cmd_sweep_distribution(const Settings& s, Staging& out, std::ostream& log) {
    const double T = s.T.value_or(4.0);
    std::vector<SweepPoint> points;
    SweepPoint base{"baseline", T, s.model};
    base.params.schedule = {0.0, T};
    points.push_back(std::move(base));
    for (double t1 : s.T1_values) {
        SweepPoint p{"T1=" + format_double(t1), t1, s.model};
        p.params.schedule = {0.0, t1, T};
        points.push_back(std::move(p));
    }
    GridSpec grid;
    const std::vector<SweepRow> rows = run_sweep(s, points, grid);
    bool dominates = true;
    for (std::size_t k = 1; k < rows.size(); ++k) {
        for (std::size_t r = 0; r < s.R_values.size(); ++r) {
            if (rows[k].reports[r].V_p < rows[0].reports[r].V_p) dominates = false;
        }
    }
    std::vector<std::size_t> order(points.size() - 1);
    std::iota(order.begin(), order.end(), 1);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return points[a].parameter < points[b].parameter; });
    ordered_json j = sweep_json("sweep-distribution", s, grid, points, rows);
    j["T"] = T;
    j["two_payments_dominate_baseline"] = dominates;
    j["nondecreasing_in_T1"] = nondecreasing(rows, order);
    out.add("distribution.csv", sweep_csv(points, rows, s.R_values, "T1"));
    out.add_json("distribution.json", j);
    log << "sweep-distribution: dominates=" << dominates << " nondecreasing=" << j["nondecreasing_in_T1"] << "\n";
}

void cmd_sweep_discount(const Settings& s, Staging& out, std::ostream& log) {
    if (s.k_values.empty()) throw Error(ErrorCode::config, "k_values is empty");
    std::vector<ValidatedModel> models;
    for (double k : s.k_values) {
        ModelParams p = s.model;
        p.k_a = k;
        models.push_back(validate(p));
    }
    const GridSpec grid = grid_for(s, models.front());
    std::vector<std::optional<ContractSolution>> sols(models.size());
    parallel_for(models.size(), 0, [&](std::size_t k) { sols[k].emplace(solve_initial(models[k], grid)); });

    ordered_json j = header("sweep-discount", s.model, grid);
    ordered_json series = ordered_json::array();
    std::string csv = "k_a,y,v0\n";
    for (std::size_t k = 0; k < models.size(); ++k) {
        const ContractSolution& sol = *sols[k];
        const GridFunction v0 = sol.initial_value();
        for (std::size_t i = 0; i < v0.size(); ++i) {
            csv += format_double(s.k_values[k]) + ',' + format_double(v0.y(static_cast<int>(i))) + ',' + format_double(v0[i]) + '\n';
        }
        ordered_json employment = ordered_json::array(), truncation = ordered_json::array();
        for (int i = 1; i < models[k].N(); ++i) {
            employment.push_back(employment_interval(sol, i).count());
            truncation.push_back(truncation_region(sol, i).count());
        }
        series.push_back({{"k_a", s.k_values[k]},
                          {"value", to_json(principal_value(sol, models[k].R_a()))},
                          {"employment_counts", std::move(employment)},
                          {"truncation_counts", std::move(truncation)}});
    }
    j["series"] = std::move(series);
    out.add("discount.csv", csv);
    out.add_json("discount.json", j);
    log << "sweep-discount: " << models.size() << " discount rates\n";
}

void cmd_compare_negotiation(const Settings& s, Staging& out, std::ostream& log) {
    const ValidatedModel model = validate(s.model);
    const GridSpec grid = grid_for(s, model);
    const NegotiationComparison c = compare_settings(model, grid, s.tolerance, s.units);
    ordered_json j = header("compare-negotiation", s.model, grid);
    j["units"] = s.units == ReservationUnits::time_zero ? "time_zero" : "period_start";
    j["comparison"] = to_json(c);
    std::string winner = c.winner;
    if (c.winner == "indistinguishable") {
        GridSpec fine = grid;
        fine.n_y *= 2;
        const NegotiationComparison refined = compare_settings(model, fine, s.tolerance, s.units);
        j["refined"] = to_json(refined);
        winner = refined.winner;
    }
    j["winner"] = winner;
    out.add_json("negotiation.json", j);
    log << "compare-negotiation: winner=" << winner << "\n";
}

// Smallest step count at least `from` that puts every payment time on a step.
int aligned_steps(const ValidatedModel& model, int from) {
    for (int n = std::max(1, from); n < from + 100000; ++n) {
        bool ok = true;
        for (int i = 1; i < model.N() && ok; ++i) {
            const double s = model.period_end(i) / model.T() * n;
            ok = std::abs(s - std::round(s)) <= 1e-9 * std::max(1.0, s);
        }
        if (ok) return n;
    }
    throw Error(ErrorCode::config, "oracle-check: cannot align time steps with the schedule; set oracle_n_t");
}

void cmd_oracle_check(const Settings& s, Staging& out, std::ostream& log) {
    const ValidatedModel model = validate(s.model);
    GridSpec grid;
    grid.y_max = s.oracle_y_max;
    grid.n_y = s.oracle_n_y;
    grid.safety = s.safety;
    validate_grid(grid);
    const ContractSolution sol = solve_initial(model, grid);
    DpOracleConfig cfg;
    cfg.n_y = grid.n_y;
    cfg.y_max = grid.y_max;
    cfg.n_z = s.oracle_n_z;
    cfg.n_t = s.oracle_n_t > 0 ? s.oracle_n_t
                               : aligned_steps(model, static_cast<int>(std::ceil(model.T() / cfl_dt(grid, model))));
    const GridFunction oracle = dp_oracle(model, cfg);
    const GridFunction pde = sol.initial_value();
    double sup = 0.0;
    std::string csv = "y,pde,oracle\n";
    for (std::size_t j = 0; j < pde.size(); ++j) {
        sup = std::max(sup, std::abs(pde[j] - oracle[j]));
        csv += format_double(pde.y(static_cast<int>(j))) + ',' + format_double(pde[j]) + ',' + format_double(oracle[j]) + '\n';
    }
    ordered_json jo = header("oracle-check", s.model, grid);
    jo["oracle"] = {{"n_t", cfg.n_t}, {"n_z", cfg.n_z}, {"n_y", cfg.n_y}, {"y_max", cfg.y_max}};
    jo["sup_difference"] = sup;
    jo["within_5e-2"] = sup <= 5e-2;
    out.add("oracle.csv", csv);
    out.add_json("oracle.json", jo);
    log << "oracle-check: sup |pde - oracle| = " << format_double(sup) << "\n";
}

using Command = void (*)(const Settings&, Staging&, std::ostream&);

const std::vector<std::pair<std::string, Command>>& commands() {
    static const std::vector<std::pair<std::string, Command>> table = {
        {"solve", cmd_solve},
        {"simulate", cmd_simulate},
        {"verify-bounds", cmd_verify_bounds},
        {"sweep-frequency", cmd_sweep_frequency},
        {"sweep-distribution", cmd_sweep_distribution},
        {"sweep-discount", cmd_sweep_discount},
        {"compare-negotiation", cmd_compare_negotiation},
        {"oracle-check", cmd_oracle_check},
    };
    return table;
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& c : commands()) v.push_back(c.first);
        return v;
    }();
    return names;
}

int run(const RunManifest& manifest, std::ostream& log, std::ostream& err) {
    Staging out(manifest.out_dir);
    try {
        const auto it = std::find_if(commands().begin(), commands().end(),
                                     [&](const auto& c) { return c.first == manifest.command; });
        if (it == commands().end()) throw Error(ErrorCode::config, "unknown command: " + manifest.command);
        const Settings settings = resolve(manifest);
        it->second(settings, out, log);
        out.commit();
        return 0;
    } catch (const Error& e) {
        out.rollback();
        err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
        return is_user_error(e.code()) ? 1 : 2;
    } catch (const std::exception& e) {
        out.rollback();
        err << "error: internal: " << e.what() << "\n";
        return 2;
    }
}

int cli_main(int argc, char** argv) {
    CLI::App app{"Optimal lump-sum contract schedules: HJB solver, simulator and checks"};
    RunManifest m;
    std::string keys_help = "Override key=value (repeatable). Keys: ";
    bool first = true;
    for (const auto& [key, setter] : setters()) {
        keys_help += (first ? "" : ", ") + key;
        first = false;
    }
    app.add_option("command", m.command, "Command to run")->required()->check(CLI::IsMember(command_names()));
    app.add_option("--config", m.config_path, "Model config (JSON)")->check(CLI::ExistingFile);
    app.add_option("--out", m.out_dir, "Output directory")->capture_default_str();
    app.add_option("--set", m.overrides, keys_help);
    app.add_option("--seed", m.seed, "Simulation seed");
    app.add_option("--paths", m.paths, "Monte Carlo path count")->check(CLI::PositiveNumber);
    app.add_option("--ny", m.n_y, "Number of y cells")->check(CLI::PositiveNumber);
    app.add_option("--ymax", m.y_max, "Upper end of the y grid")->check(CLI::PositiveNumber);
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::string msg = e.what();
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        std::cerr << "error: " << to_string(ErrorCode::config) << ": " << msg << "\n";
        return 1;
    }
    return run(m, std::cout, std::cerr);
}

}  // namespace lumpsum
