#include "lumpsum/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace lumpsum {

using nlohmann::ordered_json;

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io, "cannot open for writing: " + path);
    out << content;
    out.close();
    if (!out) throw Error(ErrorCode::io, "write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io, "cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string grid_csv(const PeriodSolution& period) {
    std::string text = "t,y,v,z_star\n";
    text.reserve(text.size() + period.n_levels() * period.surface.front().size() * 80);
    for (std::size_t k = 0; k < period.n_levels(); ++k) {
        const std::string t = format_double(period.times[k]) + ',';
        const auto& v = period.surface[k];
        const auto& z = period.feedback[k];
        for (std::size_t j = 0; j < v.size(); ++j) {
            text += t;
            text += format_double(static_cast<double>(j) * period.dy);
            text += ',';
            text += format_double(v[j]);
            text += ',';
            text += format_double(z[j]);
            text += '\n';
        }
    }
    return text;
}

void emit_grid_csv(const PeriodSolution& period, const std::string& path) { write_text_file(path, grid_csv(period)); }

std::string payment_csv(const PaymentLayer& layer) {
    std::string text = "y,f,eta_star\n";
    for (std::size_t j = 0; j < layer.f.size(); ++j) {
        text += format_double(static_cast<double>(j) * layer.f.dy) + ',' + format_double(layer.f[j]) + ',' +
                format_double(layer.eta_star[j]) + '\n';
    }
    return text;
}

void emit_payment_csv(const PaymentLayer& layer, const std::string& path) {
    write_text_file(path, payment_csv(layer));
}

std::vector<GridCsvRow> read_grid_csv(const std::string& path) {
    std::istringstream in(read_text_file(path));
    std::string line;
    if (!std::getline(in, line) || line != "t,y,v,z_star") {
        throw Error(ErrorCode::io, "unexpected grid CSV header: " + path);
    }
    std::vector<GridCsvRow> rows;
    while (std::getline(in, line)) {
        GridCsvRow r;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &r.t, &r.y, &r.v, &r.z_star) != 4) {
            throw Error(ErrorCode::io, "malformed grid CSV row in " + path + ": " + line);
        }
        rows.push_back(r);
    }
    return rows;
}

ordered_json to_json(const NegotiationReport& r) {
    ordered_json j;
    j["setting"] = std::string(to_string(r.setting));
    j["V_p"] = r.V_p;
    j["Y0_star"] = r.Y0_star;
    j["rent"] = r.rent;
    if (!r.periods.empty()) {
        ordered_json periods = ordered_json::array();
        for (const auto& p : r.periods) {
            periods.push_back({{"index", p.index},
                               {"R_a_i", p.R_a},
                               {"constraint", p.constraint},
                               {"Y0_star", p.Y0_star},
                               {"value", p.value}});
        }
        j["periods"] = std::move(periods);
    }
    return j;
}

ordered_json to_json(const NegotiationComparison& c) {
    ordered_json j;
    j["initial"] = to_json(c.initial);
    j["renegotiation"] = to_json(c.renegotiation);
    j["difference"] = c.difference;
    j["tolerance"] = c.tolerance;
    j["winner"] = c.winner;
    return j;
}

ordered_json to_json(const SimReport& r) {
    ordered_json j;
    j["estimate"] = r.estimate;
    j["std_error"] = r.std_error;
    j["pde_value"] = r.pde_value;
    j["z_score"] = r.z_score;
    j["n_paths"] = r.n_paths;
    j["seed"] = r.seed;
    j["n_steps_per_period"] = r.n_steps_per_period;
    j["max_dt"] = r.max_dt;
    j["clamp_fraction"] = r.clamp_fraction;
    return j;
}

ordered_json to_json(const DeviationReport& r) {
    ordered_json j;
    j["label"] = r.label;
    j["J_star"] = r.J_star;
    j["J_dev"] = r.J_dev;
    j["se_star"] = r.se_star;
    j["se_dev"] = r.se_dev;
    j["se_diff"] = r.se_diff;
    j["n_paths"] = r.n_paths;
    j["seed"] = r.seed;
    return j;
}

ordered_json to_json(const Delta& d) { return {{"b", d.b}, {"c", d.c}, {"M", d.M}}; }

ordered_json to_json(const SupersolutionReport& r) {
    return {{"min_residual", r.min_residual}, {"t", r.t}, {"y", r.y}, {"a", r.a}};
}

ordered_json to_json(const SandwichReport& r) {
    return {{"lower_margin", r.lower_margin},
            {"lower_at", {r.lower_t, r.lower_y}},
            {"upper_margin", r.upper_margin},
            {"upper_at", {r.upper_t, r.upper_y}},
            {"nodes_checked", r.nodes_checked}};
}

ordered_json to_json(const ModelParams& p) {
    return {{"gamma", p.gamma}, {"k_a", p.k_a}, {"K", p.K}, {"R_a", p.R_a}, {"x0", p.x0}, {"schedule", p.schedule}};
}

ordered_json to_json(const GridSpec& g) {
    return {{"y_max", g.y_max},
            {"n_y", g.n_y},
            {"safety", g.safety},
            {"z_grid_points", g.z_grid_points},
            {"checkpoints", g.checkpoints}};
}

}  // namespace lumpsum
