#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "lumpsum/bounds.hpp"
#include "lumpsum/contract_pipeline.hpp"
#include "lumpsum/simulate.hpp"

namespace lumpsum {

/// %.17g: enough digits for a double to round-trip exactly.
std::string format_double(double x);

/// Writes `content` to `path`, throwing Error(io) naming the path on failure.
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

/// CSV with header t,y,v,z_star, rows ordered by t then y.
std::string grid_csv(const PeriodSolution& period);
void emit_grid_csv(const PeriodSolution& period, const std::string& path);

/// CSV with header y,f,eta_star.
std::string payment_csv(const PaymentLayer& layer);
void emit_payment_csv(const PaymentLayer& layer, const std::string& path);

struct GridCsvRow {
    double t = 0.0;
    double y = 0.0;
    double v = 0.0;
    double z_star = 0.0;
};
std::vector<GridCsvRow> read_grid_csv(const std::string& path);

nlohmann::ordered_json to_json(const NegotiationReport& r);
nlohmann::ordered_json to_json(const NegotiationComparison& c);
nlohmann::ordered_json to_json(const SimReport& r);
nlohmann::ordered_json to_json(const DeviationReport& r);
nlohmann::ordered_json to_json(const Delta& d);
nlohmann::ordered_json to_json(const SupersolutionReport& r);
nlohmann::ordered_json to_json(const SandwichReport& r);
nlohmann::ordered_json to_json(const ModelParams& p);
nlohmann::ordered_json to_json(const GridSpec& g);

}  // namespace lumpsum
