// File formats: JSON train descriptions, CSV time series, JSON run summaries
// and gnuplot scripts.
#pragma once

#include "lambda_train/integrator.hpp"
#include "lambda_train/types.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace lambda_train {

inline constexpr int kAngleDecimals = 7;
inline constexpr int kPopulationDecimals = 6;

double round_decimals(double x, int decimals);

/// Like json::dump(indent), but floats use the shortest round-trip form, so a
/// value rounded to 6 decimals prints with at most 6.
std::string dump_json(const nlohmann::json& j, int indent = 2);

/// {"pairs": [{"theta", "area", "center", "shape": {"kind", "width"|"knots"}}],
///  "gamma", "spacing", "grid": {"t_start", "t_end", "dt"}}
nlohmann::json train_to_json(const TrainSpec& train);
/// Throws std::invalid_argument on a malformed or invalid description.
TrainSpec train_from_json(const nlohmann::json& j);

inline constexpr const char* kCsvHeader = "t,omega_p,omega_s,P1,P2,P3,norm2";

void write_csv(std::ostream& os, const TimeSeries<double>& series);

/// Final populations, lost population, global and per-pair P2 maxima.
nlohmann::json summary_json(const TimeSeries<double>& series, const TrainSpec& train);

/// Two stacked panels: envelopes on top, populations below.
void write_gnuplot(std::ostream& os, const std::string& csv_path, const std::string& title);

}  // namespace lambda_train
