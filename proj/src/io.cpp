#include "lambda_train/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace lambda_train {

namespace {

nlohmann::json shape_to_json(const PulseShape& shape) {
  switch (shape.kind) {
    case PulseShape::Kind::Gaussian:
      return {{"kind", "gaussian"}, {"width", shape.width}};
    case PulseShape::Kind::Rectangular:
      return {{"kind", "rect"}, {"width", shape.width}};
    case PulseShape::Kind::Sampled: {
      auto knots = nlohmann::json::array();
      for (const auto& [t, v] : shape.knots) knots.push_back({t, v});
      return {{"kind", "sampled"}, {"knots", knots}};
    }
  }
  return {};
}

PulseShape shape_from_json(const nlohmann::json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "gaussian") return PulseShape::gaussian(j.at("width").get<double>());
  if (kind == "rect" || kind == "rectangular") return PulseShape::rectangular(j.at("width").get<double>());
  if (kind == "sampled") {
    std::vector<std::pair<double, double>> knots;
    for (const auto& k : j.at("knots")) knots.emplace_back(k.at(0).get<double>(), k.at(1).get<double>());
    return PulseShape::sampled(std::move(knots));
  }
  throw std::invalid_argument("unknown pulse shape kind '" + kind + "'");
}

void dump_into(std::string& out, const nlohmann::json& j, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  if (j.is_object() || j.is_array()) {
    const bool object = j.is_object();
    if (j.empty()) {
      out += object ? "{}" : "[]";
      return;
    }
    out += object ? '{' : '[';
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) out += ',';
      first = false;
      newline(depth + 1);
      if (object) {
        out += nlohmann::json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
      }
      dump_into(out, *it, indent, depth + 1);
    }
    newline(depth);
    out += object ? '}' : ']';
  } else if (j.is_number_float() && std::isfinite(j.get<double>())) {
    char buf[32];
    const auto end = std::to_chars(buf, buf + sizeof buf, j.get<double>(), std::chars_format::general).ptr;
    std::string number(buf, end);
    if (number.find_first_of(".e") == std::string::npos) number += ".0";
    out += number;
  } else {
    out += j.dump();
  }
}

}  // namespace

std::string dump_json(const nlohmann::json& j, int indent) {
  std::string out;
  dump_into(out, j, indent, 0);
  return out;
}

double round_decimals(double x, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(x * scale) / scale;
}

nlohmann::json train_to_json(const TrainSpec& train) {
  auto pairs = nlohmann::json::array();
  for (const auto& p : train.pairs) {
    pairs.push_back({{"theta", round_decimals(p.theta, kAngleDecimals)},
                     {"area", p.area},
                     {"center", p.center},
                     {"shape", shape_to_json(p.shape)}});
  }
  return {{"pairs", pairs},
          {"gamma", train.gamma},
          {"spacing", train.spacing},
          {"grid", {{"t_start", train.grid.t_start}, {"t_end", train.grid.t_end}, {"dt", train.grid.dt}}}};
}

TrainSpec train_from_json(const nlohmann::json& j) {
  TrainSpec train;
  try {
    for (const auto& p : j.at("pairs")) {
      PulsePair pair;
      pair.theta = p.at("theta").get<double>();
      pair.area = p.at("area").get<double>();
      pair.center = p.at("center").get<double>();
      pair.shape = shape_from_json(p.at("shape"));
      train.pairs.push_back(std::move(pair));
    }
    train.gamma = j.value("gamma", 0.0);
    const auto& g = j.at("grid");
    train.grid.t_start = g.at("t_start").get<double>();
    train.grid.t_end = g.at("t_end").get<double>();
    train.grid.dt = g.at("dt").get<double>();
    if (j.contains("spacing")) {
      train.spacing = j.at("spacing").get<double>();
    } else if (train.pairs.size() > 1) {
      train.spacing = train.pairs[1].center - train.pairs[0].center;
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed train description: ") + e.what());
  }
  train.validate();
  return train;
}

void write_csv(std::ostream& os, const TimeSeries<double>& series) {
  os << kCsvHeader << '\n';
  char line[256];
  for (const auto& r : series.rows) {
    std::snprintf(line, sizeof line, "%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n", r.t, r.omega_p, r.omega_s,
                  r.populations(0), r.populations(1), r.populations(2), r.norm2);
    os << line;
  }
}

nlohmann::json summary_json(const TimeSeries<double>& series, const TrainSpec& train) {
  const auto maxima = extract_p2_max(series, train);
  const Populationsd final_p = state_populations(series.final_state);
  auto per_pair = nlohmann::json::array();
  for (double m : maxima.per_pair) per_pair.push_back(round_decimals(m, kPopulationDecimals));
  return {{"pairs", train.pairs.size()},
          {"gamma", train.gamma},
          {"final_populations",
           {{"P1", round_decimals(final_p(0), kPopulationDecimals)},
            {"P2", round_decimals(final_p(1), kPopulationDecimals)},
            {"P3", round_decimals(final_p(2), kPopulationDecimals)}}},
          {"p2_max", round_decimals(maxima.value, kPopulationDecimals)},
          {"per_pair_p2_max", per_pair},
          {"lost_population", round_decimals(1.0 - final_p.sum(), kPopulationDecimals)}};
}

void write_gnuplot(std::ostream& os, const std::string& csv_path, const std::string& title) {
  os << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set multiplot layout 2,1 title '" << title << "'\n"
     << "set ylabel 'Rabi frequency (1/T)'\n"
     << "unset xlabel\n"
     << "plot '" << csv_path << "' using 1:2 with lines lw 2 title 'pump', \\\n"
     << "     '' using 1:3 with lines lw 2 dt 2 title 'Stokes'\n"
     << "set xlabel 'time (T)'\n"
     << "set ylabel 'population'\n"
     << "set yrange [0:1.05]\n"
     << "plot '" << csv_path << "' using 1:4 with lines lw 2 title 'P1', \\\n"
     << "     '' using 1:5 with lines lw 2 title 'P2', \\\n"
     << "     '' using 1:6 with lines lw 2 title 'P3'\n"
     << "unset multiplot\n";
}

}  // namespace lambda_train
