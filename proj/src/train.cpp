#include "lambda_train/train.hpp"

#include "lambda_train/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace lambda_train {

double calibrate_amplitude(const PulseShape& shape, double area) {
  if (!std::isfinite(area) || area <= 0.0) throw std::invalid_argument("rms pulse area must be positive");
  shape.validate();
  const double integral = shape.integral();
  if (!(integral > 0.0)) throw std::invalid_argument("pulse shape has zero integral");
  return area / integral;
}

TrainSpec build_train(int n, const PulseShape& shape, double spacing, double area,
                      std::optional<std::vector<double>> angles) {
  if (n < 1) throw std::invalid_argument("number of pulse pairs must be at least 1");
  if (!std::isfinite(area) || area <= 0.0) throw std::invalid_argument("rms pulse area must be positive");
  shape.validate();
  const double width = shape.characteristic_width();
  if (!std::isfinite(spacing) || spacing <= 0.0) throw std::invalid_argument("pair spacing must be positive");
  if (n > 1 && spacing < kMinSpacingWidths * width) {
    throw OverlapGuardError("pair spacing " + std::to_string(spacing) + " is below the minimum of " +
                            std::to_string(kMinSpacingWidths) + " pulse widths (" +
                            std::to_string(kMinSpacingWidths * width) + ")");
  }
  std::vector<double> thetas = angles ? std::move(*angles) : mixing_angles(n);
  if (thetas.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("angle list length must equal the number of pairs");

  TrainSpec train;
  train.spacing = spacing;
  train.gamma = 0.0;
  for (int k = 0; k < n; ++k) {
    PulsePair p;
    p.theta = thetas[k];
    p.area = area;
    p.center = k * spacing;
    p.shape = shape;
    train.pairs.push_back(std::move(p));
  }
  train.grid.t_start = train.pairs.front().center - kGridMarginWidths * width;
  train.grid.t_end = train.pairs.back().center + kGridMarginWidths * width;
  train.grid.dt = width / kDefaultStepsPerWidth;
  train.validate();
  return train;
}

TrainEnvelope::TrainEnvelope(const TrainSpec& train) {
  pairs_.reserve(train.pairs.size());
  for (const auto& p : train.pairs) {
    const double omega = calibrate_amplitude(p.shape, p.area);
    pairs_.push_back({omega * std::sin(p.theta), omega * std::cos(p.theta), p.center, p.shape});
    for (double b : p.shape.breakpoints()) breakpoints_.push_back(p.center + b);
  }
  std::sort(breakpoints_.begin(), breakpoints_.end());
  breakpoints_.erase(std::unique(breakpoints_.begin(), breakpoints_.end()), breakpoints_.end());
}

FieldPair TrainEnvelope::operator()(double t) const {
  FieldPair out;
  for (const auto& term : pairs_) {
    const double f = term.shape(t - term.center);
    out.pump += term.pump_peak * f;
    out.stokes += term.stokes_peak * f;
  }
  return out;
}

FieldPair TrainEnvelope::pair_fields(std::size_t k, double t) const {
  const auto& term = pairs_.at(k);
  const double f = term.shape(t - term.center);
  return {term.pump_peak * f, term.stokes_peak * f};
}

double TrainEnvelope::rms(double t) const {
  const auto [p, s] = (*this)(t);
  return std::hypot(p, s);
}

double integrate_piecewise(const std::function<double(double)>& f, double a, double b,
                           std::span<const double> breaks, double step) {
  if (!(b > a)) return 0.0;
  std::vector<double> nodes{a};
  for (double x : breaks)
    if (x > a && x < b) nodes.push_back(x);
  nodes.push_back(b);
  std::sort(nodes.begin(), nodes.end());

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double lo = nodes[i];
    const double hi = nodes[i + 1];
    if (!(hi > lo)) continue;
    auto panels = static_cast<long>(std::ceil((hi - lo) / step - 1e-9));
    panels = std::max<long>(2, panels + (panels % 2));
    const double h = (hi - lo) / static_cast<double>(panels);
    double sum = f(std::nextafter(lo, hi)) + f(std::nextafter(hi, lo));
    for (long j = 1; j < panels; ++j) sum += (j % 2 ? 4.0 : 2.0) * f(lo + static_cast<double>(j) * h);
    total += sum * h / 3.0;
  }
  return total;
}

double measure_rms_area(const TrainSpec& train, std::size_t pair_index) {
  if (pair_index >= train.pairs.size()) throw std::out_of_range("pair index out of range");
  const TrainEnvelope env(train);
  const auto edges = pair_window_edges(train);
  return integrate_piecewise([&](double t) { return env.rms(t); }, edges[pair_index], edges[pair_index + 1],
                             env.breakpoints(), train.grid.dt);
}

PairAreas measure_pair_areas(const TrainSpec& train, std::size_t pair_index) {
  if (pair_index >= train.pairs.size()) throw std::out_of_range("pair index out of range");
  const TrainEnvelope env(train);
  const auto& g = train.grid;
  PairAreas out;
  out.pump = integrate_piecewise([&](double t) { return env.pair_fields(pair_index, t).pump; }, g.t_start,
                                 g.t_end, env.breakpoints(), g.dt);
  out.stokes = integrate_piecewise([&](double t) { return env.pair_fields(pair_index, t).stokes; }, g.t_start,
                                   g.t_end, env.breakpoints(), g.dt);
  return out;
}

double pair_area_fraction(const TrainSpec& train, std::size_t pair_index, double t) {
  const auto& p = train.pairs.at(pair_index);
  return p.shape.accumulated_fraction(t - p.center);
}

std::vector<double> train_angles(const TrainSpec& train) {
  std::vector<double> out;
  out.reserve(train.pairs.size());
  for (const auto& p : train.pairs) out.push_back(p.theta);
  return out;
}

TrainSpec reverse_angles(const TrainSpec& train) {
  TrainSpec out = train;
  const auto n = train.pairs.size();
  for (std::size_t k = 0; k < n; ++k) out.pairs[k].theta = train.pairs[n - 1 - k].theta;
  return out;
}

TrainSpec swap_fields(const TrainSpec& train) {
  TrainSpec out = train;
  for (auto& p : out.pairs) p.theta = std::numbers::pi / 2 - p.theta;
  return out;
}

TrainSpec time_reverse(const TrainSpec& train) {
  TrainSpec out = train;
  const double pivot = train.grid.t_start + train.grid.t_end;
  const auto n = train.pairs.size();
  for (std::size_t k = 0; k < n; ++k) {
    PulsePair p = train.pairs[n - 1 - k];
    p.center = pivot - p.center;
    if (p.shape.kind == PulseShape::Kind::Sampled) {
      std::reverse(p.shape.knots.begin(), p.shape.knots.end());
      for (auto& knot : p.shape.knots) knot.first = -knot.first;
    }
    out.pairs[k] = std::move(p);
  }
  return out;
}

}  // namespace lambda_train
