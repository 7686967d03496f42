#include "lambda_train/types.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace lambda_train {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

// Exact integral of the piecewise-linear interpolant from the first knot up to x.
double sampled_integral_to(const std::vector<std::pair<double, double>>& knots, double x) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const auto [t0, v0] = knots[i];
    const auto [t1, v1] = knots[i + 1];
    if (x <= t0) break;
    const double hi = std::min(x, t1);
    const double slope = (v1 - v0) / (t1 - t0);
    const double v_hi = v0 + slope * (hi - t0);
    sum += 0.5 * (v0 + v_hi) * (hi - t0);
  }
  return sum;
}

}  // namespace

PulseShape PulseShape::gaussian(double width) {
  PulseShape s;
  s.kind = Kind::Gaussian;
  s.width = width;
  s.validate();
  return s;
}

PulseShape PulseShape::rectangular(double duration) {
  PulseShape s;
  s.kind = Kind::Rectangular;
  s.width = duration;
  s.validate();
  return s;
}

PulseShape PulseShape::sampled(std::vector<std::pair<double, double>> knots) {
  PulseShape s;
  s.kind = Kind::Sampled;
  s.knots = std::move(knots);
  s.width = s.knots.empty() ? 0.0 : s.knots.back().first - s.knots.front().first;
  s.validate();
  return s;
}

double PulseShape::operator()(double offset) const {
  switch (kind) {
    case Kind::Gaussian: {
      const double x = offset / width;
      return std::exp(-x * x);
    }
    case Kind::Rectangular:
      return std::abs(offset) <= 0.5 * width ? 1.0 : 0.0;
    case Kind::Sampled: {
      if (offset < knots.front().first || offset > knots.back().first) return 0.0;
      auto hi = std::upper_bound(knots.begin(), knots.end(), offset,
                                 [](double x, const auto& k) { return x < k.first; });
      if (hi == knots.end()) return knots.back().second;
      auto lo = std::prev(hi);
      const double w = (offset - lo->first) / (hi->first - lo->first);
      return lo->second + w * (hi->second - lo->second);
    }
  }
  return 0.0;
}

double PulseShape::integral() const {
  switch (kind) {
    case Kind::Gaussian:
      return std::sqrt(std::numbers::pi) * width;
    case Kind::Rectangular:
      return width;
    case Kind::Sampled:
      return sampled_integral_to(knots, knots.back().first);
  }
  return 0.0;
}

double PulseShape::accumulated_fraction(double offset) const {
  switch (kind) {
    case Kind::Gaussian:
      return 0.5 * (1.0 + std::erf(offset / width));
    case Kind::Rectangular:
      return std::clamp((offset + 0.5 * width) / width, 0.0, 1.0);
    case Kind::Sampled:
      return sampled_integral_to(knots, offset) / integral();
  }
  return 0.0;
}

std::vector<double> PulseShape::breakpoints() const {
  switch (kind) {
    case Kind::Gaussian:
      return {};
    case Kind::Rectangular:
      return {-0.5 * width, 0.5 * width};
    case Kind::Sampled: {
      std::vector<double> out;
      out.reserve(knots.size());
      for (const auto& k : knots) out.push_back(k.first);
      return out;
    }
  }
  return {};
}

double PulseShape::characteristic_width() const { return width; }

void PulseShape::validate() const {
  switch (kind) {
    case Kind::Gaussian:
    case Kind::Rectangular:
      require(std::isfinite(width) && width > 0.0, "pulse width must be finite and positive");
      break;
    case Kind::Sampled:
      require(knots.size() >= 2, "sampled pulse shape needs at least two knots");
      for (std::size_t i = 0; i < knots.size(); ++i) {
        require(std::isfinite(knots[i].first) && std::isfinite(knots[i].second),
                "sampled pulse knots must be finite");
        require(knots[i].second >= 0.0, "sampled pulse values must be non-negative");
        if (i > 0) require(knots[i].first > knots[i - 1].first, "sampled pulse knot times must increase");
      }
      break;
  }
}

bool operator==(const PulseShape& a, const PulseShape& b) {
  return a.kind == b.kind && a.width == b.width && a.knots == b.knots;
}

void PulsePair::validate() const {
  require(std::isfinite(theta) && theta >= 0.0 && theta <= std::numbers::pi / 2,
          "mixing angle must lie in [0, pi/2]");
  require(std::isfinite(area) && area > 0.0, "rms pulse area must be positive");
  require(std::isfinite(center), "pair center must be finite");
  shape.validate();
}

void SimulationGrid::validate() const {
  require(std::isfinite(t_start) && std::isfinite(t_end) && t_start < t_end,
          "grid needs t_start < t_end");
  require(std::isfinite(dt) && dt > 0.0, "grid step must be positive");
  require((t_end - t_start) / dt >= 100.0, "grid must contain at least 100 steps");
}

void TrainSpec::validate() const {
  require(std::isfinite(gamma) && gamma >= 0.0, "loss rate must be non-negative");
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    pairs[k].validate();
    if (k > 0) require(pairs[k].center > pairs[k - 1].center, "pair centers must be strictly increasing");
  }
  grid.validate();
}

double TrainSpec::narrowest_width() const {
  double w = 0.0;
  for (const auto& p : pairs) {
    const double pw = p.shape.characteristic_width();
    w = (w == 0.0) ? pw : std::min(w, pw);
  }
  return w;
}

std::vector<double> pair_window_edges(const TrainSpec& train) {
  std::vector<double> edges{train.grid.t_start};
  for (std::size_t k = 0; k + 1 < train.pairs.size(); ++k)
    edges.push_back(0.5 * (train.pairs[k].center + train.pairs[k + 1].center));
  edges.push_back(train.grid.t_end);
  return edges;
}

}  // namespace lambda_train
