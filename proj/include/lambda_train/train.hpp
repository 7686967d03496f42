// Construction of concrete pump/Stokes envelopes for a train of coincident pairs.
#pragma once

#include "lambda_train/types.hpp"

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace lambda_train {

/// Raised when neighbouring pairs are closer than the overlap guard allows.
class OverlapGuardError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kDefaultSpacingWidths = 6.0;
inline constexpr double kMinSpacingWidths = 4.0;
inline constexpr double kGridMarginWidths = 5.0;
inline constexpr double kDefaultStepsPerWidth = 2000.0;

/// Peak rms amplitude Omega such that Omega * integral(f) == area.
double calibrate_amplitude(const PulseShape& shape, double area);

/// Equally spaced train with centers (k - 1) * spacing. Angles default to the
/// optimal schedule for n pairs.
TrainSpec build_train(int n, const PulseShape& shape, double spacing, double area,
                      std::optional<std::vector<double>> angles = std::nullopt);

struct FieldPair {
  double pump = 0.0;
  double stokes = 0.0;
};

/// Evaluates Omega_p(t), Omega_s(t) for a whole train.
class TrainEnvelope {
 public:
  explicit TrainEnvelope(const TrainSpec& train);

  FieldPair operator()(double t) const;
  /// Fields of pair k alone.
  FieldPair pair_fields(std::size_t k, double t) const;
  /// sqrt(Omega_p^2 + Omega_s^2) of the whole train.
  double rms(double t) const;

  /// Absolute times of envelope discontinuities, sorted and unique.
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  std::size_t size() const { return pairs_.size(); }

 private:
  struct Term {
    double pump_peak;
    double stokes_peak;
    double center;
    PulseShape shape;
  };
  std::vector<Term> pairs_;
  std::vector<double> breakpoints_;
};

/// Composite Simpson over [a, b], split at `breaks` so each panel is smooth.
/// Panel endpoints are evaluated as one-sided limits.
double integrate_piecewise(const std::function<double(double)>& f, double a, double b,
                           std::span<const double> breaks, double step);

/// rms area of pair k over its midpoint-bounded window of the full train.
double measure_rms_area(const TrainSpec& train, std::size_t pair_index);

struct PairAreas {
  double pump = 0.0;
  double stokes = 0.0;
};

/// Pump and Stokes areas of pair k taken in isolation over the whole grid.
PairAreas measure_pair_areas(const TrainSpec& train, std::size_t pair_index);

/// Accumulated fraction of pair k's rms area at time t.
double pair_area_fraction(const TrainSpec& train, std::size_t pair_index, double t);

std::vector<double> train_angles(const TrainSpec& train);

/// Pair order reversed in angle: pair k gets theta_{N+1-k}.
TrainSpec reverse_angles(const TrainSpec& train);
/// Pump and Stokes exchanged in every pair: theta -> pi/2 - theta.
TrainSpec swap_fields(const TrainSpec& train);
/// Mirror image in time about the grid midpoint.
TrainSpec time_reverse(const TrainSpec& train);

}  // namespace lambda_train
