// Fixed-step RK4 integration of i d/dt c = H(t) c for the (possibly lossy)
// Lambda-system Hamiltonian.
#pragma once

#include "lambda_train/train.hpp"
#include "lambda_train/types.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace lambda_train {

/// Raised when the time step cannot resolve the narrowest pulse.
class GridTooCoarseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Narrowest pulse width divided by this is the largest accepted step.
inline constexpr double kMinStepsPerWidth = 100.0;

struct IntegratorConfig {
  enum class Method { RK4Fixed };

  Method method = Method::RK4Fixed;
  double dt = 1.0 / kDefaultStepsPerWidth;
  int record_stride = 1;

  void validate() const {
    if (!std::isfinite(dt) || dt <= 0.0) throw std::invalid_argument("integrator step must be positive");
    if (record_stride < 1) throw std::invalid_argument("record stride must be at least 1");
  }
};

/// H = 1/2 [[0, Wp, 0], [Wp, -i G, Ws], [0, Ws, 0]] with hbar = 1.
template <typename Scalar = double>
Propagator3<Scalar> hamiltonian_at(Scalar omega_p, Scalar omega_s, Scalar gamma) {
  using std::isfinite;
  if (!isfinite(omega_p) || !isfinite(omega_s) || omega_p < Scalar(0) || omega_s < Scalar(0))
    throw std::invalid_argument("Rabi frequencies must be finite and non-negative");
  if (!isfinite(gamma) || gamma < Scalar(0)) throw std::invalid_argument("loss rate must be non-negative");
  const Scalar half(0.5);
  Propagator3<Scalar> h = Propagator3<Scalar>::Zero();
  h(0, 1) = h(1, 0) = half * omega_p;
  h(1, 2) = h(2, 1) = half * omega_s;
  h(1, 1) = Complex<Scalar>(0, -half * gamma);
  return h;
}

template <typename Scalar = double>
Propagator3<Scalar> hamiltonian_at(const TrainEnvelope& envelope, double t, Scalar gamma) {
  const auto f = envelope(t);
  return hamiltonian_at<Scalar>(Scalar(f.pump), Scalar(f.stokes), gamma);
}

namespace detail {

// dc/dt = -i H c, exploiting the sparsity of H.
template <typename Scalar>
StateVector<Scalar> derivative(const FieldPair& f, Scalar gamma, const StateVector<Scalar>& c) {
  const Scalar wp = Scalar(f.pump) / 2;
  const Scalar ws = Scalar(f.stokes) / 2;
  const Complex<Scalar> mi(0, -1);
  StateVector<Scalar> d;
  d(0) = mi * (wp * c(1));
  d(1) = mi * (wp * c(0) + ws * c(2)) - (gamma / 2) * c(1);
  d(2) = mi * (ws * c(1));
  return d;
}

// One classical RK4 step over [a, b]. The end stages use one-sided limits so
// that a discontinuity of the envelope sitting on a step edge is treated as
// lying outside the step.
template <typename Scalar>
void rk4_step(const TrainEnvelope& env, Scalar gamma, double a, double b, StateVector<Scalar>& c) {
  const Scalar h = Scalar(b) - Scalar(a);
  const FieldPair f_lo = env(std::nextafter(a, b));
  const FieldPair f_mid = env(a + 0.5 * (b - a));
  const FieldPair f_hi = env(std::nextafter(b, a));
  const StateVector<Scalar> k1 = derivative(f_lo, gamma, c);
  const StateVector<Scalar> k2 = derivative(f_mid, gamma, (c + (h / 2) * k1).eval());
  const StateVector<Scalar> k3 = derivative(f_mid, gamma, (c + (h / 2) * k2).eval());
  const StateVector<Scalar> k4 = derivative(f_hi, gamma, (c + h * k3).eval());
  c += (h / 6) * (k1 + Scalar(2) * k2 + Scalar(2) * k3 + k4);
}

template <typename Scalar>
Sample<Scalar> make_sample(const TrainEnvelope& env, double t, const StateVector<Scalar>& c) {
  const auto f = env(t);
  return {Scalar(t), Scalar(f.pump), Scalar(f.stokes), state_populations(c), c.squaredNorm()};
}

}  // namespace detail

/// Integrates the train over its grid window with step `config.dt`, recording
/// every `record_stride` steps plus the final time. Envelope discontinuities
/// inside a step split it into sub-steps.
template <typename Scalar = double>
TimeSeries<Scalar> evolve(const TrainSpec& train, const IntegratorConfig& config,
                          const StateVector<Scalar>& initial = ground_state<Scalar>()) {
  train.validate();
  config.validate();
  using std::abs;
  if (abs(initial.squaredNorm() - Scalar(1)) > Scalar(kAnalyticNormTolerance))
    throw std::invalid_argument("initial state must be normalized");
  if (!train.pairs.empty()) {
    const double limit = train.narrowest_width() / kMinStepsPerWidth;
    if (config.dt > limit)
      throw GridTooCoarseError("time step " + std::to_string(config.dt) + " exceeds narrowest width / " +
                               std::to_string(static_cast<int>(kMinStepsPerWidth)) + " = " +
                               std::to_string(limit));
  }

  const TrainEnvelope env(train);
  const Scalar gamma(train.gamma);
  const double t0 = train.grid.t_start;
  const double t1 = train.grid.t_end;
  const auto steps = static_cast<long>(std::ceil((t1 - t0) / config.dt - 1e-9));
  const auto& breaks = env.breakpoints();
  auto next_break = std::upper_bound(breaks.begin(), breaks.end(), t0);

  TimeSeries<Scalar> series;
  series.rows.reserve(static_cast<std::size_t>(steps / config.record_stride + 2));
  StateVector<Scalar> c = initial;
  series.rows.push_back(detail::make_sample(env, t0, c));

  for (long i = 0; i < steps; ++i) {
    const double a = t0 + static_cast<double>(i) * config.dt;
    const double b = (i + 1 == steps) ? t1 : t0 + static_cast<double>(i + 1) * config.dt;
    double lo = a;
    while (next_break != breaks.end() && *next_break < b) {
      if (*next_break > lo) {
        detail::rk4_step(env, gamma, lo, *next_break, c);
        lo = *next_break;
      }
      ++next_break;
    }
    detail::rk4_step(env, gamma, lo, b, c);
    if ((i + 1) % config.record_stride == 0 || i + 1 == steps) series.rows.push_back(detail::make_sample(env, b, c));
  }
  series.final_state = c;
  return series;
}

struct P2Maxima {
  double value = 0.0;
  std::vector<double> per_pair;
  /// Time of each per-pair maximum.
  std::vector<double> per_pair_time;
};

/// Global and per-pair maxima of P2, with pair windows split at the midpoints
/// between consecutive centers.
template <typename Scalar>
P2Maxima extract_p2_max(const TimeSeries<Scalar>& series, const TrainSpec& train) {
  if (series.rows.empty()) throw std::invalid_argument("time series is empty");
  P2Maxima out;
  const auto edges = pair_window_edges(train);
  const std::size_t windows = std::max<std::size_t>(1, train.pairs.size());
  out.per_pair.assign(windows, 0.0);
  out.per_pair_time.assign(windows, static_cast<double>(series.rows.front().t));
  std::size_t w = 0;
  for (const auto& row : series.rows) {
    const auto t = static_cast<double>(row.t);
    const auto p2 = static_cast<double>(row.populations(1));
    while (w + 1 < windows && t >= edges[w + 1]) ++w;
    if (p2 > out.per_pair[w]) {
      out.per_pair[w] = p2;
      out.per_pair_time[w] = t;
    }
    out.value = std::max(out.value, p2);
  }
  return out;
}

}  // namespace lambda_train
