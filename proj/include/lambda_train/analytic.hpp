// Closed-form dynamics of the lossless, doubly resonant Lambda system when the
// pump and Stokes fields of a pair share one time dependence.
#pragma once

#include "lambda_train/types.hpp"

#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

namespace lambda_train {

namespace detail {

template <typename Scalar>
void check_pair_arguments(Scalar theta, Scalar area) {
  using std::isfinite;
  if (!isfinite(theta) || !isfinite(area))
    throw std::invalid_argument("propagator arguments must be finite");
  if (theta < Scalar(0) || theta > std::numbers::pi_v<Scalar> / 2)
    throw std::invalid_argument("mixing angle must lie in [0, pi/2]");
  if (area < Scalar(0)) throw std::invalid_argument("rms pulse area must be non-negative");
}

inline void check_pair_count(int n) {
  if (n < 1) throw std::invalid_argument("number of pulse pairs must be at least 1");
}

}  // namespace detail

/// Exact evolution operator of one coincident pulse pair with mixing angle
/// `theta` and rms area `area`.
template <typename Scalar = double>
Propagator3<Scalar> single_pair_propagator(Scalar theta, Scalar area) {
  detail::check_pair_arguments(theta, area);
  using std::cos;
  using std::sin;
  const Scalar s = sin(theta);
  const Scalar c = cos(theta);
  const Scalar half = sin(area / 2);
  const Scalar quarter = sin(area / 4);
  const Scalar q2 = quarter * quarter;
  const Complex<Scalar> i(0, 1);

  Propagator3<Scalar> u;
  u(0, 0) = Scalar(1) - 2 * s * s * q2;
  u(0, 1) = -i * s * half;
  u(0, 2) = -sin(2 * theta) * q2;
  u(1, 0) = u(0, 1);
  u(1, 1) = cos(area / 2);
  u(1, 2) = -i * c * half;
  u(2, 0) = u(0, 2);
  u(2, 1) = u(1, 2);
  u(2, 2) = Scalar(1) - 2 * c * c * q2;
  return u;
}

/// Final populations of a single pair for an atom starting in |1>.
template <typename Scalar = double>
Populations<Scalar> single_pair_final_populations(Scalar theta, Scalar area) {
  detail::check_pair_arguments(theta, area);
  using std::sin;
  const Scalar s = sin(theta);
  const Scalar q = sin(area / 4);
  const Scalar h = sin(area / 2);
  const Scalar d = sin(2 * theta);
  const Scalar p1 = Scalar(1) - 2 * s * s * q * q;
  return Populations<Scalar>(p1 * p1, s * s * h * h, d * d * q * q * q * q);
}

/// theta_k = (2k - 1) pi / (4N), k = 1..N. Computed from the nearer end so the
/// mirror relation theta_{N+1-k} = pi/2 - theta_k holds to rounding.
template <typename Scalar = double>
std::vector<Scalar> mixing_angles(int n) {
  detail::check_pair_count(n);
  const Scalar pi = std::numbers::pi_v<Scalar>;
  std::vector<Scalar> angles(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) {
    angles[k - 1] = Scalar(2 * k - 1) * pi / Scalar(4 * n);
  }
  for (int k = 1; 2 * k <= n; ++k) {
    angles[n - k] = pi / 2 - angles[k - 1];
  }
  if (n % 2 == 1) angles[n / 2] = pi / 4;
  return angles;
}

/// U(theta_N) ... U(theta_1) for a train of pairs sharing one rms area.
template <typename Scalar = double>
Propagator3<Scalar> cascade(std::span<const Scalar> angles, Scalar area) {
  if (angles.empty()) throw std::invalid_argument("cascade needs at least one angle");
  Propagator3<Scalar> u = Propagator3<Scalar>::Identity();
  for (const Scalar theta : angles) u = (single_pair_propagator(theta, area) * u).eval();
  return u;
}

template <typename Scalar>
Propagator3<Scalar> cascade(const std::vector<Scalar>& angles, Scalar area) {
  return cascade(std::span<const Scalar>(angles), area);
}

/// States after each full pair: element k is U(theta_{k+1}) ... U(theta_1) * initial.
template <typename Scalar = double>
std::vector<StateVector<Scalar>> partial_cascade_states(std::span<const Scalar> angles, Scalar area,
                                                        const StateVector<Scalar>& initial = ground_state<Scalar>()) {
  std::vector<StateVector<Scalar>> states;
  states.reserve(angles.size());
  StateVector<Scalar> s = initial;
  for (const Scalar theta : angles) {
    s = (single_pair_propagator(theta, area) * s).eval();
    states.push_back(s);
  }
  return states;
}

/// Peak middle-state population of a train built from the optimal schedule: sin^2(pi / 4N).
template <typename Scalar = double>
Scalar p2_max_bound(int n) {
  detail::check_pair_count(n);
  using std::sin;
  const Scalar x = sin(std::numbers::pi_v<Scalar> / Scalar(4 * n));
  return x * x;
}

}  // namespace lambda_train
