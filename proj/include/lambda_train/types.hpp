// Core value types for a resonant three-state Lambda system driven by trains
// of coincident pump/Stokes pulse pairs.
//
// Units: hbar = 1, times in units of a reference pulse width T, Rabi
// frequencies and loss rates in units of 1/T.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace lambda_train {

template <typename Scalar>
using Complex = std::complex<Scalar>;

/// Amplitudes (c1, c2, c3) of states |1>, |2>, |3>.
template <typename Scalar>
using StateVector = Eigen::Matrix<Complex<Scalar>, 3, 1>;

/// Dense 3x3 evolution operator acting on a StateVector.
template <typename Scalar>
using Propagator3 = Eigen::Matrix<Complex<Scalar>, 3, 3>;

template <typename Scalar>
using Populations = Eigen::Matrix<Scalar, 3, 1>;

using Complexd = Complex<double>;
using StateVectord = StateVector<double>;
using Propagator3d = Propagator3<double>;
using Populationsd = Populations<double>;

/// Analytic results are exact algebra; integrated results carry truncation error.
inline constexpr double kAnalyticNormTolerance = 1e-9;
inline constexpr double kIntegratedNormTolerance = 1e-6;

template <typename Scalar = double>
StateVector<Scalar> ground_state() {
  StateVector<Scalar> s;
  s << Complex<Scalar>(1), Complex<Scalar>(0), Complex<Scalar>(0);
  return s;
}

/// P_n = |c_n|^2. Accepts any 3-vector expression, e.g. `state_populations(U * s)`.
template <typename Derived>
auto state_populations(const Eigen::MatrixBase<Derived>& s) {
  static_assert(Derived::SizeAtCompileTime == 3 || Derived::SizeAtCompileTime == Eigen::Dynamic,
                "state_populations expects a three-component state");
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  Populations<Real> p = s.cwiseAbs2();
  return p;
}

template <typename Derived>
auto norm2(const Eigen::MatrixBase<Derived>& s) {
  return s.squaredNorm();
}

/// Largest elementwise deviation of U^dagger U from the identity.
template <typename Derived>
auto unitarity_defect(const Eigen::MatrixBase<Derived>& u) {
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  const auto gram = (u.adjoint() * u).eval();
  const auto id = decltype(gram)::Identity(gram.rows(), gram.cols());
  return static_cast<Real>((gram - id).cwiseAbs().maxCoeff());
}

/// Shared time dependence f(t) of the pump and Stokes fields of one pair.
///
/// Gaussian: f = exp(-(t - tau)^2 / T^2) with `width` = T.
/// Rectangular: f = 1 on [tau - d/2, tau + d/2] with `width` = d, 0 outside.
/// Sampled: piecewise-linear through `knots` (offset from tau, value), 0
/// outside the first/last knot.
struct PulseShape {
  enum class Kind { Gaussian, Rectangular, Sampled };

  Kind kind = Kind::Gaussian;
  double width = 1.0;
  std::vector<std::pair<double, double>> knots;

  static PulseShape gaussian(double width);
  static PulseShape rectangular(double duration);
  static PulseShape sampled(std::vector<std::pair<double, double>> knots);

  /// f evaluated at `offset` = t - tau.
  double operator()(double offset) const;
  /// Integral of f over the whole real line.
  double integral() const;
  /// Fraction of the total integral accumulated up to `offset`.
  double accumulated_fraction(double offset) const;
  /// Offsets where f or its derivative is discontinuous.
  std::vector<double> breakpoints() const;
  /// Scale used for step-size and overlap checks.
  double characteristic_width() const;

  void validate() const;
};

bool operator==(const PulseShape& a, const PulseShape& b);

struct PulsePair {
  double theta = 0.0;  // mixing angle, tan(theta) = Omega_p / Omega_s
  double area = 0.0;   // rms pulse area
  double center = 0.0;
  PulseShape shape;

  void validate() const;
};

struct SimulationGrid {
  double t_start = 0.0;
  double t_end = 1.0;
  double dt = 0.01;

  void validate() const;
};

struct TrainSpec {
  std::vector<PulsePair> pairs;
  double gamma = 0.0;
  double spacing = 0.0;
  SimulationGrid grid;

  void validate() const;
  /// Narrowest characteristic width among the pairs (0 when empty).
  double narrowest_width() const;
};

/// Split points between consecutive pair windows: [t_start, m_1, ..., m_{N-1}, t_end],
/// with m_k the midpoint between centers k and k+1.
std::vector<double> pair_window_edges(const TrainSpec& train);

template <typename Scalar = double>
struct Sample {
  Scalar t;
  Scalar omega_p;
  Scalar omega_s;
  Populations<Scalar> populations;
  Scalar norm2;
};

template <typename Scalar = double>
struct TimeSeries {
  std::vector<Sample<Scalar>> rows;
  StateVector<Scalar> final_state = StateVector<Scalar>::Zero();
};

}  // namespace lambda_train
