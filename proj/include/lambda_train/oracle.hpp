// Independent checks of the optimal schedule: exhaustive angle search on a
// grid, feasible-set enumeration and analytic-vs-numeric cross-checks.
#pragma once

#include "lambda_train/types.hpp"

#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace lambda_train {

class InfeasibleGridError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// |U_31|^2 threshold for a schedule to count as complete transfer.
inline constexpr double kTransferTolerance = 1e-6;
inline constexpr int kMaxSearchPairs = 3;
inline constexpr int kMinGridPoints = 90;

/// Spacing of the angle grid: (pi/2) / grid_points. Candidates are j * cell for
/// j = 1 .. grid_points - 1, i.e. the open interval (0, pi/2).
double angle_grid_cell(int grid_points);

/// Peak P2 reached inside each pair of a train of full-area (2 pi) pairs that
/// starts in |1>. The peak inside pair k is the P2 component of
/// U(theta_k, pi) s_{k-1}, s_{k-1} being the state after the preceding pairs.
std::vector<double> transient_p2_maxima(std::span<const double> angles);

struct AngleSearchResult {
  std::vector<double> angles;
  double max_p2 = 0.0;
  double cell = 0.0;
  int grid_points = 0;
  /// Feasible tuples the pruned search reached; the full count only for n == 1.
  std::size_t feasible_count = 0;
};

/// Exhaustive grid scan over all angle tuples for n pairs of area 2 pi. Among
/// tuples reaching complete transfer returns the one with the smallest largest
/// per-pair P2 peak; ties go to the lexicographically smallest tuple.
/// `threads` = 0 picks the hardware concurrency.
AngleSearchResult bruteforce_optimal_angles(int n, int grid_points, unsigned threads = 0);

/// All (theta_1, theta_2) grid tuples for two pairs of area 2 pi that reach
/// complete transfer.
std::vector<std::pair<double, double>> transfer_feasible_set(int grid_points);

struct CrosscheckReport {
  int pairs = 0;
  double dt = 0.0;
  /// Max |P_n(numeric) - P_n(analytic)| over all pair boundaries, n = 1..3.
  Populationsd boundary_deviation = Populationsd::Zero();
  std::vector<Populationsd> numeric_boundary;
  std::vector<Populationsd> analytic_boundary;
  double p2_numeric = 0.0;
  double p2_bound = 0.0;
  std::vector<double> per_pair_numeric;
  std::vector<double> per_pair_analytic;
  /// Accumulated rms-area fraction of each pair at its numeric P2 peak.
  std::vector<double> peak_area_fraction;

  double max_boundary_deviation() const { return boundary_deviation.maxCoeff(); }
  double p2_deviation() const;
};

/// Gaussian train (width 1, spacing 6, area 2 pi, optimal angles, no loss)
/// integrated at step dt and compared with the exact partial cascades.
CrosscheckReport crosscheck_analytic_numeric(int n, double dt);

}  // namespace lambda_train
