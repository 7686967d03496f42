#include "lambda_train/oracle.hpp"

#include "lambda_train/analytic.hpp"
#include "lambda_train/integrator.hpp"
#include "lambda_train/train.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <thread>

namespace lambda_train {

namespace {

constexpr double kFullArea = 2.0 * std::numbers::pi;
constexpr double kHalfArea = std::numbers::pi;
// Two candidate maxima closer than this count as a tie.
constexpr double kTieTolerance = 1e-12;

void check_grid_points(int grid_points) {
  if (grid_points < kMinGridPoints)
    throw std::invalid_argument("angle grid needs at least " + std::to_string(kMinGridPoints) + " points");
}

struct GridTables {
  std::vector<double> angles;
  std::vector<Propagator3d> full;
  std::vector<Propagator3d> half;
};

GridTables make_tables(int grid_points) {
  GridTables t;
  const double cell = angle_grid_cell(grid_points);
  for (int j = 1; j < grid_points; ++j) {
    const double theta = j * cell;
    t.angles.push_back(theta);
    t.full.push_back(single_pair_propagator(theta, kFullArea));
    t.half.push_back(single_pair_propagator(theta, kHalfArea));
  }
  return t;
}

struct Best {
  double value = std::numeric_limits<double>::infinity();
  std::vector<int> tuple;
  std::size_t feasible = 0;
};

// Depth-first scan of tuples whose first index is fixed; prunes branches whose
// running peak already exceeds the best complete tuple found so far.
class Scanner {
 public:
  Scanner(const GridTables& tables, int n) : tables_(tables), n_(n), current_(n) {}

  Best run(int first) {
    best_ = Best{};
    descend(0, first, ground_state<double>(), 0.0);
    return best_;
  }

 private:
  void descend(int depth, int j, const StateVectord& s, double running) {
    const double peak = std::norm((tables_.half[j] * s)(1));
    const double worst = std::max(running, peak);
    const StateVectord next = tables_.full[j] * s;
    current_[depth] = j;
    if (depth + 1 == n_) {
      if (std::norm(next(2)) < 1.0 - kTransferTolerance) return;
      ++best_.feasible;
      if (worst < best_.value - kTieTolerance) {
        best_.value = worst;
        best_.tuple = current_;
      }
      return;
    }
    // Pruned branches could still be feasible, so the feasible count is only
    // exact for n == 1; the search result is unaffected.
    if (worst > best_.value + kTieTolerance) return;
    for (int k = 0; k < static_cast<int>(tables_.angles.size()); ++k) descend(depth + 1, k, next, worst);
  }

  const GridTables& tables_;
  int n_;
  std::vector<int> current_;
  Best best_;
};

}  // namespace

double angle_grid_cell(int grid_points) {
  check_grid_points(grid_points);
  return (std::numbers::pi / 2) / grid_points;
}

std::vector<double> transient_p2_maxima(std::span<const double> angles) {
  std::vector<double> out;
  out.reserve(angles.size());
  StateVectord s = ground_state<double>();
  for (double theta : angles) {
    out.push_back(std::norm((single_pair_propagator(theta, kHalfArea) * s)(1)));
    s = (single_pair_propagator(theta, kFullArea) * s).eval();
  }
  return out;
}

AngleSearchResult bruteforce_optimal_angles(int n, int grid_points, unsigned threads) {
  if (n < 1 || n > kMaxSearchPairs)
    throw std::invalid_argument("exhaustive search supports 1 to " + std::to_string(kMaxSearchPairs) + " pairs");
  const GridTables tables = make_tables(grid_points);
  const int candidates = static_cast<int>(tables.angles.size());

  // One task per first angle; results are reduced in index order so the
  // outcome does not depend on scheduling.
  std::vector<Best> per_first(static_cast<std::size_t>(candidates));
  std::atomic<int> next{0};
  auto worker = [&] {
    Scanner scanner(tables, n);
    for (int j = next++; j < candidates; j = next++) per_first[j] = scanner.run(j);
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(candidates));
  std::vector<std::jthread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  pool.clear();

  Best best;
  for (const auto& b : per_first) {
    best.feasible += b.feasible;
    if (!b.tuple.empty() && b.value < best.value - kTieTolerance) {
      best.value = b.value;
      best.tuple = b.tuple;
    }
  }
  if (best.tuple.empty())
    throw InfeasibleGridError("no angle tuple on a " + std::to_string(grid_points) +
                              "-point grid reaches complete transfer; refine the grid");

  AngleSearchResult result;
  for (int j : best.tuple) result.angles.push_back(tables.angles[j]);
  result.max_p2 = best.value;
  result.cell = angle_grid_cell(grid_points);
  result.grid_points = grid_points;
  result.feasible_count = best.feasible;
  return result;
}

std::vector<std::pair<double, double>> transfer_feasible_set(int grid_points) {
  const GridTables tables = make_tables(grid_points);
  std::vector<std::pair<double, double>> out;
  const auto size = tables.angles.size();
  for (std::size_t a = 0; a < size; ++a) {
    const StateVectord s1 = tables.full[a] * ground_state<double>();
    for (std::size_t b = 0; b < size; ++b) {
      if (std::norm((tables.full[b] * s1)(2)) >= 1.0 - kTransferTolerance)
        out.emplace_back(tables.angles[a], tables.angles[b]);
    }
  }
  return out;
}

double CrosscheckReport::p2_deviation() const { return std::abs(p2_numeric - p2_bound); }

CrosscheckReport crosscheck_analytic_numeric(int n, double dt) {
  const auto train = build_train(n, PulseShape::gaussian(1.0), kDefaultSpacingWidths, kFullArea);
  IntegratorConfig config;
  config.dt = dt;
  const auto series = evolve<double>(train, config);
  const auto maxima = extract_p2_max(series, train);
  const auto angles = train_angles(train);
  const auto exact = partial_cascade_states<double>(angles, kFullArea);
  const auto edges = pair_window_edges(train);

  CrosscheckReport report;
  report.pairs = n;
  report.dt = dt;
  for (int k = 0; k < n; ++k) {
    const double boundary = edges[k + 1];
    const auto nearest = std::min_element(series.rows.begin(), series.rows.end(), [&](const auto& a, const auto& b) {
      return std::abs(a.t - boundary) < std::abs(b.t - boundary);
    });
    const Populationsd numeric = nearest->populations;
    const Populationsd analytic = state_populations(exact[k]);
    report.numeric_boundary.push_back(numeric);
    report.analytic_boundary.push_back(analytic);
    report.boundary_deviation = report.boundary_deviation.cwiseMax((numeric - analytic).cwiseAbs());
    report.peak_area_fraction.push_back(pair_area_fraction(train, k, maxima.per_pair_time[k]));
  }
  report.p2_numeric = maxima.value;
  report.p2_bound = p2_max_bound(n);
  report.per_pair_numeric = maxima.per_pair;
  report.per_pair_analytic = transient_p2_maxima(angles);
  return report;
}

}  // namespace lambda_train
