#pragma once

#include <vector>

#include "scenred/linsolve.hpp"
#include "scenred/model.hpp"

namespace scenred {

// Deterministic equivalent with variables (x, y_1, ..., y_K).
struct ExtensiveForm {
  LpInstance instance;
  int n = 0;               // first-stage variables
  int m = 0;               // recourse variables per scenario
  int K = 0;               // scenarios
  int structural_rows = 0; // first-stage + recourse rows (bounds excluded)

  int variables() const { return n + K * m; }
};

struct SolveReport {
  SolveStatus status = SolveStatus::Infeasible;
  double nu = 0.0;
  Eigen::VectorXd x_star;
  std::vector<double> per_scenario_Q;
  long nodes = 0;
  double wall_time_sec = 0.0;
};

ExtensiveForm extensive_form(const StochasticProgram& program,
                             const std::vector<Scenario>& scenarios,
                             const VariableBounds& bounds);

SolveReport solve_saa(const StochasticProgram& program,
                      const std::vector<Scenario>& scenarios,
                      const VariableBounds& bounds);

// Q(x, xi): optimal second-stage cost at first-stage point x, respecting
// y integrality. Throws if the recourse is infeasible at this x.
double evaluate_recourse(const StochasticProgram& program,
                         const Eigen::VectorXd& x, const Scenario& scenario,
                         const VariableBounds& bounds);

double evaluate_objective(const StochasticProgram& program,
                          const Eigen::VectorXd& x,
                          const std::vector<Scenario>& scenarios,
                          const VariableBounds& bounds);

struct ProbeGap {
  Eigen::VectorXd x;
  double nu_full = 0.0;
  double nu_reduced = 0.0;
  double gap = 0.0;
};

struct ConsistencyReport {
  double nu_full = 0.0;
  double nu_reduced = 0.0;
  double nu_gap = 0.0;            // |nu_reduced* - nu_full*|
  double cross_gap = 0.0;         // |nu_full(x_reduced*) - nu_full*|
  bool reduced_opt_inequality = false;  // nu~(x~*) <= nu~(x*) + 1e-7
  bool full_opt_inequality = false;     // nu(x*) <= nu(x~*) + 1e-7
  std::vector<ProbeGap> probes;
  double max_probe_gap = 0.0;
  double beta = 0.0;
  double beta_prime = 0.0;
};

// Gap report between the full and reduced SAA, evaluated at both optima and
// a seeded set of random feasible first-stage probes.
ConsistencyReport consistency_report(const StochasticProgram& program,
                                     const std::vector<Scenario>& full,
                                     const std::vector<Scenario>& reduced,
                                     const VariableBounds& bounds,
                                     const SolveReport& full_report,
                                     const SolveReport& reduced_report,
                                     double beta, double beta_prime,
                                     int n_random_probes = 20,
                                     std::uint64_t probe_seed = 20240501);

// Random first-stage feasible points (rejection sampling inside the bound
// box), deterministic in the seed.
std::vector<Eigen::VectorXd> sample_first_stage_points(
    const StochasticProgram& program, const VariableBounds& bounds, int count,
    std::uint64_t seed);

}  // namespace scenred
