#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scenred/polyhedron.hpp"

namespace scenred {

// --- two-stage stochastic (integer) program data -------------------------

struct FirstStage {
  Eigen::VectorXd c;          // per-unit cost, length n
  Eigen::MatrixXd A;          // constraint rows, A x <= b
  Eigen::VectorXd b;
  std::vector<bool> integer;  // per-variable integrality
  Eigen::VectorXd lb;
  Eigen::VectorXd ub;         // +inf allowed; finite bound derived later

  int n() const { return static_cast<int>(c.size()); }
};

enum class RowSense { LessEqual, Equal, GreaterEqual };

// One coefficient of (q, T, h) as an affine function of the random vector:
// base + coef . xi. An empty coef means the entry is deterministic.
struct AffineEntry {
  double base = 0.0;
  Eigen::VectorXd coef;

  AffineEntry() = default;
  AffineEntry(double b) : base(b) {}  // NOLINT: implicit by design
  double eval(const Eigen::VectorXd& xi) const {
    if (coef.size() == 0) return base;
    return base + coef.dot(xi);
  }
  bool deterministic() const { return coef.size() == 0 || coef.isZero(0.0); }
};

struct ScenarioTemplate {
  Eigen::MatrixXd W;                         // l x m, fixed recourse
  std::vector<RowSense> senses;              // length l
  std::vector<AffineEntry> q;                // length m
  std::vector<std::vector<AffineEntry>> T;   // l rows of n entries
  std::vector<AffineEntry> h;                // length l
  std::vector<bool> y_integer;               // length m
  Eigen::VectorXd y_lb;
  Eigen::VectorXd y_ub;                      // +inf allowed

  int l() const { return static_cast<int>(W.rows()); }
  int m() const { return static_cast<int>(W.cols()); }
};

struct Scenario {
  int index = 0;
  Eigen::VectorXd xi;  // realized random vector (empty for explicit scenarios)
  Eigen::VectorXd q;   // m
  Eigen::MatrixXd T;   // l x n
  Eigen::VectorXd h;   // l
  double prob = 0.0;
};

struct DiscreteMarginal {
  Eigen::VectorXd values;
  Eigen::VectorXd probs;
};

struct DistributionSpec {
  std::vector<DiscreteMarginal> marginals;
  std::uint64_t seed = 0;
};

// Validated immutable program handle (build via build_problem).
struct StochasticProgram {
  FirstStage first;
  ScenarioTemplate second;

  int n() const { return first.n(); }
  int m() const { return second.m(); }
  int l() const { return second.l(); }
  int dim() const { return n() + m(); }
  bool any_integer() const;
};

// Finite joint-variable bounds used when assembling scenario polyhedra and
// extensive forms. derive_variable_bounds fills the +inf holes from data:
// first-stage upper bounds by maximizing each x_i over the first-stage rows,
// second-stage upper bounds from max(0, max_k |h_k(r)|) over the rows r
// touching that variable.
struct VariableBounds {
  Eigen::VectorXd x_lb, x_ub;  // length n
  Eigen::VectorXd y_lb, y_ub;  // length m
};

struct RelaxationConfig {
  double epsilon = 1e-3;     // equality-row relaxation half-width
  VariableBounds bounds;     // must be finite; see make_relaxation
  bool check_feasible = true;
};

// --- operations -----------------------------------------------------------

StochasticProgram build_problem(const FirstStage& first,
                                const ScenarioTemplate& second);

std::vector<Scenario> enumerate_scenarios(const DistributionSpec& dist,
                                          const StochasticProgram& program,
                                          std::int64_t cap = 1000000);

std::vector<Scenario> sample_iid(const DistributionSpec& dist,
                                 const StochasticProgram& program,
                                 int K, std::uint64_t seed);

// Realize (q, T, h) for one support point; used by both generators.
Scenario realize_scenario(const StochasticProgram& program,
                          const Eigen::VectorXd& xi, double prob, int index);

VariableBounds derive_variable_bounds(const StochasticProgram& program,
                                      const std::vector<Scenario>& scenarios);

RelaxationConfig make_relaxation(const StochasticProgram& program,
                                 const std::vector<Scenario>& scenarios,
                                 double epsilon = 1e-3);

// Joint [x; y] polyhedron of one scenario: first-stage rows, recourse rows
// (equalities split into +/- epsilon pairs), integrality dropped, explicit
// finite bound rows for every variable.
Polyhedron scenario_polyhedron(const StochasticProgram& program,
                               const Scenario& scenario,
                               const RelaxationConfig& cfg);

// Objective over the joint polyhedron variables: [c; q_k].
Eigen::VectorXd joint_objective(const StochasticProgram& program,
                                const Scenario& scenario);

// Integrality flags over the joint variables [x; y].
std::vector<bool> joint_integrality(const StochasticProgram& program);

std::pair<StochasticProgram, DistributionSpec> builtin_example1();
std::pair<StochasticProgram, DistributionSpec> builtin_synthetic750();
std::pair<StochasticProgram, DistributionSpec> builtin_by_name(
    const std::string& name);

// Compensated probability sum, used by validation at large K.
double scenario_probability_sum(const std::vector<Scenario>& scenarios);

}  // namespace scenred
