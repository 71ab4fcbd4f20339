#pragma once

#include <optional>
#include <vector>

#include "scenred/polyhedron.hpp"

namespace scenred {

enum class SolveStatus { Optimal, Infeasible, Unbounded, IterLimit, NodeLimit };

const char* to_string(SolveStatus s);

struct LpInstance {
  Eigen::VectorXd objective;   // minimize objective . z
  Polyhedron poly;
  std::vector<bool> integer;   // empty == all continuous
};

struct LpSolution {
  SolveStatus status = SolveStatus::Infeasible;
  double value = 0.0;
  Eigen::VectorXd point;
  std::vector<int> active_rows;  // rows with (scaled) zero slack at optimum
};

struct MilpOptions {
  long node_limit = 10000000;
  double int_tol = 1e-7;
};

struct MilpSolution {
  SolveStatus status = SolveStatus::Infeasible;
  double value = 0.0;
  Eigen::VectorXd point;
  long nodes = 0;
};

// Dense two-phase primal simplex, Dantzig pricing with Bland's rule after
// 1000 degenerate pivots. Deterministic for fixed input.
LpSolution solve_lp(const LpInstance& inst);

// Best-first branch and bound on the most-fractional variable.
MilpSolution solve_milp(const LpInstance& inst, const MilpOptions& opt = {});

struct ChebyshevResult {
  SolveStatus status = SolveStatus::Infeasible;
  Eigen::VectorXd center;
  double inradius = 0.0;
};

ChebyshevResult chebyshev_center(const Polyhedron& p);

// All basic feasible points, deduplicated. Test-scale guard: throws for
// dim > 6 or more than 40 rows.
std::vector<Eigen::VectorXd> enumerate_vertices(const Polyhedron& p,
                                                double tol = 1e-9);

}  // namespace scenred
