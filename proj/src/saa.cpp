#include "scenred/saa.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <stdexcept>

#include "scenred/numfmt.hpp"

namespace scenred {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

ExtensiveForm extensive_form(const StochasticProgram& program,
                             const std::vector<Scenario>& scenarios,
                             const VariableBounds& bounds) {
  const int n = program.n(), m = program.m(), l = program.l();
  const int K = static_cast<int>(scenarios.size());
  require(K > 0, "extensive form needs at least one scenario");
  double psum = scenario_probability_sum(scenarios);
  require(std::abs(psum - 1.0) <= 1e-9,
          "scenario probabilities must sum to 1");
  for (const auto& s : scenarios)
    require(s.q.size() == m && s.h.size() == l && s.T.rows() == l &&
                s.T.cols() == n,
            "scenario dimensions do not match the template");

  ExtensiveForm ef;
  ef.n = n;
  ef.m = m;
  ef.K = K;
  ef.structural_rows = static_cast<int>(program.first.A.rows()) + K * l;
  const int d = n + K * m;

  ef.instance.objective.setZero(d);
  ef.instance.objective.head(n) = program.first.c;
  for (int k = 0; k < K; ++k)
    ef.instance.objective.segment(n + k * m, m) = scenarios[k].prob *
                                                   scenarios[k].q;

  // count equality rows to size the split system
  int eq_rows = 0;
  for (auto s : program.second.senses)
    if (s == RowSense::Equal) ++eq_rows;
  const int recourse_rows = K * (l + eq_rows);
  const int nrows = static_cast<int>(program.first.A.rows()) + recourse_rows +
                    2 * d;

  Eigen::MatrixXd& G = ef.instance.poly.G;
  Eigen::VectorXd& g = ef.instance.poly.g;
  G.setZero(nrows, d);
  g.resize(nrows);
  ef.instance.poly.n_first = n;

  int r = 0;
  for (int i = 0; i < program.first.A.rows(); ++i, ++r) {
    G.block(r, 0, 1, n) = program.first.A.row(i);
    g(r) = program.first.b(i);
  }
  for (int k = 0; k < K; ++k) {
    const Scenario& s = scenarios[k];
    for (int row = 0; row < l; ++row) {
      auto put = [&](double sgn) {
        G.block(r, 0, 1, n) = sgn * s.T.row(row);
        G.block(r, n + k * m, 1, m) = sgn * program.second.W.row(row);
        g(r) = sgn * s.h(row);
        ++r;
      };
      switch (program.second.senses[row]) {
        case RowSense::LessEqual: put(1.0); break;
        case RowSense::GreaterEqual: put(-1.0); break;
        case RowSense::Equal: put(1.0); put(-1.0); break;
      }
    }
  }
  for (int j = 0; j < d; ++j, ++r) {  // lower bounds
    G(r, j) = -1.0;
    g(r) = -(j < n ? bounds.x_lb(j) : bounds.y_lb((j - n) % m));
  }
  for (int j = 0; j < d; ++j, ++r) {  // upper bounds
    double ub = j < n ? bounds.x_ub(j) : bounds.y_ub((j - n) % m);
    require(std::isfinite(ub), "extensive form requires finite upper bounds");
    G(r, j) = 1.0;
    g(r) = ub;
  }

  if (program.any_integer()) {
    ef.instance.integer.assign(d, false);
    for (int j = 0; j < n; ++j) ef.instance.integer[j] = program.first.integer[j];
    for (int k = 0; k < K; ++k)
      for (int j = 0; j < m; ++j)
        ef.instance.integer[n + k * m + j] = program.second.y_integer[j];
  }
  return ef;
}

double evaluate_recourse(const StochasticProgram& program,
                         const Eigen::VectorXd& x, const Scenario& scenario,
                         const VariableBounds& bounds) {
  const int n = program.n(), m = program.m(), l = program.l();
  require(x.size() == n, "first-stage point has wrong dimension");

  int eq_rows = 0;
  for (auto s : program.second.senses)
    if (s == RowSense::Equal) ++eq_rows;

  Polyhedron p;
  p.G.setZero(l + eq_rows + 2 * m, m);
  p.g.resize(l + eq_rows + 2 * m);
  int r = 0;
  for (int row = 0; row < l; ++row) {
    double rhs = scenario.h(row) - scenario.T.row(row).dot(x);
    auto put = [&](double sgn) {
      p.G.block(r, 0, 1, m) = sgn * program.second.W.row(row);
      p.g(r) = sgn * rhs;
      ++r;
    };
    switch (program.second.senses[row]) {
      case RowSense::LessEqual: put(1.0); break;
      case RowSense::GreaterEqual: put(-1.0); break;
      case RowSense::Equal: put(1.0); put(-1.0); break;
    }
  }
  for (int j = 0; j < m; ++j, ++r) {
    p.G(r, j) = -1.0;
    p.g(r) = -bounds.y_lb(j);
  }
  for (int j = 0; j < m; ++j, ++r) {
    p.G(r, j) = 1.0;
    p.g(r) = bounds.y_ub(j);
  }

  LpInstance inst{scenario.q, p, {}};
  bool integral = false;
  for (bool f : program.second.y_integer) integral = integral || f;
  if (integral) {
    inst.integer = program.second.y_integer;
    MilpSolution sol = solve_milp(inst);
    if (sol.status != SolveStatus::Optimal)
      throw std::runtime_error(
          std::string("recourse ") + to_string(sol.status) +
          " at this first-stage point (scenario " +
          std::to_string(scenario.index) + ")");
    return sol.value;
  }
  LpSolution sol = solve_lp(inst);
  if (sol.status != SolveStatus::Optimal)
    throw std::runtime_error(std::string("recourse ") + to_string(sol.status) +
                             " at this first-stage point (scenario " +
                             std::to_string(scenario.index) + ")");
  return sol.value;
}

double evaluate_objective(const StochasticProgram& program,
                          const Eigen::VectorXd& x,
                          const std::vector<Scenario>& scenarios,
                          const VariableBounds& bounds) {
  double value = program.first.c.dot(x);
  for (const auto& s : scenarios)
    value += s.prob * evaluate_recourse(program, x, s, bounds);
  return value;
}

SolveReport solve_saa(const StochasticProgram& program,
                      const std::vector<Scenario>& scenarios,
                      const VariableBounds& bounds) {
  auto t0 = std::chrono::steady_clock::now();
  ExtensiveForm ef = extensive_form(program, scenarios, bounds);

  SolveReport report;
  if (!ef.instance.integer.empty()) {
    MilpSolution sol = solve_milp(ef.instance);
    report.status = sol.status;
    report.nodes = sol.nodes;
    if (sol.status == SolveStatus::Optimal ||
        sol.status == SolveStatus::NodeLimit) {
      report.nu = sol.value;
      report.x_star = sol.point.head(ef.n);
    }
  } else {
    LpSolution sol = solve_lp(ef.instance);
    report.status = sol.status;
    if (sol.status == SolveStatus::Optimal) {
      report.nu = sol.value;
      report.x_star = sol.point.head(ef.n);
    }
  }
  if (report.status != SolveStatus::Optimal &&
      report.status != SolveStatus::NodeLimit) {
    throw std::runtime_error(std::string("extensive form solve: ") +
                             to_string(report.status));
  }

  // decomposition identity, recomputed independently of the big solve
  report.per_scenario_Q.reserve(scenarios.size());
  double recomputed = program.first.c.dot(report.x_star);
  for (const auto& s : scenarios) {
    double Q = evaluate_recourse(program, report.x_star, s, bounds);
    report.per_scenario_Q.push_back(Q);
    recomputed += s.prob * Q;
  }
  if (std::abs(recomputed - report.nu) >
      1e-6 * std::max(1.0, std::abs(report.nu)))
    throw std::runtime_error("solve report failed the decomposition identity");

  report.wall_time_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return report;
}

std::vector<Eigen::VectorXd> sample_first_stage_points(
    const StochasticProgram& program, const VariableBounds& bounds, int count,
    std::uint64_t seed) {
  const int n = program.n();
  std::mt19937_64 eng(seed);
  std::vector<Eigen::VectorXd> out;
  bool integral_first = false;
  for (bool f : program.first.integer) integral_first = integral_first || f;

  long attempts = 0, cap = 1000L * std::max(1, count);
  while (static_cast<int>(out.size()) < count && attempts < cap) {
    ++attempts;
    Eigen::VectorXd x(n);
    for (int j = 0; j < n; ++j) {
      double u = uniform01(eng());
      x(j) = bounds.x_lb(j) + u * (bounds.x_ub(j) - bounds.x_lb(j));
      if (integral_first && program.first.integer[j]) x(j) = std::floor(x(j));
    }
    if (((program.first.A * x).array() <= program.first.b.array() + 1e-9).all())
      out.push_back(std::move(x));
  }
  return out;
}

ConsistencyReport consistency_report(const StochasticProgram& program,
                                     const std::vector<Scenario>& full,
                                     const std::vector<Scenario>& reduced,
                                     const VariableBounds& bounds,
                                     const SolveReport& full_report,
                                     const SolveReport& reduced_report,
                                     double beta, double beta_prime,
                                     int n_random_probes,
                                     std::uint64_t probe_seed) {
  ConsistencyReport rep;
  rep.nu_full = full_report.nu;
  rep.nu_reduced = reduced_report.nu;
  rep.nu_gap = std::abs(reduced_report.nu - full_report.nu);
  rep.beta = beta;
  rep.beta_prime = beta_prime;

  double nu_full_at_xr =
      evaluate_objective(program, reduced_report.x_star, full, bounds);
  double nu_reduced_at_xf =
      evaluate_objective(program, full_report.x_star, reduced, bounds);
  rep.cross_gap = std::abs(nu_full_at_xr - full_report.nu);
  rep.reduced_opt_inequality = reduced_report.nu <= nu_reduced_at_xf + 1e-7;
  rep.full_opt_inequality = full_report.nu <= nu_full_at_xr + 1e-7;

  std::vector<Eigen::VectorXd> probes;
  probes.push_back(full_report.x_star);
  probes.push_back(reduced_report.x_star);
  for (auto& x :
       sample_first_stage_points(program, bounds, n_random_probes, probe_seed))
    probes.push_back(std::move(x));

  for (const auto& x : probes) {
    ProbeGap pg;
    pg.x = x;
    pg.nu_full = evaluate_objective(program, x, full, bounds);
    pg.nu_reduced = evaluate_objective(program, x, reduced, bounds);
    pg.gap = std::abs(pg.nu_reduced - pg.nu_full);
    rep.max_probe_gap = std::max(rep.max_probe_gap, pg.gap);
    rep.probes.push_back(std::move(pg));
  }
  return rep;
}

}  // namespace scenred
