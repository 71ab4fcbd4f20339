#include "scenred/model.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "scenred/linsolve.hpp"
#include "scenred/numfmt.hpp"

namespace scenred {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

bool all_finite(const Eigen::MatrixXd& m) { return m.allFinite(); }

double kahan_sum(const std::vector<Scenario>& scenarios) {
  double sum = 0.0, comp = 0.0;
  for (const auto& s : scenarios) {
    double y = s.prob - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace

bool StochasticProgram::any_integer() const {
  for (bool f : first.integer)
    if (f) return true;
  for (bool f : second.y_integer)
    if (f) return true;
  return false;
}

StochasticProgram build_problem(const FirstStage& first,
                                const ScenarioTemplate& second) {
  const int n = first.n();
  require(n > 0, "first stage has no variables");
  require(first.A.cols() == n, "A columns != length of c");
  require(first.A.rows() == first.b.size(), "A rows != length of b");
  require(static_cast<int>(first.integer.size()) == n,
          "integrality flags != length of c");
  require(first.lb.size() == n && first.ub.size() == n,
          "bound lengths != length of c");
  require(all_finite(first.c) && all_finite(first.A) && all_finite(first.b),
          "non-finite first-stage entry");
  require(first.lb.allFinite(), "first-stage lower bounds must be finite");
  for (int j = 0; j < n; ++j)
    require(first.lb(j) <= first.ub(j), "lower bound exceeds upper bound");

  const int l = second.l();
  const int m = second.m();
  require(m > 0, "second stage has no variables");
  require(static_cast<int>(second.senses.size()) == l, "senses length != W rows");
  require(static_cast<int>(second.q.size()) == m, "q length != W columns");
  require(static_cast<int>(second.T.size()) == l, "T rows != W rows");
  for (const auto& row : second.T)
    require(static_cast<int>(row.size()) == n, "T columns != first-stage size");
  require(static_cast<int>(second.h.size()) == l, "h length != W rows");
  require(static_cast<int>(second.y_integer.size()) == m,
          "y integrality flags != W columns");
  require(second.y_lb.size() == m && second.y_ub.size() == m,
          "y bound lengths != W columns");
  require(all_finite(second.W), "non-finite entry in W");
  require(second.y_lb.allFinite(), "y lower bounds must be finite");
  for (int j = 0; j < m; ++j)
    require(second.y_lb(j) <= second.y_ub(j), "y lower bound exceeds upper");

  StochasticProgram program{first, second};

  // drop vacuous all-zero first-stage rows; an all-zero row with b < 0 is
  // an immediate contradiction
  std::vector<int> keep;
  for (int i = 0; i < first.A.rows(); ++i) {
    if (first.A.row(i).isZero(0.0)) {
      require(first.b(i) >= 0.0, "all-zero first-stage row with negative rhs");
      continue;
    }
    keep.push_back(i);
  }
  if (static_cast<int>(keep.size()) != first.A.rows()) {
    Eigen::MatrixXd A(keep.size(), n);
    Eigen::VectorXd b(keep.size());
    for (int r = 0; r < static_cast<int>(keep.size()); ++r) {
      A.row(r) = first.A.row(keep[r]);
      b(r) = first.b(keep[r]);
    }
    program.first.A = std::move(A);
    program.first.b = std::move(b);
  }

  // feasibility solve on the first-stage set
  const auto& A = program.first.A;
  const auto& b = program.first.b;
  int extra = 0;
  for (int j = 0; j < n; ++j)
    if (std::isfinite(first.ub(j))) ++extra;
  Polyhedron fs;
  fs.n_first = n;
  fs.G.setZero(A.rows() + n + extra, n);
  fs.g.resize(A.rows() + n + extra);
  fs.G.topRows(A.rows()) = A;
  fs.g.head(A.rows()) = b;
  int r = static_cast<int>(A.rows());
  for (int j = 0; j < n; ++j, ++r) {
    fs.G(r, j) = -1.0;
    fs.g(r) = -first.lb(j);
  }
  for (int j = 0; j < n; ++j) {
    if (!std::isfinite(first.ub(j))) continue;
    fs.G(r, j) = 1.0;
    fs.g(r) = first.ub(j);
    ++r;
  }
  LpInstance feas{Eigen::VectorXd::Zero(n), fs, {}};
  if (solve_lp(feas).status == SolveStatus::Infeasible)
    throw std::invalid_argument("first-stage feasible set is empty");

  return program;
}

Scenario realize_scenario(const StochasticProgram& program,
                          const Eigen::VectorXd& xi, double prob, int index) {
  const int n = program.n(), m = program.m(), l = program.l();
  Scenario s;
  s.index = index;
  s.xi = xi;
  s.prob = prob;
  s.q.resize(m);
  for (int j = 0; j < m; ++j) s.q(j) = program.second.q[j].eval(xi);
  s.T.resize(l, n);
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < n; ++j) s.T(i, j) = program.second.T[i][j].eval(xi);
  s.h.resize(l);
  for (int i = 0; i < l; ++i) s.h(i) = program.second.h[i].eval(xi);
  return s;
}

static void validate_distribution(const DistributionSpec& dist) {
  require(!dist.marginals.empty(), "distribution has no marginals");
  for (const auto& m : dist.marginals) {
    require(m.values.size() > 0, "marginal with empty support");
    require(m.values.size() == m.probs.size(), "marginal values/probs mismatch");
    require(m.values.allFinite(), "marginal support must be finite");
    double sum = 0.0;
    for (int i = 0; i < m.probs.size(); ++i) {
      require(m.probs(i) > 0.0, "marginal probabilities must be positive");
      sum += m.probs(i);
    }
    require(std::abs(sum - 1.0) <= 1e-12, "marginal probabilities must sum to 1");
  }
}

std::vector<Scenario> enumerate_scenarios(const DistributionSpec& dist,
                                          const StochasticProgram& program,
                                          std::int64_t cap) {
  validate_distribution(dist);
  const int s = static_cast<int>(dist.marginals.size());
  std::int64_t total = 1;
  for (const auto& m : dist.marginals) {
    total *= m.values.size();
    require(total <= cap, "scenario enumeration cap exceeded");
  }

  std::vector<Scenario> out;
  out.reserve(static_cast<size_t>(total));
  std::vector<int> idx(s, 0);
  Eigen::VectorXd xi(s);
  for (std::int64_t k = 0; k < total; ++k) {
    double prob = 1.0;
    for (int j = 0; j < s; ++j) {
      xi(j) = dist.marginals[j].values(idx[j]);
      prob *= dist.marginals[j].probs(idx[j]);
    }
    out.push_back(realize_scenario(program, xi, prob, static_cast<int>(k)));
    // lexicographic advance, last marginal fastest
    for (int j = s - 1; j >= 0; --j) {
      if (++idx[j] < dist.marginals[j].values.size()) break;
      idx[j] = 0;
    }
  }
  return out;
}

std::vector<Scenario> sample_iid(const DistributionSpec& dist,
                                 const StochasticProgram& program,
                                 int K, std::uint64_t seed) {
  validate_distribution(dist);
  require(K >= 1, "sample size must be >= 1");
  const int s = static_cast<int>(dist.marginals.size());

  // cumulative distributions per marginal
  std::vector<Eigen::VectorXd> cum(s);
  for (int j = 0; j < s; ++j) {
    const auto& m = dist.marginals[j];
    cum[j].resize(m.probs.size());
    double acc = 0.0;
    for (int i = 0; i < m.probs.size(); ++i) {
      acc += m.probs(i);
      cum[j](i) = acc;
    }
    cum[j](m.probs.size() - 1) = 1.0;
  }

  std::mt19937_64 engine(seed);
  std::vector<Scenario> out;
  out.reserve(K);
  Eigen::VectorXd xi(s);
  const double p = 1.0 / static_cast<double>(K);
  for (int k = 0; k < K; ++k) {
    for (int j = 0; j < s; ++j) {
      double u = uniform01(engine());
      int i = 0;
      while (i < cum[j].size() - 1 && u >= cum[j](i)) ++i;
      xi(j) = dist.marginals[j].values(i);
    }
    out.push_back(realize_scenario(program, xi, p, k));
  }
  return out;
}

VariableBounds derive_variable_bounds(const StochasticProgram& program,
                                      const std::vector<Scenario>& scenarios) {
  const int n = program.n(), m = program.m(), l = program.l();
  VariableBounds vb;
  vb.x_lb = program.first.lb;
  vb.x_ub = program.first.ub;
  vb.y_lb = program.second.y_lb;
  vb.y_ub = program.second.y_ub;

  // first-stage holes: maximize x_j over the first-stage rows
  for (int j = 0; j < n; ++j) {
    if (std::isfinite(vb.x_ub(j))) continue;
    Polyhedron fs;
    fs.n_first = n;
    int rows = static_cast<int>(program.first.A.rows()) + n;
    fs.G.setZero(rows, n);
    fs.g.resize(rows);
    fs.G.topRows(program.first.A.rows()) = program.first.A;
    fs.g.head(program.first.A.rows()) = program.first.b;
    for (int i = 0; i < n; ++i) {
      fs.G(program.first.A.rows() + i, i) = -1.0;
      fs.g(program.first.A.rows() + i) = -program.first.lb(i);
    }
    Eigen::VectorXd obj = Eigen::VectorXd::Zero(n);
    obj(j) = -1.0;
    LpSolution sol = solve_lp({obj, fs, {}});
    if (sol.status != SolveStatus::Optimal)
      throw std::runtime_error(
          "unboundable first-stage variable x" + std::to_string(j) +
          ": no data-derived bound exists and none supplied");
    vb.x_ub(j) = -sol.value;
  }

  // second-stage holes: max |h_k(r)| over rows touching the variable
  for (int j = 0; j < m; ++j) {
    if (std::isfinite(vb.y_ub(j))) continue;
    bool touched = false;
    double bound = 0.0;
    for (int r = 0; r < l; ++r) {
      if (program.second.W(r, j) == 0.0) continue;
      touched = true;
      for (const auto& s : scenarios)
        bound = std::max(bound, std::abs(s.h(r)));
    }
    if (!touched || scenarios.empty())
      throw std::runtime_error(
          "unboundable recourse variable y" + std::to_string(j) +
          ": no data-derived bound exists and none supplied");
    vb.y_ub(j) = bound;
  }
  return vb;
}

RelaxationConfig make_relaxation(const StochasticProgram& program,
                                 const std::vector<Scenario>& scenarios,
                                 double epsilon) {
  RelaxationConfig cfg;
  cfg.epsilon = epsilon;
  cfg.bounds = derive_variable_bounds(program, scenarios);
  return cfg;
}

Polyhedron scenario_polyhedron(const StochasticProgram& program,
                               const Scenario& scenario,
                               const RelaxationConfig& cfg) {
  const int n = program.n(), m = program.m(), l = program.l();
  const int d = n + m;
  require(scenario.q.size() == m && scenario.h.size() == l &&
              scenario.T.rows() == l && scenario.T.cols() == n,
          "scenario dimensions do not match the template");
  const VariableBounds& vb = cfg.bounds;
  require(vb.x_lb.size() == n && vb.x_ub.size() == n && vb.y_lb.size() == m &&
              vb.y_ub.size() == m,
          "relaxation config bounds missing");
  for (int j = 0; j < n; ++j)
    if (!std::isfinite(vb.x_ub(j)))
      throw std::runtime_error("unboundable variable x" + std::to_string(j));
  for (int j = 0; j < m; ++j)
    if (!std::isfinite(vb.y_ub(j)))
      throw std::runtime_error("unboundable variable y" + std::to_string(j));

  std::vector<Eigen::RowVectorXd> rows;
  std::vector<double> rhs;
  auto push = [&](const Eigen::RowVectorXd& row, double v) {
    if (row.isZero(0.0)) {
      if (v < 0.0)
        throw std::runtime_error("infeasible scenario polyhedron (contradictory row)");
      return;  // vacuous
    }
    rows.push_back(row);
    rhs.push_back(v);
  };

  for (int i = 0; i < program.first.A.rows(); ++i) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(d);
    row.head(n) = program.first.A.row(i);
    push(row, program.first.b(i));
  }
  for (int r = 0; r < l; ++r) {
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(d);
    row.head(n) = scenario.T.row(r);
    row.tail(m) = program.second.W.row(r);
    switch (program.second.senses[r]) {
      case RowSense::LessEqual:
        push(row, scenario.h(r));
        break;
      case RowSense::GreaterEqual:
        push(-row, -scenario.h(r));
        break;
      case RowSense::Equal:
        push(row, scenario.h(r) + cfg.epsilon);
        push(-row, -scenario.h(r) + cfg.epsilon);
        break;
    }
  }

  Polyhedron p;
  p.n_first = n;
  const int structural = static_cast<int>(rows.size());
  p.G.setZero(structural + 2 * d, d);
  p.g.resize(structural + 2 * d);
  for (int i = 0; i < structural; ++i) {
    p.G.row(i) = rows[i];
    p.g(i) = rhs[i];
  }
  for (int j = 0; j < d; ++j) {  // lower bounds
    p.G(structural + j, j) = -1.0;
    p.g(structural + j) = -(j < n ? vb.x_lb(j) : vb.y_lb(j - n));
  }
  for (int j = 0; j < d; ++j) {  // upper bounds
    p.G(structural + d + j, j) = 1.0;
    p.g(structural + d + j) = j < n ? vb.x_ub(j) : vb.y_ub(j - n);
  }

  if (cfg.check_feasible) {
    ChebyshevResult cc = chebyshev_center(p);
    if (cc.status == SolveStatus::Infeasible)
      throw std::runtime_error("infeasible scenario polyhedron");
  }
  return p;
}

Eigen::VectorXd joint_objective(const StochasticProgram& program,
                                const Scenario& scenario) {
  Eigen::VectorXd w(program.dim());
  w.head(program.n()) = program.first.c;
  w.tail(program.m()) = scenario.q;
  return w;
}

std::vector<bool> joint_integrality(const StochasticProgram& program) {
  std::vector<bool> flags(program.dim(), false);
  for (int j = 0; j < program.n(); ++j) flags[j] = program.first.integer[j];
  for (int j = 0; j < program.m(); ++j)
    flags[program.n() + j] = program.second.y_integer[j];
  return flags;
}

std::pair<StochasticProgram, DistributionSpec> builtin_example1() {
  FirstStage first;
  first.c = Eigen::Vector2d(2.0, 3.0);
  first.A = Eigen::MatrixXd(1, 2);
  first.A << 1.0, 1.0;
  first.b = Eigen::VectorXd::Constant(1, 100.0);
  first.integer = {true, true};
  first.lb = Eigen::Vector2d(0.0, 0.0);
  first.ub = Eigen::Vector2d(kInf, kInf);

  // Shortage recourse: y_1 >= xi_1 - 2x_1 - 6x_2, y_2 >= xi_2 - 3x_1 - 3x_2,
  // shortage bought at q = (7, 12).
  ScenarioTemplate second;
  second.W = Eigen::MatrixXd::Identity(2, 2);
  second.senses = {RowSense::GreaterEqual, RowSense::GreaterEqual};
  second.q = {AffineEntry(7.0), AffineEntry(12.0)};
  second.T = {{AffineEntry(2.0), AffineEntry(6.0)},
              {AffineEntry(3.0), AffineEntry(3.0)}};
  AffineEntry h1, h2;
  h1.coef = Eigen::Vector2d(1.0, 0.0);
  h2.coef = Eigen::Vector2d(0.0, 1.0);
  second.h = {h1, h2};
  second.y_integer = {true, true};
  second.y_lb = Eigen::Vector2d(0.0, 0.0);
  second.y_ub = Eigen::Vector2d(kInf, kInf);

  DistributionSpec dist;
  DiscreteMarginal m1, m2;
  m1.values.resize(10);
  m2.values.resize(10);
  for (int i = 0; i < 10; ++i) {
    m1.values(i) = 310.0 + i;
    m2.values(i) = 292.0 + i;
  }
  m1.probs = Eigen::VectorXd::Constant(10, 0.1);
  m2.probs = Eigen::VectorXd::Constant(10, 0.1);
  dist.marginals = {m1, m2};

  return {build_problem(first, second), dist};
}

std::pair<StochasticProgram, DistributionSpec> builtin_synthetic750() {
  FirstStage first;
  first.c = Eigen::Vector2d(4.0, 5.0);
  first.A = Eigen::MatrixXd(2, 2);
  first.A << 1.0, 1.0, 2.0, 1.0;
  first.b = Eigen::Vector2d(60.0, 90.0);
  first.integer = {false, false};
  first.lb = Eigen::Vector2d(0.0, 0.0);
  first.ub = Eigen::Vector2d(kInf, kInf);

  ScenarioTemplate second;
  second.W = Eigen::MatrixXd::Identity(3, 3);
  second.senses = {RowSense::GreaterEqual, RowSense::GreaterEqual,
                   RowSense::GreaterEqual};
  second.q = {AffineEntry(6.0), AffineEntry(8.0), AffineEntry(7.0)};
  second.T = {{AffineEntry(1.0), AffineEntry(2.0)},
              {AffineEntry(2.0), AffineEntry(1.0)},
              {AffineEntry(1.0), AffineEntry(1.0)}};
  AffineEntry h1, h2, h3;
  h1.coef = Eigen::Vector3d(1.0, 0.0, 0.0);
  h2.coef = Eigen::Vector3d(0.0, 1.0, 0.0);
  h3.coef = Eigen::Vector3d(0.0, 0.0, 1.0);
  second.h = {h1, h2, h3};
  second.y_integer = {false, false, false};
  second.y_lb = Eigen::Vector3d::Zero();
  second.y_ub = Eigen::Vector3d(kInf, kInf, kInf);

  DistributionSpec dist;
  DiscreteMarginal m1, m2, m3;
  m1.values.resize(10);
  for (int i = 0; i < 10; ++i) m1.values(i) = 95.0 + i;
  m1.probs = Eigen::VectorXd::Constant(10, 0.1);
  m2.values.resize(15);
  for (int i = 0; i < 15; ++i) m2.values(i) = 80.0 + 2.0 * i;
  m2.probs = Eigen::VectorXd::Constant(15, 1.0 / 15.0);
  m3.values.resize(5);
  for (int i = 0; i < 5; ++i) m3.values(i) = 50.0 + 5.0 * i;
  m3.probs = Eigen::VectorXd::Constant(5, 0.2);
  dist.marginals = {m1, m2, m3};

  return {build_problem(first, second), dist};
}

std::pair<StochasticProgram, DistributionSpec> builtin_by_name(
    const std::string& name) {
  if (name == "example1") return builtin_example1();
  if (name == "synthetic750") return builtin_synthetic750();
  throw std::invalid_argument("unknown builtin instance: " + name);
}

double scenario_probability_sum(const std::vector<Scenario>& scenarios) {
  return kahan_sum(scenarios);
}

}  // namespace scenred
