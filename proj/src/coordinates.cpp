#include "scenred/coordinates.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "scenred/numfmt.hpp"

namespace scenred {

const char* to_string(CoordStatus s) {
  switch (s) {
    case CoordStatus::Ok: return "ok";
    case CoordStatus::Regularized: return "regularized";
    case CoordStatus::Degenerate: return "degenerate";
    case CoordStatus::Infeasible: return "infeasible";
  }
  return "unknown";
}

CoordStatus coord_status_from_string(const std::string& s) {
  if (s == "ok") return CoordStatus::Ok;
  if (s == "regularized") return CoordStatus::Regularized;
  if (s == "degenerate") return CoordStatus::Degenerate;
  if (s == "infeasible") return CoordStatus::Infeasible;
  throw std::invalid_argument("unknown coordinate status: " + s);
}

CoordinateConfig make_coordinate_config(const StochasticProgram& program,
                                        const std::vector<Scenario>& scenarios,
                                        double epsilon, double tol) {
  CoordinateConfig cfg;
  cfg.relax = make_relaxation(program, scenarios, epsilon);
  cfg.relax.check_feasible = false;  // the pipeline checks via Chebyshev
  cfg.mvie.tol = tol;
  return cfg;
}

namespace {

// Single-scenario optimum over an already-built polyhedron.
double kappa_over(const StochasticProgram& program, const Scenario& scenario,
                  const Polyhedron& p, KappaMode mode) {
  LpInstance inst{joint_objective(program, scenario), p, {}};
  if (mode == KappaMode::Milp) {
    inst.integer = joint_integrality(program);
    MilpSolution sol = solve_milp(inst);
    if (sol.status != SolveStatus::Optimal)
      throw std::runtime_error("kappa: scenario program not solvable to optimality");
    return sol.value;
  }
  LpSolution sol = solve_lp(inst);
  if (sol.status != SolveStatus::Optimal)
    throw std::runtime_error("kappa: infeasible scenario polyhedron");
  return sol.value;
}

}  // namespace

double kappa(const StochasticProgram& program, const Scenario& scenario,
             const CoordinateConfig& cfg) {
  Polyhedron p = scenario_polyhedron(program, scenario, cfg.relax);
  return kappa_over(program, scenario, p, cfg.kappa_mode);
}

double sigma(const StochasticProgram& program, const Scenario& scenario,
             const Ellipsoid& e) {
  Eigen::VectorXd w = joint_objective(program, scenario);
  if (w.size() != e.dim())
    throw std::invalid_argument("sigma: dimension mismatch");
  return w.dot(e.center()) - (e.S().transpose() * w).norm();
}

Coordinate coordinate(const StochasticProgram& program,
                      const Scenario& scenario, const CoordinateConfig& cfg) {
  Coordinate out;
  out.k = scenario.index;

  bool regularized = cfg.relax.epsilon > 0.0 &&
                     std::any_of(program.second.senses.begin(),
                                 program.second.senses.end(),
                                 [](RowSense s) { return s == RowSense::Equal; });
  try {
    RelaxationConfig relax = cfg.relax;
    relax.check_feasible = false;
    Polyhedron p = scenario_polyhedron(program, scenario, relax);

    ChebyshevResult cc = chebyshev_center(p);
    if (cc.status == SolveStatus::Infeasible) {
      out.status = CoordStatus::Infeasible;
      return out;
    }
    if (cc.status != SolveStatus::Optimal ||
        cc.inradius <= cfg.mvie.degeneracy_threshold) {
      out.status = CoordStatus::Degenerate;
      return out;
    }

    MvieResult mvie = max_volume_inscribed_ellipsoid(p, cfg.mvie);
    if (!mvie.ellipsoid || mvie.report.status == MvieStatus::Degenerate) {
      out.status = CoordStatus::Degenerate;
      return out;
    }

    out.kappa = kappa_over(program, scenario, p, cfg.kappa_mode);
    out.sigma = sigma(program, scenario, *mvie.ellipsoid);
    out.status = regularized ? CoordStatus::Regularized : CoordStatus::Ok;
  } catch (const std::exception&) {
    out.kappa = std::numeric_limits<double>::quiet_NaN();
    out.sigma = std::numeric_limits<double>::quiet_NaN();
    out.status = CoordStatus::Infeasible;
  }
  return out;
}

std::string coordinates_csv(const std::vector<Coordinate>& coords) {
  std::vector<const Coordinate*> sorted;
  sorted.reserve(coords.size());
  for (const auto& c : coords) sorted.push_back(&c);
  std::sort(sorted.begin(), sorted.end(),
            [](const Coordinate* a, const Coordinate* b) { return a->k < b->k; });
  std::string out = "k,kappa,sigma,status\n";
  for (const Coordinate* c : sorted) {
    out += std::to_string(c->k);
    out += ',';
    out += format_double(c->kappa);
    out += ',';
    out += format_double(c->sigma);
    out += ',';
    out += to_string(c->status);
    out += '\n';
  }
  return out;
}

std::vector<Coordinate> parse_coordinates_csv(const std::string& text) {
  std::vector<Coordinate> out;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (header) {
      if (line != "k,kappa,sigma,status")
        throw std::runtime_error("coordinates CSV: bad header at line 1");
      header = false;
      continue;
    }
    if (line.empty()) continue;
    std::istringstream cells(line);
    std::string k, kappa_s, sigma_s, status_s;
    if (!std::getline(cells, k, ',') || !std::getline(cells, kappa_s, ',') ||
        !std::getline(cells, sigma_s, ',') || !std::getline(cells, status_s))
      throw std::runtime_error("coordinates CSV: malformed line " +
                               std::to_string(lineno));
    Coordinate c;
    c.k = std::stoi(k);
    c.kappa = std::strtod(kappa_s.c_str(), nullptr);
    c.sigma = std::strtod(sigma_s.c_str(), nullptr);
    c.status = coord_status_from_string(status_s);
    out.push_back(c);
  }
  return out;
}

}  // namespace scenred
