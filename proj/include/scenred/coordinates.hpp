#pragma once

#include <string>
#include <vector>

#include "scenred/ellipsoid.hpp"
#include "scenred/model.hpp"

namespace scenred {

enum class CoordStatus { Ok, Regularized, Degenerate, Infeasible };

const char* to_string(CoordStatus s);
CoordStatus coord_status_from_string(const std::string& s);

// Similarity coordinate of one scenario: kappa is the single-scenario
// optimum over the scenario polyhedron, sigma the optimum of the same
// objective over its inscribed ellipsoid. kappa <= sigma whenever both are
// defined. Degenerate/infeasible scenarios carry NaN coordinates.
struct Coordinate {
  int k = 0;
  double kappa = std::numeric_limits<double>::quiet_NaN();
  double sigma = std::numeric_limits<double>::quiet_NaN();
  CoordStatus status = CoordStatus::Infeasible;

  bool usable() const {
    return status == CoordStatus::Ok || status == CoordStatus::Regularized;
  }
};

enum class KappaMode { LpRelaxation, Milp };

struct CoordinateConfig {
  RelaxationConfig relax;                // epsilon + finite bounds
  MvieOptions mvie;
  KappaMode kappa_mode = KappaMode::LpRelaxation;
};

CoordinateConfig make_coordinate_config(const StochasticProgram& program,
                                        const std::vector<Scenario>& scenarios,
                                        double epsilon = 1e-3,
                                        double tol = 1e-9);

double kappa(const StochasticProgram& program, const Scenario& scenario,
             const CoordinateConfig& cfg);

// Closed-form minimum of the joint objective over the ellipsoid:
// w.center - ||S' w||.
double sigma(const StochasticProgram& program, const Scenario& scenario,
             const Ellipsoid& e);

// Full per-scenario pipeline; failures are encoded in the status so batch
// runs never abort on one bad scenario.
Coordinate coordinate(const StochasticProgram& program,
                      const Scenario& scenario, const CoordinateConfig& cfg);

inline double epsilon_k(double sigma_k, double recourse_value) {
  return sigma_k - recourse_value;
}

// CSV artifact: header "k,kappa,sigma,status", rows sorted by k, full
// round-trip precision.
std::string coordinates_csv(const std::vector<Coordinate>& coords);
std::vector<Coordinate> parse_coordinates_csv(const std::string& text);

}  // namespace scenred
