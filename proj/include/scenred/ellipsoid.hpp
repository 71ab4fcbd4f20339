#pragma once

#include <cstdint>

#include "scenred/linsolve.hpp"
#include "scenred/polyhedron.hpp"

namespace scenred {

// {center + S u : ||u|| <= 1} with S symmetric positive definite.
class Ellipsoid {
 public:
  Ellipsoid(Eigen::VectorXd center, Eigen::MatrixXd shape);

  const Eigen::VectorXd& center() const { return center_; }
  const Eigen::MatrixXd& S() const { return S_; }
  double logdet() const { return logdet_; }
  int dim() const { return static_cast<int>(center_.size()); }

  // ||S^-1 (z - center)|| via triangular solves on the cached Cholesky factor.
  double radial_norm(const Eigen::VectorXd& z) const;
  bool contains(const Eigen::VectorXd& z, double scale = 1.0) const {
    return radial_norm(z) <= scale + 1e-9;
  }

 private:
  Eigen::VectorXd center_;
  Eigen::MatrixXd S_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  double logdet_ = 0.0;
};

enum class MvieStatus { Converged, Degenerate, MaxIter };

struct MvieReport {
  MvieStatus status = MvieStatus::MaxIter;
  int iterations = 0;            // total inner Newton steps
  double max_residual = 0.0;     // max_i ||S a_i|| + a_i.c - g_i (scaled)
  double grad_norm = 0.0;        // Newton decrement (KKT residual) at exit
  double inradius = 0.0;         // Chebyshev inradius of the input
};

struct MvieOptions {
  double tol = 1e-8;             // Newton-decrement (KKT residual) target
  double mu0 = 0.04;             // initial barrier weight
  double shrink = 0.2;           // per outer iteration
  int outer_iters = 10;
  int max_inner = 60;
  double degeneracy_threshold = 1e-6;  // on the Chebyshev inradius
  std::uint64_t restart_seed = 0;      // != 0 perturbs the initial ball
};

struct MvieResult {
  std::optional<Ellipsoid> ellipsoid;
  MvieReport report;
};

// Maximum-volume inscribed ellipsoid of a bounded full-dimensional
// polyhedron: damped Newton on the log-barrier of the squared facet
// constraints ||B' a_i||^2 <= (g_i - a_i.c)^2, ellipsoid parameterized by a
// lower-triangular factor with positive diagonal, initialized from the
// Chebyshev ball scaled by 0.9.
MvieResult max_volume_inscribed_ellipsoid(const Polyhedron& p,
                                          const MvieOptions& opt = {});

// Per-row residuals ||S a_i|| + a_i.c - g_i, scaled by max(1, ||a_i||);
// all <= 1e-8 certifies containment.
Eigen::VectorXd verify_inscribed(const Ellipsoid& e, const Polyhedron& p);

bool contains_point(const Ellipsoid& e, const Eigen::VectorXd& z,
                    double scale = 1.0);

}  // namespace scenred
