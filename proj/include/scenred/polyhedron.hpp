#pragma once

#include <Eigen/Dense>
#include <limits>
#include <vector>

namespace scenred {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Inequality system G z <= g over the joint variable vector z = [x; y].
// The leading n_first components are first-stage variables. Builders keep
// the row order: structural rows first, then lower-bound rows, then
// upper-bound rows, so every variable of a well-formed scenario polyhedron
// has explicit finite bound rows.
struct Polyhedron {
  Eigen::MatrixXd G;
  Eigen::VectorXd g;
  int n_first = 0;

  int dim() const { return static_cast<int>(G.cols()); }
  int rows() const { return static_cast<int>(G.rows()); }

  bool contains(const Eigen::VectorXd& z, double tol = 1e-8) const {
    for (int i = 0; i < rows(); ++i) {
      double scale = std::max(1.0, G.row(i).norm());
      if (G.row(i).dot(z) - g(i) > tol * scale) return false;
    }
    return true;
  }
};

// Per-variable bounds read off single-coefficient rows; entries are
// -inf/+inf when no bound row exists for that variable.
struct BoundInfo {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

inline BoundInfo extract_bounds(const Polyhedron& p) {
  const int d = p.dim();
  BoundInfo info{Eigen::VectorXd::Constant(d, -kInf),
                 Eigen::VectorXd::Constant(d, kInf)};
  for (int i = 0; i < p.rows(); ++i) {
    int nz = -1;
    bool single = true;
    for (int j = 0; j < d; ++j) {
      if (p.G(i, j) != 0.0) {
        if (nz >= 0) { single = false; break; }
        nz = j;
      }
    }
    if (!single || nz < 0) continue;
    double coef = p.G(i, nz), rhs = p.g(i);
    if (coef > 0) {
      info.upper(nz) = std::min(info.upper(nz), rhs / coef);
    } else {
      info.lower(nz) = std::max(info.lower(nz), rhs / coef);
    }
  }
  return info;
}

// Axis-aligned box {lb <= z <= ub} as 2d rows; test and setup helper.
Polyhedron make_box(const Eigen::VectorXd& lb, const Eigen::VectorXd& ub);

}  // namespace scenred
