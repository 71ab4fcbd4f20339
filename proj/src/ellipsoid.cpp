#include "scenred/ellipsoid.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "scenred/numfmt.hpp"

namespace scenred {

Ellipsoid::Ellipsoid(Eigen::VectorXd center, Eigen::MatrixXd shape)
    : center_(std::move(center)) {
  const int d = static_cast<int>(center_.size());
  if (shape.rows() != d || shape.cols() != d)
    throw std::invalid_argument("ellipsoid shape matrix dimension mismatch");
  if ((shape - shape.transpose()).lpNorm<Eigen::Infinity>() >
      1e-10 * std::max(1.0, shape.lpNorm<Eigen::Infinity>()))
    throw std::invalid_argument("ellipsoid shape matrix not symmetric");
  S_ = 0.5 * (shape + shape.transpose());
  llt_.compute(S_);
  if (llt_.info() != Eigen::Success)
    throw std::invalid_argument("ellipsoid shape matrix not positive definite");
  logdet_ = 0.0;
  for (int i = 0; i < d; ++i) logdet_ += std::log(llt_.matrixL()(i, i));
  logdet_ *= 2.0;
}

double Ellipsoid::radial_norm(const Eigen::VectorXd& z) const {
  if (z.size() != center_.size())
    throw std::invalid_argument("point dimension mismatch");
  // S = L L', so S^-1 (z - c) = L^-T (L^-1 (z - c))
  Eigen::VectorXd u = llt_.matrixL().solve(z - center_);
  Eigen::VectorXd v = llt_.matrixU().solve(u);
  return v.norm();
}

bool contains_point(const Ellipsoid& e, const Eigen::VectorXd& z,
                    double scale) {
  if (scale < 1.0) throw std::invalid_argument("scale must be >= 1");
  return e.contains(z, scale);
}

Eigen::VectorXd verify_inscribed(const Ellipsoid& e, const Polyhedron& p) {
  if (e.dim() != p.dim())
    throw std::invalid_argument("ellipsoid/polyhedron dimension mismatch");
  Eigen::VectorXd res(p.rows());
  for (int i = 0; i < p.rows(); ++i) {
    Eigen::VectorXd a = p.G.row(i).transpose();
    double scale = std::max(1.0, a.norm());
    res(i) = ((e.S() * a).norm() + a.dot(e.center()) - p.g(i)) / scale;
  }
  return res;
}

namespace {

// Barrier state for the inscribed-ellipsoid program over (c, B) with B
// lower triangular, positive diagonal. Constraint rows are kept row-scaled.
struct BarrierProblem {
  Eigen::MatrixXd A;   // m x d, scaled rows
  Eigen::VectorXd g;   // m
  int d = 0, m = 0;
  int nparam = 0;      // d + d(d+1)/2
  std::vector<std::pair<int, int>> tri;  // (row p, col q), p >= q

  explicit BarrierProblem(const Polyhedron& p) {
    d = p.dim();
    m = p.rows();
    A.resize(m, d);
    g.resize(m);
    for (int i = 0; i < m; ++i) {
      double s = p.G.row(i).norm();
      if (s <= 0.0) throw std::invalid_argument("zero row in polyhedron");
      A.row(i) = p.G.row(i) / s;
      g(i) = p.g(i) / s;
    }
    for (int q = 0; q < d; ++q)
      for (int pp = q; pp < d; ++pp) tri.emplace_back(pp, q);
    nparam = d + static_cast<int>(tri.size());
  }

  // theta = [c ; B entries in tri order]
  Eigen::MatrixXd unpack_B(const Eigen::VectorXd& theta) const {
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(d, d);
    for (size_t t = 0; t < tri.size(); ++t)
      B(tri[t].first, tri[t].second) = theta(d + static_cast<int>(t));
    return B;
  }

  // Slack data at theta; ok=false when outside the domain.
  struct Slacks {
    bool ok = false;
    Eigen::VectorXd s;       // g_i - a_i . c
    Eigen::MatrixXd V;       // m x d, rows v_i = B' a_i
    Eigen::VectorXd hvals;   // s^2 - |v|^2
  };

  Slacks slacks(const Eigen::VectorXd& theta) const {
    Slacks out;
    Eigen::VectorXd c = theta.head(d);
    Eigen::MatrixXd B = unpack_B(theta);
    for (int j = 0; j < d; ++j)
      if (B(j, j) <= 0.0) return out;
    out.s = g - A * c;
    out.V = A * B;  // row i = a_i' B, so v_i = B' a_i
    out.hvals.resize(m);
    for (int i = 0; i < m; ++i) {
      if (out.s(i) <= 0.0) return out;
      out.hvals(i) = out.s(i) * out.s(i) - out.V.row(i).squaredNorm();
      if (out.hvals(i) <= 0.0) return out;
    }
    out.ok = true;
    return out;
  }

  double value(const Eigen::VectorXd& theta, const Slacks& sl,
               double mu) const {
    double f = 0.0;
    for (int j = 0; j < d; ++j) f -= std::log(theta(d + diag_index(j)));
    for (int i = 0; i < m; ++i) f -= mu * std::log(sl.hvals(i));
    return f;
  }

  int diag_index(int j) const {
    // position of B(j,j) inside tri order (column-major lower triangle)
    int pos = 0;
    for (int q = 0; q < j; ++q) pos += d - q;
    return pos;
  }

  void derivatives(const Eigen::VectorXd& theta, const Slacks& sl, double mu,
                   Eigen::VectorXd& grad, Eigen::MatrixXd& hess) const {
    grad.setZero(nparam);
    hess.setZero(nparam, nparam);

    for (int j = 0; j < d; ++j) {
      int t = d + diag_index(j);
      double bjj = theta(t);
      grad(t) -= 1.0 / bjj;
      hess(t, t) += 1.0 / (bjj * bjj);
    }

    Eigen::VectorXd u(nparam);
    for (int i = 0; i < m; ++i) {
      const double h = sl.hvals(i);
      const double s = sl.s(i);
      const auto a = A.row(i);
      // u = dh/dtheta
      u.head(d) = -2.0 * s * a.transpose();
      for (size_t t = 0; t < tri.size(); ++t)
        u(d + static_cast<int>(t)) =
            -2.0 * sl.V(i, tri[t].second) * a(tri[t].first);

      grad.noalias() -= (mu / h) * u;
      hess.noalias() += (mu / (h * h)) * (u * u.transpose());
      // -(mu/h) * d2h: c block +2 a a', B block -2 a_p a_p' per column
      hess.topLeftCorner(d, d).noalias() -=
          (2.0 * mu / h) * (a.transpose() * a);
      for (size_t t1 = 0; t1 < tri.size(); ++t1)
        for (size_t t2 = 0; t2 < tri.size(); ++t2) {
          if (tri[t1].second != tri[t2].second) continue;
          hess(d + static_cast<int>(t1), d + static_cast<int>(t2)) +=
              (2.0 * mu / h) * a(tri[t1].first) * a(tri[t2].first);
        }
    }
  }
};

}  // namespace

MvieResult max_volume_inscribed_ellipsoid(const Polyhedron& p,
                                          const MvieOptions& opt) {
  MvieResult out;
  ChebyshevResult cc = chebyshev_center(p);
  out.report.inradius = cc.inradius;
  if (cc.status == SolveStatus::Infeasible ||
      cc.inradius <= opt.degeneracy_threshold) {
    out.report.status = MvieStatus::Degenerate;
    return out;
  }
  if (cc.status != SolveStatus::Optimal)
    throw std::runtime_error("inscribed ellipsoid requires a bounded polyhedron");

  BarrierProblem prob(p);
  const int d = prob.d;

  Eigen::VectorXd theta(prob.nparam);
  theta.head(d) = cc.center;
  double r0 = 0.9 * cc.inradius;
  for (int j = 0; j < d; ++j) theta(d + prob.diag_index(j)) = r0;
  for (size_t t = 0; t < prob.tri.size(); ++t)
    if (prob.tri[t].first != prob.tri[t].second)
      theta(d + static_cast<int>(t)) = 0.0;

  if (opt.restart_seed != 0) {
    // distinct strictly feasible start: shifted center, shrunken ball
    std::mt19937_64 eng(opt.restart_seed);
    Eigen::VectorXd dir(d);
    for (int j = 0; j < d; ++j) dir(j) = uniform01(eng()) - 0.5;
    if (dir.norm() > 0) dir.normalize();
    theta.head(d) = cc.center + 0.3 * cc.inradius * dir;
    for (int j = 0; j < d; ++j) theta(d + prob.diag_index(j)) = 0.5 * cc.inradius;
  }

  auto sl = prob.slacks(theta);
  if (!sl.ok) {
    out.report.status = MvieStatus::Degenerate;
    return out;
  }

  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
  int total_inner = 0;
  double mu = opt.mu0;
  double last_dec2 = kInf;
  // Convergence is measured by the Newton decrement lambda = sqrt(g'H^-1 g),
  // the affine-invariant KKT residual of the barrier stage.
  const double final_dec2 = std::max(opt.tol * opt.tol, 1e-16);
  for (int outer = 0; outer < opt.outer_iters; ++outer) {
    const bool last_stage = outer + 1 == opt.outer_iters;
    const double dec2_tol = last_stage ? final_dec2 : 1e-12;
    for (int inner = 0; inner < opt.max_inner; ++inner) {
      prob.derivatives(theta, sl, mu, grad, hess);
      Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
      Eigen::VectorXd step = -ldlt.solve(grad);
      double ridge = 1e-12 * std::max(1.0, hess.diagonal().maxCoeff());
      while ((ldlt.info() != Eigen::Success || !step.allFinite() ||
              grad.dot(step) >= 0.0) &&
             ridge < 1e6) {
        Eigen::MatrixXd h2 = hess;
        h2.diagonal().array() += ridge;
        ldlt.compute(h2);
        step = -ldlt.solve(grad);
        ridge *= 100.0;
      }
      last_dec2 = -grad.dot(step);
      if (!step.allFinite() || last_dec2 <= dec2_tol) break;

      double f0 = prob.value(theta, sl, mu);
      double t = 1.0;
      bool moved = false;
      while (t >= 1e-14) {
        Eigen::VectorXd cand = theta + t * step;
        auto cand_sl = prob.slacks(cand);
        if (cand_sl.ok &&
            prob.value(cand, cand_sl, mu) <= f0 - 0.25 * t * last_dec2) {
          theta = std::move(cand);
          sl = std::move(cand_sl);
          moved = true;
          break;
        }
        t *= 0.5;
      }
      ++total_inner;
      if (!moved) break;  // stalled at numerical precision
    }
    if (!last_stage) mu *= opt.shrink;
  }

  out.report.iterations = total_inner;
  out.report.grad_norm = std::sqrt(std::max(0.0, last_dec2));
  out.report.status =
      out.report.grad_norm <= 1e-7 ? MvieStatus::Converged : MvieStatus::MaxIter;

  // convert the triangular factor to the symmetric shape matrix
  Eigen::MatrixXd B = prob.unpack_B(theta);
  Eigen::MatrixXd BBt = B * B.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(BBt);
  if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0.0) {
    out.report.status = MvieStatus::Degenerate;
    return out;
  }
  Eigen::MatrixXd S = eig.eigenvectors() *
                      eig.eigenvalues().cwiseSqrt().asDiagonal() *
                      eig.eigenvectors().transpose();
  out.ellipsoid.emplace(theta.head(d), S);
  out.report.max_residual = verify_inscribed(*out.ellipsoid, p).maxCoeff();
  return out;
}

}  // namespace scenred
