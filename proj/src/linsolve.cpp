#include "scenred/linsolve.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace scenred {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::IterLimit: return "iter-limit";
    case SolveStatus::NodeLimit: return "node-limit";
  }
  return "unknown";
}

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-9;
constexpr double kFeasTol = 1e-8;
constexpr int kBlandAfter = 1000;  // degenerate pivots before Bland's rule

// Dense full-tableau two-phase simplex for
//     min c.x  s.t.  A x <= b,  x >= 0.
// Values of b may be negative; phase 1 introduces artificials for those rows.
struct StandardSimplex {
  int m, n;                 // rows, structural columns
  Eigen::MatrixXd D;        // m x (ncols + 1), last column = rhs
  Eigen::VectorXd obj;      // ncols + 1 reduced-cost row (priced out)
  std::vector<int> basis;   // basic column per row
  int n_slack = 0, n_art = 0;
  int degenerate_pivots = 0;
  long iterations = 0;
  long iter_limit = 0;

  SolveStatus status = SolveStatus::Optimal;
  Eigen::VectorXd x;        // structural solution

  StandardSimplex(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                  const Eigen::VectorXd& c) {
    m = static_cast<int>(A.rows());
    n = static_cast<int>(A.cols());
    n_slack = m;
    std::vector<int> art_rows;
    for (int i = 0; i < m; ++i)
      if (b(i) < 0) art_rows.push_back(i);
    n_art = static_cast<int>(art_rows.size());
    const int ncols = n + n_slack + n_art;
    iter_limit = 20000 + 50L * (m + n);

    D.setZero(m, ncols + 1);
    basis.assign(m, -1);
    int art = 0;
    for (int i = 0; i < m; ++i) {
      double sgn = b(i) < 0 ? -1.0 : 1.0;
      D.block(i, 0, 1, n) = sgn * A.row(i);
      D(i, n + i) = sgn;                 // slack
      D(i, ncols) = sgn * b(i);
      if (b(i) < 0) {
        D(i, n + n_slack + art) = 1.0;   // artificial, basic
        basis[i] = n + n_slack + art;
        ++art;
      } else {
        basis[i] = n + i;
      }
    }

    if (n_art > 0) {
      // phase 1: min sum of artificials
      obj.setZero(ncols + 1);
      for (int j = n + n_slack; j < ncols; ++j) obj(j) = 1.0;
      price_out();
      if (!iterate()) { status = SolveStatus::IterLimit; return; }
      if (obj(ncols) < -kFeasTol * std::max(1.0, b.cwiseAbs().maxCoeff())) {
        status = SolveStatus::Infeasible;
        return;
      }
      purge_artificials();
    }

    // phase 2
    obj.setZero(D.cols());
    obj.head(n) = c;
    price_out();
    if (!iterate()) {
      if (status == SolveStatus::Optimal) status = SolveStatus::IterLimit;
      return;
    }
    x.setZero(n);
    for (int i = 0; i < m; ++i)
      if (basis[i] < n) x(basis[i]) = D(i, D.cols() - 1);
  }

  // Rebuild the reduced-cost row for the current basis.
  void price_out() {
    const int ncols = static_cast<int>(D.cols()) - 1;
    for (int i = 0; i < m; ++i) {
      double cb = obj(basis[i]);
      if (cb != 0.0) obj -= cb * D.row(i).transpose();
    }
    // objective cell accumulates -value; keep sign convention obj(ncols) = -z
    (void)ncols;
  }

  bool artificial(int j) const { return j >= n + n_slack; }

  void pivot(int row, int col) {
    D.row(row) /= D(row, col);
    for (int i = 0; i < m; ++i) {
      if (i == row) continue;
      double f = D(i, col);
      if (f != 0.0) D.row(i) -= f * D.row(row);
    }
    double f = obj(col);
    if (f != 0.0) obj -= f * D.row(row).transpose();
    basis[row] = col;
  }

  // Returns false on iteration limit; sets status on unbounded.
  bool iterate() {
    const int ncols = static_cast<int>(D.cols()) - 1;
    for (;;) {
      if (++iterations > iter_limit) return false;
      bool bland = degenerate_pivots >= kBlandAfter;
      int enter = -1;
      if (bland) {
        for (int j = 0; j < ncols; ++j)
          if (obj(j) < -kCostTol) { enter = j; break; }
      } else {
        double best = -kCostTol;
        for (int j = 0; j < ncols; ++j)
          if (obj(j) < best) { best = obj(j); enter = j; }
      }
      if (enter < 0) return true;  // optimal

      int leave = -1;
      double best_ratio = 0.0;
      for (int i = 0; i < m; ++i) {
        double a = D(i, enter);
        if (a <= kPivotTol) continue;
        double ratio = D(i, ncols) / a;
        if (leave < 0 || ratio < best_ratio - 1e-12 ||
            (std::abs(ratio - best_ratio) <= 1e-12 &&
             basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave < 0) { status = SolveStatus::Unbounded; return true; }
      if (best_ratio <= kPivotTol) ++degenerate_pivots;
      pivot(leave, enter);
    }
  }

  // After phase 1: pivot leftover artificials out of the basis, or zero the
  // redundant row when no structural/slack coefficient remains.
  void purge_artificials() {
    const int ncols = static_cast<int>(D.cols()) - 1;
    for (int i = 0; i < m; ++i) {
      if (!artificial(basis[i])) continue;
      int col = -1;
      for (int j = 0; j < n + n_slack; ++j)
        if (std::abs(D(i, j)) > 1e-7) { col = j; break; }
      if (col >= 0) {
        pivot(i, col);
      } else {
        D.row(i).setZero();  // redundant constraint
        D(i, basis[i]) = 1.0;
      }
    }
    // forbid artificials from re-entering
    for (int i = 0; i < m; ++i)
      for (int j = n + n_slack; j < ncols; ++j) D(i, j) = 0.0;
  }
};

struct TransformedLp {
  Eigen::MatrixXd A;
  Eigen::VectorXd b, c;
  Eigen::VectorXd lb;              // finite entries shifted out
  std::vector<int> free_vars;     // split into x+ - x-
  int n_orig = 0;
};

// Bring an LpInstance to standard form: shift finite lower bounds to zero,
// split variables with no lower-bound row, drop the (now implied) pure
// lower-bound rows.
TransformedLp to_standard_form(const LpInstance& inst) {
  const Polyhedron& p = inst.poly;
  const int d = p.dim();
  if (inst.objective.size() != d)
    throw std::invalid_argument("objective length != polyhedron dimension");
  BoundInfo bounds = extract_bounds(p);

  TransformedLp t;
  t.n_orig = d;
  t.lb = bounds.lower;
  for (int j = 0; j < d; ++j)
    if (!std::isfinite(bounds.lower(j))) {
      t.lb(j) = 0.0;
      t.free_vars.push_back(j);
    }

  // rows to keep: everything except pure lower-bound rows
  std::vector<int> keep;
  for (int i = 0; i < p.rows(); ++i) {
    int nz = -1;
    bool single = true;
    for (int j = 0; j < d; ++j)
      if (p.G(i, j) != 0.0) {
        if (nz >= 0) { single = false; break; }
        nz = j;
      }
    bool lower_row = single && nz >= 0 && p.G(i, nz) < 0.0 &&
                     std::isfinite(bounds.lower(nz));
    if (!lower_row) keep.push_back(i);
  }

  const int nf = static_cast<int>(t.free_vars.size());
  const int ncols = d + nf;
  t.A.setZero(static_cast<int>(keep.size()), ncols);
  t.b.resize(static_cast<int>(keep.size()));
  t.c.setZero(ncols);
  t.c.head(d) = inst.objective;
  for (int f = 0; f < nf; ++f) t.c(d + f) = -inst.objective(t.free_vars[f]);

  for (int r = 0; r < static_cast<int>(keep.size()); ++r) {
    int i = keep[r];
    t.A.block(r, 0, 1, d) = p.G.row(i);
    for (int f = 0; f < nf; ++f)
      t.A(r, d + f) = -p.G(i, t.free_vars[f]);
    t.b(r) = p.g(i) - p.G.row(i).dot(t.lb);
  }
  return t;
}

Eigen::VectorXd recover_point(const TransformedLp& t,
                              const Eigen::VectorXd& xstd) {
  Eigen::VectorXd z = t.lb;
  z += xstd.head(t.n_orig);
  for (int f = 0; f < static_cast<int>(t.free_vars.size()); ++f)
    z(t.free_vars[f]) -= xstd(t.n_orig + f);
  return z;
}

}  // namespace

LpSolution solve_lp(const LpInstance& inst) {
  TransformedLp t = to_standard_form(inst);
  StandardSimplex s(t.A, t.b, t.c);

  LpSolution sol;
  sol.status = s.status;
  if (s.status != SolveStatus::Optimal) {
    sol.value = s.status == SolveStatus::Unbounded ? -kInf : kInf;
    return sol;
  }
  sol.point = recover_point(t, s.x);
  sol.value = inst.objective.dot(sol.point);
  for (int i = 0; i < inst.poly.rows(); ++i) {
    double scale = std::max(1.0, inst.poly.G.row(i).norm());
    double slack = inst.poly.g(i) - inst.poly.G.row(i).dot(sol.point);
    if (std::abs(slack) <= kFeasTol * scale) sol.active_rows.push_back(i);
  }
  return sol;
}

namespace {

struct BnbNode {
  double bound;
  long id;
  // (variable, is_upper, value): extra bound rows accumulated on this path
  std::vector<std::tuple<int, bool, double>> cuts;
};

struct NodeOrder {
  bool operator()(const BnbNode& a, const BnbNode& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;  // min-heap on bound
    return a.id > b.id;
  }
};

LpInstance with_cuts(const LpInstance& inst,
                     const std::vector<std::tuple<int, bool, double>>& cuts) {
  LpInstance out = inst;
  const int d = inst.poly.dim();
  const int extra = static_cast<int>(cuts.size());
  if (extra == 0) return out;
  out.poly.G.conservativeResize(inst.poly.rows() + extra, d);
  out.poly.g.conservativeResize(inst.poly.rows() + extra);
  for (int i = 0; i < extra; ++i) {
    auto [var, is_upper, val] = cuts[i];
    Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(d);
    row(var) = is_upper ? 1.0 : -1.0;
    out.poly.G.row(inst.poly.rows() + i) = row;
    out.poly.g(inst.poly.rows() + i) = is_upper ? val : -val;
  }
  return out;
}

}  // namespace

MilpSolution solve_milp(const LpInstance& inst, const MilpOptions& opt) {
  MilpSolution out;
  const int d = inst.poly.dim();
  std::vector<bool> flags = inst.integer;
  flags.resize(d, false);

  auto fractional = [&](const Eigen::VectorXd& z) {
    int best = -1;
    double best_dist = opt.int_tol;
    for (int j = 0; j < d; ++j) {
      if (!flags[j]) continue;
      double frac = z(j) - std::floor(z(j));
      double dist = std::min(frac, 1.0 - frac);
      if (dist > best_dist + 1e-15 &&
          (best < 0 || std::abs(frac - 0.5) <
                           std::abs((z(best) - std::floor(z(best))) - 0.5) -
                               1e-15)) {
        best = j;
      } else if (dist > best_dist + 1e-15 && best < 0) {
        best = j;
      }
    }
    return best;
  };

  LpSolution root = solve_lp(inst);
  if (root.status != SolveStatus::Optimal) {
    out.status = root.status;
    return out;
  }

  double incumbent = kInf;
  Eigen::VectorXd best_point;
  long node_id = 0;
  std::priority_queue<BnbNode, std::vector<BnbNode>, NodeOrder> heap;
  heap.push({root.value, node_id++, {}});

  long solved = 0;
  bool limited = false;
  while (!heap.empty()) {
    BnbNode node = heap.top();
    heap.pop();
    if (node.bound >= incumbent - 1e-9) continue;

    LpSolution rel = node.cuts.empty() ? root : LpSolution{};
    if (!node.cuts.empty()) {
      if (solved >= opt.node_limit) { limited = true; break; }
      ++solved;
      rel = solve_lp(with_cuts(inst, node.cuts));
    }
    if (rel.status == SolveStatus::Infeasible) continue;
    if (rel.status != SolveStatus::Optimal) { out.status = rel.status; return out; }
    if (rel.value >= incumbent - 1e-9) continue;

    int branch_var = fractional(rel.point);
    if (branch_var < 0) {
      // integral within tolerance: snap and accept
      Eigen::VectorXd z = rel.point;
      for (int j = 0; j < d; ++j)
        if (flags[j]) z(j) = std::round(z(j));
      double value = inst.objective.dot(z);
      if (value < incumbent) {
        incumbent = value;
        best_point = z;
      }
      continue;
    }
    double v = rel.point(branch_var);
    for (bool upper : {true, false}) {
      BnbNode child{rel.value, node_id++, node.cuts};
      child.cuts.emplace_back(branch_var, upper,
                              upper ? std::floor(v) : std::ceil(v));
      heap.push(std::move(child));
    }
  }

  out.nodes = solved;
  if (!std::isfinite(incumbent)) {
    out.status = limited ? SolveStatus::NodeLimit : SolveStatus::Infeasible;
    return out;
  }
  out.status = limited ? SolveStatus::NodeLimit : SolveStatus::Optimal;
  out.value = incumbent;
  out.point = best_point;
  return out;
}

ChebyshevResult chebyshev_center(const Polyhedron& p) {
  const int d = p.dim();
  const int m = p.rows();
  LpInstance lp;
  lp.poly.n_first = p.n_first;
  lp.poly.G.setZero(m + 1, d + 1);
  lp.poly.g.resize(m + 1);
  for (int i = 0; i < m; ++i) {
    lp.poly.G.block(i, 0, 1, d) = p.G.row(i);
    lp.poly.G(i, d) = p.G.row(i).norm();
    lp.poly.g(i) = p.g(i);
  }
  lp.poly.G(m, d) = -1.0;  // r >= 0
  lp.poly.g(m) = 0.0;
  lp.objective = Eigen::VectorXd::Zero(d + 1);
  lp.objective(d) = -1.0;  // maximize r

  LpSolution sol = solve_lp(lp);
  ChebyshevResult out;
  out.status = sol.status;
  if (sol.status == SolveStatus::Optimal) {
    out.center = sol.point.head(d);
    out.inradius = sol.point(d);
  } else if (sol.status == SolveStatus::Unbounded) {
    out.inradius = kInf;
  }
  return out;
}

std::vector<Eigen::VectorXd> enumerate_vertices(const Polyhedron& p,
                                                double tol) {
  const int d = p.dim();
  const int m = p.rows();
  if (d > 6 || m > 40)
    throw std::invalid_argument("enumerate_vertices: instance beyond test-scale guard");

  std::vector<Eigen::VectorXd> verts;
  std::vector<int> idx(d);
  // iterate over all d-subsets of rows
  for (int j = 0; j < d; ++j) idx[j] = j;
  auto advance = [&]() {
    int j = d - 1;
    while (j >= 0 && idx[j] == m - d + j) --j;
    if (j < 0) return false;
    ++idx[j];
    for (int k = j + 1; k < d; ++k) idx[k] = idx[k - 1] + 1;
    return true;
  };
  if (m < d) return verts;

  Eigen::MatrixXd sub(d, d);
  Eigen::VectorXd rhs(d);
  do {
    for (int j = 0; j < d; ++j) {
      sub.row(j) = p.G.row(idx[j]);
      rhs(j) = p.g(idx[j]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
    lu.setThreshold(1e-10);
    if (lu.rank() < d) continue;
    Eigen::VectorXd z = lu.solve(rhs);
    if (!z.allFinite() || !p.contains(z, tol)) continue;
    bool dup = false;
    for (const auto& v : verts)
      if ((v - z).lpNorm<Eigen::Infinity>() <=
          tol * std::max(1.0, z.lpNorm<Eigen::Infinity>())) {
        dup = true;
        break;
      }
    if (!dup) verts.push_back(std::move(z));
  } while (advance());
  return verts;
}

}  // namespace scenred
