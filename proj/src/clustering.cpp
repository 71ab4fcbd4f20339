#include "scenred/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace scenred {

namespace {

double kahan(const std::vector<double>& xs) {
  double sum = 0.0, comp = 0.0;
  for (double x : xs) {
    double y = x - comp;
    double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum;
}

struct CellKey {
  std::int64_t x, y;
  bool operator==(const CellKey& o) const { return x == o.x && y == o.y; }
};

struct CellKeyHash {
  size_t operator()(const CellKey& k) const {
    return std::hash<std::int64_t>()(k.x) * 1000003u ^
           std::hash<std::int64_t>()(k.y);
  }
};

// Exact coordinate key for delta = 0: merge only bit-equal pairs.
struct ExactKey {
  double kappa, sigma;
  bool operator==(const ExactKey& o) const {
    return kappa == o.kappa && sigma == o.sigma;
  }
};

struct ExactKeyHash {
  size_t operator()(const ExactKey& k) const {
    return std::hash<double>()(k.kappa) * 1000003u ^
           std::hash<double>()(k.sigma);
  }
};

}  // namespace

ClusterResult grid_cluster(const std::vector<Coordinate>& coords,
                           const std::vector<double>& probabilities,
                           const GridConfig& cfg) {
  if (coords.empty()) throw std::invalid_argument("empty coordinate list");
  if (coords.size() != probabilities.size())
    throw std::invalid_argument("coordinates/probabilities length mismatch");
  if (cfg.delta < 0.0) throw std::invalid_argument("delta must be >= 0");

  ClusterResult result;
  result.config = cfg;
  result.K = static_cast<int>(coords.size());

  std::vector<int> usable;  // positions into coords
  for (int i = 0; i < result.K; ++i) {
    if (coords[i].usable()) {
      if (!std::isfinite(coords[i].kappa) || !std::isfinite(coords[i].sigma))
        throw std::invalid_argument("non-finite usable coordinate");
      usable.push_back(i);
    }
  }

  double ax = 0.0, ay = 0.0;
  if (cfg.anchor == AnchorRule::MinCorner && !usable.empty()) {
    ax = coords[usable[0]].kappa;
    ay = coords[usable[0]].sigma;
    for (int i : usable) {
      ax = std::min(ax, coords[i].kappa);
      ay = std::min(ay, coords[i].sigma);
    }
  }

  // bucket usable coordinates
  std::vector<std::pair<CellKey, std::vector<int>>> buckets;
  if (cfg.delta > 0.0) {
    const double side = cfg.delta / 2.0;
    std::unordered_map<CellKey, int, CellKeyHash> where;
    for (int i : usable) {
      CellKey key{static_cast<std::int64_t>(
                      std::floor((coords[i].kappa - ax) / side)),
                  static_cast<std::int64_t>(
                      std::floor((coords[i].sigma - ay) / side))};
      auto it = where.find(key);
      if (it == where.end()) {
        where.emplace(key, static_cast<int>(buckets.size()));
        buckets.push_back({key, {i}});
      } else {
        buckets[it->second].second.push_back(i);
      }
    }
  } else {
    std::unordered_map<ExactKey, int, ExactKeyHash> where;
    std::int64_t next = 0;
    for (int i : usable) {
      ExactKey key{coords[i].kappa, coords[i].sigma};
      auto it = where.find(key);
      if (it == where.end()) {
        where.emplace(key, static_cast<int>(buckets.size()));
        buckets.push_back({CellKey{next++, 0}, {i}});
      } else {
        buckets[it->second].second.push_back(i);
      }
    }
  }

  // deterministic cell order: by lowest member scenario index
  std::sort(buckets.begin(), buckets.end(),
            [&](const auto& a, const auto& b) {
              return coords[a.second.front()].k < coords[b.second.front()].k;
            });

  for (auto& [key, members] : buckets) {
    ClusterCell cell;
    cell.cell_x = key.x;
    cell.cell_y = key.y;
    std::sort(members.begin(), members.end(),
              [&](int a, int b) { return coords[a].k < coords[b].k; });

    std::vector<double> probs;
    probs.reserve(members.size());
    for (int i : members) probs.push_back(probabilities[i]);
    cell.probability = kahan(probs);

    int rep_pos = members.front();
    if (cfg.representative == RepresentativeRule::NearestCellCentroid &&
        members.size() > 1 && cell.probability > 0.0) {
      double ck = 0.0, cs = 0.0;
      for (int i : members) {
        ck += probabilities[i] * coords[i].kappa;
        cs += probabilities[i] * coords[i].sigma;
      }
      ck /= cell.probability;
      cs /= cell.probability;
      double best = kInf;
      for (int i : members) {
        double dk = coords[i].kappa - ck, ds = coords[i].sigma - cs;
        double dist = dk * dk + ds * ds;
        if (dist < best - 1e-15) {
          best = dist;
          rep_pos = i;
        }
      }
    }
    cell.representative = coords[rep_pos].k;
    for (int i : members) {
      cell.members.push_back(coords[i].k);
      if (i != rep_pos) {
        result.clustered.push_back(coords[i].k);
        result.representative_of[coords[i].k] = cell.representative;
      }
    }
    result.representatives.push_back(cell.representative);
    result.cells.push_back(std::move(cell));
  }

  // degenerate/infeasible scenarios bypass the grid and keep themselves
  for (int i = 0; i < result.K; ++i) {
    if (coords[i].usable()) continue;
    ClusterCell cell;
    cell.cell_x = cell.cell_y = -1;
    cell.bypass = true;
    cell.members = {coords[i].k};
    cell.representative = coords[i].k;
    cell.probability = probabilities[i];
    result.representatives.push_back(coords[i].k);
    result.cells.push_back(std::move(cell));
  }

  std::sort(result.representatives.begin(), result.representatives.end());
  std::sort(result.clustered.begin(), result.clustered.end());
  result.K_delta = static_cast<int>(result.clustered.size());

  double D = 0.0;
  for (int i : usable) D = std::max(D, coords[i].sigma - coords[i].kappa);
  result.D = D;
  const double K = static_cast<double>(result.K);
  const double Kd = static_cast<double>(result.K_delta);
  result.beta = cfg.delta * Kd / (2.0 * K) + Kd * D / (2.0 * K);
  result.beta_prime = Kd * (cfg.delta + 2.0 * D) / (2.0 * K);
  return result;
}

std::vector<Scenario> select_representatives(
    const ClusterResult& result, const std::vector<Scenario>& scenarios) {
  std::unordered_map<int, const Scenario*> by_index;
  for (const auto& s : scenarios) by_index[s.index] = &s;

  std::vector<std::pair<int, double>> reps;  // (index, aggregated prob)
  reps.reserve(result.cells.size());
  for (const auto& cell : result.cells)
    reps.emplace_back(cell.representative, cell.probability);
  std::sort(reps.begin(), reps.end());

  std::vector<Scenario> out;
  out.reserve(reps.size());
  for (auto& [index, prob] : reps) {
    auto it = by_index.find(index);
    if (it == by_index.end())
      throw std::invalid_argument(
          "cluster result does not match the scenario list (index " +
          std::to_string(index) + ")");
    Scenario s = *it->second;
    s.prob = prob;
    out.push_back(std::move(s));
  }
  return out;
}

std::pair<double, double> error_bound(const ClusterResult& result) {
  return {result.beta, result.beta_prime};
}

}  // namespace scenred
