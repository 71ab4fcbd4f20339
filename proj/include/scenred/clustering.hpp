#pragma once

#include <map>
#include <vector>

#include "scenred/coordinates.hpp"
#include "scenred/model.hpp"

namespace scenred {

enum class AnchorRule { MinCorner, Origin };
enum class RepresentativeRule { NearestCellCentroid, LowestIndex };

struct GridConfig {
  double delta = 0.0;  // 0 merges only exactly-equal coordinates
  AnchorRule anchor = AnchorRule::MinCorner;
  RepresentativeRule representative = RepresentativeRule::NearestCellCentroid;
};

struct ClusterCell {
  std::int64_t cell_x = 0, cell_y = 0;
  bool bypass = false;          // degenerate/infeasible pass-through
  std::vector<int> members;     // scenario indices, ascending
  int representative = -1;
  double probability = 0.0;     // aggregated over members
};

struct ClusterResult {
  GridConfig config;
  std::vector<ClusterCell> cells;       // deterministic order
  std::map<int, int> representative_of; // clustered index -> representative
  std::vector<int> representatives;     // ascending (incl. degenerate pass-through)
  std::vector<int> clustered;           // ascending; the replaced indices
  int K = 0;                            // original sample size
  int K_delta = 0;                      // number of clustered-away scenarios
  double D = 0.0;                       // empirical max_k (sigma - kappa)
  double beta = 0.0;                    // delta*K_delta/(2K) + K_delta*D/(2K)
  double beta_prime = 0.0;              // K_delta*(delta + 2D)/(2K)
};

// Square cells of side delta/2 anchored at (min kappa, min sigma);
// degenerate/infeasible scenarios bypass the grid and represent themselves.
ClusterResult grid_cluster(const std::vector<Coordinate>& coords,
                           const std::vector<double>& probabilities,
                           const GridConfig& cfg);

// Reduced scenario list: each representative keeps its own data and carries
// the summed probability of its cell, ordered by representative index.
std::vector<Scenario> select_representatives(
    const ClusterResult& result, const std::vector<Scenario>& scenarios);

// (beta, beta_prime) recomputed from a ClusterResult.
std::pair<double, double> error_bound(const ClusterResult& result);

}  // namespace scenred
