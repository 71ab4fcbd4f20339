#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "scenred/clustering.hpp"
#include "scenred/coordinates.hpp"
#include "scenred/model.hpp"
#include "scenred/saa.hpp"

namespace scenred {

struct ProblemFile {
  StochasticProgram program;
  std::vector<Scenario> scenarios;   // empty when only a distribution is given
  DistributionSpec distribution;     // empty marginals when explicit scenarios
  bool has_distribution = false;
};

ProblemFile load_problem(const std::string& path);
ProblemFile parse_problem(const std::string& text);

std::string problem_to_json(const StochasticProgram& program,
                            const std::vector<Scenario>& scenarios,
                            const DistributionSpec* dist = nullptr);

std::string cluster_result_to_json(const ClusterResult& result,
                                   const std::vector<Scenario>& scenarios);

std::string solve_report_to_json(const SolveReport& report,
                                 bool with_timings = false);

std::string consistency_to_json(const ConsistencyReport& report);

// Wire helpers shared by distribute: programs/scenarios/configs embedded in
// protocol frames use the same schema as the problem file.
nlohmann::json program_to_json_obj(const StochasticProgram& program);
StochasticProgram program_from_json_obj(const nlohmann::json& j);
nlohmann::json scenario_to_json_obj(const Scenario& s);
Scenario scenario_from_json_obj(const nlohmann::json& j);
nlohmann::json coordinate_config_to_json_obj(const CoordinateConfig& cfg);
CoordinateConfig coordinate_config_from_json_obj(const nlohmann::json& j);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace scenred
