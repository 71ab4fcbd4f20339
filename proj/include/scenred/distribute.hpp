#pragma once

#include <atomic>
#include <string>
#include <vector>

#include "scenred/coordinates.hpp"
#include "scenred/model.hpp"

namespace scenred {

// Frame protocol (TCP): 4-byte big-endian length, then that many bytes of
// UTF-8 JSON. Frame types: hello, ready, header, job, result, shutdown,
// error. The program header is sent once per connection; jobs carry only
// the scenario payload.
constexpr int kProtocolVersion = 1;

struct WorkerEndpoint {
  std::string host;
  int port = 0;
};

WorkerEndpoint parse_endpoint(const std::string& spec);

// In-process pool. Results are assembled in scenario-index order and are
// bit-identical to a serial run for any worker count.
std::vector<Coordinate> run_parallel_coordinates(
    const StochasticProgram& program, const std::vector<Scenario>& scenarios,
    const CoordinateConfig& cfg, int workers);

struct WorkerOptions {
  std::string host = "0.0.0.0";
  int port = 0;                  // 0 binds an ephemeral port
  std::atomic<int>* bound_port = nullptr;  // reports the actual port
  std::atomic<bool>* stop = nullptr;       // cooperative stop for tests
};

// Blocking worker loop: accepts connections, performs the hello/ready
// handshake, caches the header, answers jobs until a shutdown frame arrives.
void serve_worker(const WorkerOptions& opt);

struct RemoteOutcome {
  std::vector<Coordinate> coords;   // index order; complete iff ok
  bool ok = false;
  int completed = 0;
  std::string error;
};

// Remote fan-out with at-least-once dispatch and first-result-wins
// deduplication by scenario index; jobs are reassigned when a worker
// connection dies. Fails only when every worker is lost, returning the
// completed prefix for resumption.
RemoteOutcome coordinate_remote(const std::vector<WorkerEndpoint>& workers,
                                const StochasticProgram& program,
                                const std::vector<Scenario>& scenarios,
                                const CoordinateConfig& cfg);

}  // namespace scenred
