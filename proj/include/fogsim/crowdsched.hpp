#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "fogsim/simcore.hpp"
#include "fogsim/workload.hpp"

namespace fogsim {

enum class Placement { Fog, Cloud };

/// The queue has no finite mean wait (utilization >= 1).
class UnstableQueue : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class CrowdMode { Hybrid, FogOnly, CloudOnly };

/// What the admission rule compares the fog estimate against.
enum class AdmitThreshold {
  OneWay,     ///< cloud_rtt / 2
  RoundTrip,  ///< cloud_rtt
};

std::string_view to_string(CrowdMode mode);
std::string_view to_string(AdmitThreshold threshold);

struct Task {
  std::size_t id = 0;
  SimTime arrival = 0.0;
  double workload = 0.0;
  Placement placement = Placement::Cloud;
  SimTime first_run = 0.0;
  SimTime completion = 0.0;
  double feedback = 0.0;  ///< ms, as seen by the user

  double wait() const { return first_run - arrival; }
};

struct CrowdConfig {
  double fog_capacity = 10.0;    ///< workload units per ms
  double cloud_capacity = 10.0;  ///< workload units per ms
  SimTime fog_rtt = 6.0;
  SimTime cloud_rtt = 15.0;
  ArrivalConfig arrivals{};
  WorkloadConfig workloads{};
  CrowdMode mode = CrowdMode::Hybrid;
  AdmitThreshold admit_threshold = AdmitThreshold::OneWay;

  void validate() const;
  /// Delay the admission rule must beat for a task to stay at the fog.
  SimTime admission_limit() const;
  /// rho = lambda * E[w] / C_f; the pooled fog queue is stable iff rho < 1.
  double fog_utilization() const;
};

struct FogJob {
  std::size_t task = 0;
  double workload = 0.0;
};

struct InService {
  std::size_t task = 0;
  double remaining = 0.0;  ///< workload still to be processed
};

/// Pooled, non-preemptive FIFO fog server.
struct FogQueueState {
  std::optional<InService> in_service;
  std::deque<FogJob> waiting;
  double waiting_workload = 0.0;

  void enqueue(FogJob job);
  FogJob dequeue();
  double backlog() const;
};

/// Time until a task joining the queue now would start: backlog / C_f.
/// Returns +inf when C_f is zero (fog unavailable).
double estimate_fog_response(const FogQueueState& state, double fog_capacity);

/// Master-controller rule for Hybrid mode: Fog iff the estimate is strictly
/// below the cloud delivery time.
Placement admit(const Task& task, const FogQueueState& state,
                const CrowdConfig& cfg);

struct CrowdResult {
  std::vector<Task> tasks;
  double avg_feedback = 0.0;
  double fog_share = 0.0;
  double avg_fog_wait = 0.0;  ///< mean first_run - arrival over fog tasks
  std::size_t fog_count = 0;
  bool unstable = false;      ///< FogOnly run at utilization >= 1
};

CrowdResult run_crowd_scenario(const CrowdConfig& cfg, std::uint64_t seed);

/// Pollaczek-Khinchine mean wait in queue for Poisson(rate) arrivals and
/// service time S = w / capacity with w ~ U[lo, hi).
/// Throws UnstableQueue when rho >= 1.
double analytic_mg1_wait(double rate, double lo, double hi, double capacity);

}  // namespace fogsim
