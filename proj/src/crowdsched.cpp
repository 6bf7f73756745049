#include "fogsim/crowdsched.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace fogsim {

std::string_view to_string(CrowdMode mode) {
  switch (mode) {
    case CrowdMode::Hybrid: return "hybrid";
    case CrowdMode::FogOnly: return "fog_only";
    case CrowdMode::CloudOnly: return "cloud_only";
  }
  return "?";
}

std::string_view to_string(AdmitThreshold threshold) {
  return threshold == AdmitThreshold::OneWay ? "oneway" : "roundtrip";
}

void CrowdConfig::validate() const {
  arrivals.validate();
  workloads.validate();
  require(std::isfinite(fog_capacity) && fog_capacity >= 0.0,
          "fog capacity must be >= 0");
  require(std::isfinite(cloud_capacity) && cloud_capacity > 0.0,
          "cloud capacity must be > 0");
  require(std::isfinite(fog_rtt) && fog_rtt > 0.0, "fog rtt must be > 0");
  require(std::isfinite(cloud_rtt) && cloud_rtt > 0.0, "cloud rtt must be > 0");
  if (mode == CrowdMode::FogOnly) {
    require(fog_capacity > 0.0, "fog-only mode requires fog capacity > 0");
  }
}

SimTime CrowdConfig::admission_limit() const {
  return admit_threshold == AdmitThreshold::OneWay ? cloud_rtt / 2.0 : cloud_rtt;
}

double CrowdConfig::fog_utilization() const {
  if (fog_capacity <= 0.0) return std::numeric_limits<double>::infinity();
  return arrivals.rate * workloads.mean() / fog_capacity;
}

void FogQueueState::enqueue(FogJob job) {
  waiting_workload += job.workload;
  waiting.push_back(job);
}

FogJob FogQueueState::dequeue() {
  FogJob job = waiting.front();
  waiting.pop_front();
  // reset on empty so rounding drift cannot accumulate across busy periods
  waiting_workload = waiting.empty() ? 0.0 : waiting_workload - job.workload;
  return job;
}

double FogQueueState::backlog() const {
  return (in_service ? in_service->remaining : 0.0) + waiting_workload;
}

double estimate_fog_response(const FogQueueState& state, double fog_capacity) {
  require(fog_capacity >= 0.0, "estimate_fog_response: capacity must be >= 0");
  if (fog_capacity == 0.0) return std::numeric_limits<double>::infinity();
  return state.backlog() / fog_capacity;
}

Placement admit(const Task& /*task*/, const FogQueueState& state,
                const CrowdConfig& cfg) {
  const double estimate = estimate_fog_response(state, cfg.fog_capacity);
  return estimate < cfg.admission_limit() ? Placement::Fog : Placement::Cloud;
}

namespace {

enum class CrowdEventKind { TaskArrival, FogCompletion };

struct CrowdEvent {
  CrowdEventKind kind;
  std::size_t task;
};

class CrowdSimulation {
 public:
  CrowdSimulation(const CrowdConfig& cfg, std::uint64_t seed) : cfg_(cfg) {
    RngStream arrival_stream(derive_seed(seed, 0));
    RngStream workload_stream(derive_seed(seed, 1));
    const auto times = exp_interarrivals(cfg.arrivals, arrival_stream);
    const auto loads = uniform_workloads(cfg.workloads, times.size(), workload_stream);
    tasks_.resize(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
      tasks_[i].id = i;
      tasks_[i].arrival = times[i];
      tasks_[i].workload = loads[i];
    }
  }

  std::vector<Task> run() {
    if (!tasks_.empty()) events_.schedule(tasks_[0].arrival, {CrowdEventKind::TaskArrival, 0});
    while (auto ev = events_.pop_next()) {
      switch (ev->payload.kind) {
        case CrowdEventKind::TaskArrival: on_arrival(ev->payload.task); break;
        case CrowdEventKind::FogCompletion: on_completion(ev->payload.task); break;
      }
    }
    return std::move(tasks_);
  }

 private:
  void on_arrival(std::size_t id) {
    if (id + 1 < tasks_.size()) {
      events_.schedule(tasks_[id + 1].arrival, {CrowdEventKind::TaskArrival, id + 1});
    }
    Task& task = tasks_[id];
    task.placement = place(task);
    if (task.placement == Placement::Cloud) {
      const double processing = task.workload / cfg_.cloud_capacity;
      task.first_run = task.arrival;
      task.completion = task.arrival + processing;
      task.feedback = cfg_.cloud_rtt + processing;
      return;
    }
    if (fog_.in_service) {
      fog_.enqueue({id, task.workload});
    } else {
      start(id);
    }
  }

  void on_completion(std::size_t id) {
    Task& task = tasks_[id];
    task.completion = events_.now();
    task.feedback = cfg_.fog_rtt + task.wait() + task.workload / cfg_.fog_capacity;
    fog_.in_service.reset();
    if (!fog_.waiting.empty()) start(fog_.dequeue().task);
  }

  void start(std::size_t id) {
    Task& task = tasks_[id];
    const SimTime now = events_.now();
    task.first_run = now;
    service_end_ = now + task.workload / cfg_.fog_capacity;
    fog_.in_service = InService{id, task.workload};
    events_.schedule(service_end_, {CrowdEventKind::FogCompletion, id});
  }

  Placement place(const Task& task) {
    switch (cfg_.mode) {
      case CrowdMode::FogOnly: return Placement::Fog;
      case CrowdMode::CloudOnly: return Placement::Cloud;
      case CrowdMode::Hybrid: break;
    }
    if (fog_.in_service) {
      const double left = (service_end_ - events_.now()) * cfg_.fog_capacity;
      fog_.in_service->remaining = std::max(0.0, left);
    }
    return admit(task, fog_, cfg_);
  }

  const CrowdConfig& cfg_;
  std::vector<Task> tasks_;
  EventQueue<CrowdEvent> events_;
  FogQueueState fog_;
  SimTime service_end_ = 0.0;
};

}  // namespace

CrowdResult run_crowd_scenario(const CrowdConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  CrowdResult result;
  result.tasks = CrowdSimulation(cfg, seed).run();
  result.unstable = cfg.mode == CrowdMode::FogOnly && cfg.fog_utilization() >= 1.0;

  double feedback_sum = 0.0, wait_sum = 0.0;
  for (const Task& t : result.tasks) {
    feedback_sum += t.feedback;
    if (t.placement == Placement::Fog) {
      ++result.fog_count;
      wait_sum += t.wait();
    }
  }
  const auto n = static_cast<double>(result.tasks.size());
  if (n > 0) {
    result.avg_feedback = feedback_sum / n;
    result.fog_share = static_cast<double>(result.fog_count) / n;
  }
  if (result.fog_count > 0) result.avg_fog_wait = wait_sum / static_cast<double>(result.fog_count);
  return result;
}

double analytic_mg1_wait(double rate, double lo, double hi, double capacity) {
  require(rate >= 0.0 && std::isfinite(rate), "analytic_mg1_wait: rate must be >= 0");
  WorkloadConfig{lo, hi}.validate();
  if (rate == 0.0) return 0.0;
  require(capacity >= 0.0, "analytic_mg1_wait: capacity must be >= 0");
  const WorkloadConfig w{lo, hi};
  if (capacity == 0.0 || rate * w.mean() >= capacity) {
    throw UnstableQueue("analytic_mg1_wait: utilization >= 1, no finite mean wait");
  }
  const double rho = rate * w.mean() / capacity;
  const double service_second_moment = w.second_moment() / (capacity * capacity);
  return rate * service_second_moment / (2.0 * (1.0 - rho));
}

}  // namespace fogsim
