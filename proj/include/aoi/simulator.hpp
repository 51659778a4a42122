#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "aoi/analytic.hpp"
#include "aoi/model.hpp"

namespace aoi::sim {

enum class Mode {
  kTrueSystem,
  // An ordinary arrival that finds a priority packet in service with no
  // ordinary backlog discards that priority packet and starts service.
  kFictitiousSystem,
};

enum class PreemptionRule {
  kResume,    // a preempted ordinary packet keeps its remaining requirement
  kResample,  // it draws a fresh requirement when it re-enters service
};

struct SimConfig {
  std::uint64_t seed = 1;
  std::uint64_t target_deliveries = 1'000'000;
  std::uint64_t warmup_deliveries = 1'000;
  Mode mode = Mode::kTrueSystem;
  PreemptionRule preemption = PreemptionRule::kResume;
  // Number of batch means behind the standard errors.
  std::size_t batches = 32;
  // Keep every event and every ordinary delivery (debug runs only).
  bool record_trace = false;
};

enum class EventKind { kArrivalOrdinary, kArrivalPriority, kCompletionOrdinary, kCompletionPriority };
enum class ServerState { kIdle, kServingOrdinary, kServingPriority };

struct EventRecord {
  double time = 0.0;
  EventKind kind = EventKind::kArrivalOrdinary;
  ServerState serving = ServerState::kIdle;  // after the event
  std::size_t ordinary_in_system = 0;        // after the event
};

struct DeliveryRecord {
  double generated = 0.0;           // t_j
  double delivered = 0.0;           // D_j
  double previous_generated = 0.0;  // t_{j-1}
  double peak = 0.0;                // age just before the delivery
  double virtual_service = 0.0;     // D_j - max(D_{j-1}, t_j)
};

// Outcome counts of the head-of-line races inside the measurement window.
struct RaceCounts {
  std::uint64_t ordinary_completed = 0;
  std::uint64_t ordinary_preempted = 0;
  std::uint64_t priority_completed = 0;
  std::uint64_t priority_replaced = 0;
};

struct SimResult {
  double avg_age_1 = 0.0;
  double avg_peak_1 = 0.0;
  double avg_age_2 = 0.0;
  double age_1_stderr = 0.0;  // batch means; NaN with fewer than two batches
  double peak_1_stderr = 0.0;
  double time_avg_n = 0.0;
  // occupancy_ordinary[i]: time fraction in q_i (i = 0 is idle);
  // occupancy_priority[i]: time fraction in q'_i (index 0 unused, always 0).
  std::vector<double> occupancy_ordinary;
  std::vector<double> occupancy_priority;
  double z_mean = 0.0;
  double z_m2 = 0.0;
  double unblocked_mean = 0.0;  // Z over packets that did not find q'_1
  double blocked_mean = 0.0;    // Z over packets that found q'_1
  double blocked_fraction = 0.0;
  double mean_system_time_1 = 0.0;
  RaceCounts races;
  std::uint64_t deliveries_observed = 0;
  std::uint64_t priority_deliveries = 0;
  double sim_time = 0.0;

  std::vector<EventRecord> trace;
  std::vector<DeliveryRecord> delivery_log;

  double occupancy(bool priority_row, std::size_t level) const;
};

// Throws InvalidConfig for an empty measurement window or zero batches.
SimResult run(const ModelParams& params, const SimConfig& config);

const char* to_string(EventKind kind);
const char* to_string(ServerState state);

// One line per event: "<time> <kind> <serving> <ordinary_in_system>".
void write_event_log(std::ostream& out, const std::vector<EventRecord>& trace);

struct OccupancyReport {
  std::size_t max_level = 0;
  std::vector<double> ordinary_deviation;  // index 0..max_level
  std::vector<double> priority_deviation;  // index 1..max_level (0 unused)
  double max_deviation = 0.0;
  double empirical_idle = 0.0;
  bool converged = false;
};

OccupancyReport occupancy_check(const SimResult& result, const StationaryDistribution& dist,
                                std::size_t max_level = 5, double tolerance = 0.01);
// Unstable parameters report converged = false with no deviations.
OccupancyReport occupancy_check(const SimResult& result, const ModelParams& params,
                                std::size_t max_level = 5, double tolerance = 0.01);

}  // namespace aoi::sim
