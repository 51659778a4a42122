#include "aoi/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>
#include <ostream>

#include "aoi/errors.hpp"
#include "aoi/rng.hpp"

namespace aoi::sim {
namespace {

constexpr double kNever = std::numeric_limits<double>::infinity();

struct Pending {
  double generated;
  bool blocked;  // arrived to find q'_1
};

struct BatchMark {
  double age_integral;
  double time;
  double peak_sum;
  std::uint64_t peaks;
};

double batch_stderr(const std::vector<double>& values) {
  const auto n = static_cast<double>(values.size());
  if (values.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / (n - 1.0) / n);
}

class Simulation {
 public:
  Simulation(const ModelParams& params, const SimConfig& config)
      : params_(params),
        config_(config),
        arrivals1_(mix_seed(config.seed, 0)),
        arrivals2_(mix_seed(config.seed, 1)),
        service_(mix_seed(config.seed, 2)) {}

  SimResult run();

 private:
  void accumulate(double until);
  void on_arrival_ordinary();
  void on_arrival_priority();
  void on_completion_ordinary();
  void on_completion_priority();
  void start_ordinary();
  void open_window();
  void close_batch_if_due();
  void record(EventKind kind);

  bool measuring() const { return measuring_; }

  const ModelParams params_;
  const SimConfig config_;
  ExponentialSource arrivals1_;
  ExponentialSource arrivals2_;
  ExponentialSource service_;

  double clock_ = 0.0;
  double next_ordinary_ = kNever;
  double next_priority_ = kNever;
  double service_end_ = kNever;
  ServerState serving_ = ServerState::kIdle;
  std::deque<Pending> queue_;
  std::optional<double> frozen_remaining_;
  double priority_generated_ = 0.0;
  double last_generated_1_ = 0.0;
  double last_generated_2_ = 0.0;
  double last_delivery_1_ = 0.0;
  std::uint64_t deliveries_ = 0;

  bool measuring_ = false;
  double window_start_ = 0.0;
  double age_integral_1_ = 0.0;
  double age_integral_2_ = 0.0;
  double n_integral_ = 0.0;
  std::vector<double> time_ordinary_;
  std::vector<double> time_priority_;
  double peak_sum_ = 0.0;
  double z_sum_ = 0.0;
  double z_sq_sum_ = 0.0;
  double z_unblocked_sum_ = 0.0;
  double z_blocked_sum_ = 0.0;
  std::uint64_t blocked_deliveries_ = 0;
  double system_time_sum_ = 0.0;
  std::uint64_t measured_ = 0;
  std::uint64_t arrivals_seen_ = 0;
  std::uint64_t arrivals_blocked_ = 0;
  RaceCounts races_;
  std::uint64_t priority_deliveries_ = 0;

  std::uint64_t batch_size_ = 0;
  std::vector<BatchMark> marks_;

  std::vector<EventRecord> trace_;
  std::vector<DeliveryRecord> delivery_log_;
};

void Simulation::accumulate(double until) {
  const double dt = until - clock_;
  if (dt <= 0.0) return;
  // Age is linear between events, so the trapezoid is exact.
  age_integral_1_ += 0.5 * ((clock_ - last_generated_1_) + (until - last_generated_1_)) * dt;
  age_integral_2_ += 0.5 * ((clock_ - last_generated_2_) + (until - last_generated_2_)) * dt;
  const std::size_t n = queue_.size();
  n_integral_ += static_cast<double>(n) * dt;
  std::vector<double>& row = serving_ == ServerState::kServingPriority ? time_priority_ : time_ordinary_;
  const std::size_t level = serving_ == ServerState::kServingPriority ? n + 1 : n;
  if (row.size() <= level) row.resize(level + 1, 0.0);
  row[level] += dt;
}

void Simulation::start_ordinary() {
  serving_ = ServerState::kServingOrdinary;
  const double requirement = frozen_remaining_ ? *frozen_remaining_ : service_.draw(params_.mu1());
  frozen_remaining_.reset();
  service_end_ = clock_ + requirement;
}

void Simulation::on_arrival_ordinary() {
  const bool blocked = serving_ == ServerState::kServingPriority && queue_.empty();
  if (measuring()) {
    ++arrivals_seen_;
    if (blocked) ++arrivals_blocked_;
  }
  queue_.push_back({clock_, blocked});
  if (blocked && config_.mode == Mode::kFictitiousSystem) {
    serving_ = ServerState::kIdle;
    service_end_ = kNever;
  }
  if (serving_ == ServerState::kIdle) start_ordinary();
  next_ordinary_ = clock_ + arrivals1_.draw(params_.lambda1());
}

void Simulation::on_arrival_priority() {
  if (serving_ == ServerState::kServingPriority) {
    if (measuring()) ++races_.priority_replaced;
  } else if (serving_ == ServerState::kServingOrdinary) {
    if (measuring()) ++races_.ordinary_preempted;
    if (config_.preemption == PreemptionRule::kResume) frozen_remaining_ = service_end_ - clock_;
  }
  serving_ = ServerState::kServingPriority;
  priority_generated_ = clock_;
  service_end_ = clock_ + service_.draw(params_.mu2());
  next_priority_ = clock_ + arrivals2_.draw(params_.lambda2());
}

void Simulation::on_completion_ordinary() {
  const Pending packet = queue_.front();
  queue_.pop_front();
  const double peak = clock_ - last_generated_1_;
  const double z = clock_ - std::max(last_delivery_1_, packet.generated);
  if (config_.record_trace) {
    delivery_log_.push_back({packet.generated, clock_, last_generated_1_, peak, z});
  }
  if (measuring()) {
    ++races_.ordinary_completed;
    ++measured_;
    peak_sum_ += peak;
    z_sum_ += z;
    z_sq_sum_ += z * z;
    if (packet.blocked) {
      z_blocked_sum_ += z;
      ++blocked_deliveries_;
    } else {
      z_unblocked_sum_ += z;
    }
    system_time_sum_ += clock_ - packet.generated;
  }
  last_generated_1_ = packet.generated;
  last_delivery_1_ = clock_;
  ++deliveries_;
  if (measuring()) close_batch_if_due();
  if (!measuring() && deliveries_ == config_.warmup_deliveries) open_window();

  if (queue_.empty()) {
    serving_ = ServerState::kIdle;
    service_end_ = kNever;
  } else {
    start_ordinary();
  }
}

void Simulation::on_completion_priority() {
  if (measuring()) {
    ++races_.priority_completed;
    ++priority_deliveries_;
  }
  last_generated_2_ = priority_generated_;
  if (queue_.empty()) {
    serving_ = ServerState::kIdle;
    service_end_ = kNever;
  } else {
    start_ordinary();
  }
}

void Simulation::open_window() {
  measuring_ = true;
  window_start_ = clock_;
  marks_.push_back({0.0, clock_, 0.0, 0});
}

void Simulation::close_batch_if_due() {
  if (batch_size_ == 0 || measured_ % batch_size_ != 0) return;
  if (marks_.size() > config_.batches) return;
  marks_.push_back({age_integral_1_, clock_, peak_sum_, measured_});
}

void Simulation::record(EventKind kind) {
  if (config_.record_trace) trace_.push_back({clock_, kind, serving_, queue_.size()});
}

SimResult Simulation::run() {
  const std::uint64_t target = config_.target_deliveries;
  batch_size_ = target >= 2 * config_.batches ? target / config_.batches : 0;
  next_ordinary_ = arrivals1_.draw(params_.lambda1());
  next_priority_ = params_.lambda2() > 0.0 ? arrivals2_.draw(params_.lambda2()) : kNever;
  if (config_.warmup_deliveries == 0) open_window();

  const std::uint64_t stop = config_.warmup_deliveries + target;
  while (deliveries_ < stop) {
    // Ties: service completion, then priority arrival, then ordinary arrival.
    const bool busy = serving_ != ServerState::kIdle;
    EventKind kind;
    double when;
    if (busy && service_end_ <= next_priority_ && service_end_ <= next_ordinary_) {
      when = service_end_;
      kind = serving_ == ServerState::kServingOrdinary ? EventKind::kCompletionOrdinary
                                                       : EventKind::kCompletionPriority;
    } else if (next_priority_ <= next_ordinary_) {
      when = next_priority_;
      kind = EventKind::kArrivalPriority;
    } else {
      when = next_ordinary_;
      kind = EventKind::kArrivalOrdinary;
    }
    if (measuring()) accumulate(when);
    clock_ = when;
    switch (kind) {
      case EventKind::kArrivalOrdinary: on_arrival_ordinary(); break;
      case EventKind::kArrivalPriority: on_arrival_priority(); break;
      case EventKind::kCompletionOrdinary: on_completion_ordinary(); break;
      case EventKind::kCompletionPriority: on_completion_priority(); break;
    }
    record(kind);
  }

  SimResult r;
  const double span = clock_ - window_start_;
  const auto measured = static_cast<double>(measured_);
  r.sim_time = span;
  r.deliveries_observed = measured_;
  r.avg_age_1 = age_integral_1_ / span;
  r.avg_age_2 = age_integral_2_ / span;
  r.avg_peak_1 = peak_sum_ / measured;
  r.time_avg_n = n_integral_ / span;
  r.z_mean = z_sum_ / measured;
  r.z_m2 = z_sq_sum_ / measured;
  const auto blocked = static_cast<double>(blocked_deliveries_);
  r.blocked_mean = blocked_deliveries_ > 0 ? z_blocked_sum_ / blocked : 0.0;
  r.unblocked_mean = measured_ > blocked_deliveries_ ? z_unblocked_sum_ / (measured - blocked) : 0.0;
  r.blocked_fraction =
      arrivals_seen_ > 0 ? static_cast<double>(arrivals_blocked_) / static_cast<double>(arrivals_seen_) : 0.0;
  r.mean_system_time_1 = system_time_sum_ / measured;
  r.races = races_;
  r.priority_deliveries = priority_deliveries_;
  r.occupancy_ordinary = time_ordinary_;
  r.occupancy_priority = time_priority_;
  if (r.occupancy_priority.empty()) r.occupancy_priority.push_back(0.0);
  if (r.occupancy_ordinary.empty()) r.occupancy_ordinary.push_back(0.0);
  for (double& v : r.occupancy_ordinary) v /= span;
  for (double& v : r.occupancy_priority) v /= span;

  std::vector<double> batch_age, batch_peak;
  for (std::size_t i = 1; i < marks_.size(); ++i) {
    const BatchMark& a = marks_[i - 1];
    const BatchMark& b = marks_[i];
    batch_age.push_back((b.age_integral - a.age_integral) / (b.time - a.time));
    batch_peak.push_back((b.peak_sum - a.peak_sum) / static_cast<double>(b.peaks - a.peaks));
  }
  r.age_1_stderr = batch_stderr(batch_age);
  r.peak_1_stderr = batch_stderr(batch_peak);
  r.trace = std::move(trace_);
  r.delivery_log = std::move(delivery_log_);
  return r;
}

}  // namespace

double SimResult::occupancy(bool priority_row, std::size_t level) const {
  const auto& row = priority_row ? occupancy_priority : occupancy_ordinary;
  return level < row.size() ? row[level] : 0.0;
}

SimResult run(const ModelParams& params, const SimConfig& config) {
  if (config.target_deliveries < 1) {
    throw Error(ErrorCode::kInvalidConfig, "target_deliveries must be at least 1");
  }
  if (config.batches < 1) throw Error(ErrorCode::kInvalidConfig, "batches must be at least 1");
  return Simulation(params, config).run();
}

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kArrivalOrdinary: return "arrival1";
    case EventKind::kArrivalPriority: return "arrival2";
    case EventKind::kCompletionOrdinary: return "completion1";
    case EventKind::kCompletionPriority: return "completion2";
  }
  return "?";
}

const char* to_string(ServerState state) {
  switch (state) {
    case ServerState::kIdle: return "idle";
    case ServerState::kServingOrdinary: return "serving1";
    case ServerState::kServingPriority: return "serving2";
  }
  return "?";
}

void write_event_log(std::ostream& out, const std::vector<EventRecord>& trace) {
  const auto precision = out.precision(17);
  for (const EventRecord& e : trace) {
    out << e.time << ' ' << to_string(e.kind) << ' ' << to_string(e.serving) << ' '
        << e.ordinary_in_system << '\n';
  }
  out.precision(precision);
}

OccupancyReport occupancy_check(const SimResult& result, const StationaryDistribution& dist,
                                std::size_t max_level, double tolerance) {
  OccupancyReport report;
  report.max_level = max_level;
  report.empirical_idle = result.occupancy(false, 0);
  report.ordinary_deviation.assign(max_level + 1, 0.0);
  report.priority_deviation.assign(max_level + 1, 0.0);
  report.ordinary_deviation[0] = std::abs(report.empirical_idle - dist.pi0);
  report.max_deviation = report.ordinary_deviation[0];
  for (std::size_t i = 1; i <= max_level; ++i) {
    const LadderEntry expected = i <= dist.levels() ? dist.level(i) : LadderEntry{};
    report.ordinary_deviation[i] = std::abs(result.occupancy(false, i) - expected.ordinary);
    report.priority_deviation[i] = std::abs(result.occupancy(true, i) - expected.priority);
    report.max_deviation =
        std::max({report.max_deviation, report.ordinary_deviation[i], report.priority_deviation[i]});
  }
  report.converged = report.max_deviation < tolerance;
  return report;
}

OccupancyReport occupancy_check(const SimResult& result, const ModelParams& params,
                                std::size_t max_level, double tolerance) {
  const auto stability = check_stability(params);
  if (stability.is_stable && stability.margin / params.mu1() >= kNearBoundaryTolerance) {
    return occupancy_check(result, stationary(params), max_level, tolerance);
  }
  OccupancyReport report;
  report.max_level = max_level;
  report.empirical_idle = result.occupancy(false, 0);
  report.max_deviation = std::numeric_limits<double>::quiet_NaN();
  report.converged = false;
  return report;
}

}  // namespace aoi::sim
