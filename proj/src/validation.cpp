#include "aoi/validation.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "aoi/age_analysis.hpp"
#include "aoi/analytic.hpp"
#include "aoi/ctmc_oracle.hpp"
#include "aoi/oracles.hpp"
#include "aoi/rng.hpp"
#include "aoi/simulator.hpp"
#include "aoi/sweep.hpp"

namespace aoi {
namespace {

const ModelParams kReference{2.0, 5.0, 10.0, 5.0};
const ModelParams kNoPriority{2.0, 0.0, 10.0, 5.0};

// High-precision values at the reference point (30-digit evaluation of the
// closed integral, confirmed by nested quadrature).
constexpr double kOverlapReference = 0.051428571428571428571;
constexpr double kLowerBoundReference = 0.80285714285714285714;

constexpr double kSimRelTol = 0.02;
constexpr double kRaceRelTol = 0.01;
constexpr double kBandSigmas = 3.0;
// The sweep keeps full-size runs in quick mode too: near the stability
// boundary 1e5 deliveries leave the bound-to-simulation gaps inside the noise.
constexpr std::uint64_t kSweepDeliveries = 1'000'000;

class Suite {
 public:
  Suite(const ValidationOptions& options, const std::function<void(const CheckResult&)>& sink)
      : options_(options), sink_(sink) {}

  void run();
  std::vector<CheckResult> results() && { return std::move(results_); }

 private:
  void stationary_consistency();
  void queue_length_agreement();
  void peak_age();
  void priority_age_check();
  void lower_bound();
  void no_priority_reduction();
  void sweep_shape();
  void virtual_service();
  void properties();

  void emit(int criterion, std::string name, double expected, double observed, double tol,
            ToleranceKind kind);
  void abs(int c, std::string name, double expected, double observed, double tol) {
    emit(c, std::move(name), expected, observed, tol, ToleranceKind::kAbsolute);
  }
  void rel(int c, std::string name, double expected, double observed, double tol) {
    emit(c, std::move(name), expected, observed, tol, ToleranceKind::kRelative);
  }
  void range(int c, std::string name, double lo, double observed, double hi) {
    emit(c, std::move(name), lo, observed, hi, ToleranceKind::kRange);
  }
  void exact(int c, std::string name, double expected, double observed) {
    emit(c, std::move(name), expected, observed, 0.0, ToleranceKind::kExact);
  }

  std::uint64_t deliveries() const { return options_.quick ? 100'000 : 1'000'000; }
  sim::SimConfig config(std::uint64_t stream) const {
    sim::SimConfig c;
    c.seed = mix_seed(options_.seed, stream);
    c.target_deliveries = deliveries();
    return c;
  }
  const sim::SimResult& reference_run(std::size_t replica);

  ValidationOptions options_;
  std::function<void(const CheckResult&)> sink_;
  std::vector<CheckResult> results_;
  std::vector<sim::SimResult> reference_runs_;
};

void Suite::emit(int criterion, std::string name, double expected, double observed, double tol,
                 ToleranceKind kind) {
  CheckResult r{criterion, std::move(name), expected, observed, tol, kind, false};
  switch (kind) {
    case ToleranceKind::kAbsolute: r.passed = std::abs(observed - expected) <= tol; break;
    case ToleranceKind::kRelative: r.passed = std::abs(observed - expected) <= tol * std::abs(expected); break;
    case ToleranceKind::kRange: r.passed = observed >= expected && observed <= tol; break;
    case ToleranceKind::kExact: r.passed = observed == expected; break;
  }
  if (sink_) sink_(r);
  results_.push_back(std::move(r));
}

const sim::SimResult& Suite::reference_run(std::size_t replica) {
  while (reference_runs_.size() <= replica) {
    reference_runs_.push_back(sim::run(kReference, config(100 + reference_runs_.size())));
  }
  return reference_runs_[replica];
}

void Suite::stationary_consistency() {
  const auto pi0 = *check_stability(kReference).pi0;
  exact(1, "closed-form pi0 at P*", 0.3, pi0);
  const OracleSolution oracle = solve_stationary(build_generator(kReference, 200));
  abs(1, "oracle pi0 (K=200) vs closed form", pi0, oracle.idle(), 1e-9);
  const StationaryDistribution dist = stationary(kReference, 200);
  double worst = 0.0;
  for (std::size_t i = 1; i <= 50; ++i) {
    worst = std::max({worst, std::abs(dist.level(i).ordinary - oracle.ordinary(i)),
                      std::abs(dist.level(i).priority - oracle.priority(i))});
  }
  abs(1, "spectral ladder vs oracle, max |diff| over i<=50", 0.0, worst, 1e-9);
  double total = dist.pi0;
  for (const auto& e : dist.ladder) total += e.ordinary + e.priority;
  abs(1, "closed-form total probability", 1.0, total, 1e-8);
  double oracle_total = 0.0;
  for (double p : oracle.probabilities) oracle_total += p;
  abs(1, "oracle total probability", 1.0, oracle_total, 1e-8);
}

void Suite::queue_length_agreement() {
  const double en = expected_queue_length(kReference);
  abs(2, "E[N] closed form at P*", 1.0, en, 1e-12);
  abs(2, "E[N] oracle (K=200)", en, oracle_expected_n(kReference, 200), 1e-8);
  constexpr double h = 1e-6;
  const double derivative =
      (queue_length_mgf(kReference, h) - queue_length_mgf(kReference, -h)) / (2.0 * h);
  abs(2, "E[N] from MGF central difference", en, derivative, 1e-5);
  rel(2, "E[N] simulated (time average)", en, reference_run(0).time_avg_n, kSimRelTol);
}

void Suite::peak_age() {
  const double peak = peak_age_ordinary(kReference);
  abs(3, "peak age closed form at P*", 1.0, peak, 1e-12);
  for (std::size_t k = 0; k < 3; ++k) {
    rel(3, "peak age simulated, seed " + std::to_string(k), peak, reference_run(k).avg_peak_1, kSimRelTol);
  }
}

void Suite::priority_age_check() {
  const double age = priority_age(kReference);
  abs(4, "priority age closed form at P*", 0.4, age, 1e-12);
  rel(4, "priority age simulated", age, reference_run(0).avg_age_2, kSimRelTol);
}

void Suite::lower_bound() {
  const double lb = age_lower_bound(kReference);
  abs(5, "lower bound at P* (quoted 0.80287)", 0.80287, lb, 1e-4);
  abs(5, "lower bound at P* (30-digit reference)", kLowerBoundReference, lb, 1e-12);
  sim::SimConfig fict = config(200);
  fict.mode = sim::Mode::kFictitiousSystem;
  rel(5, "fictitious-system simulated age vs lower bound", lb, sim::run(kReference, fict).avg_age_1,
      kSimRelTol);
  const double overlap = expected_overlap(kReference);
  abs(5, "overlap closed form (30-digit reference)", kOverlapReference, overlap, 1e-12);
  const auto mc = oracle::lindley_overlap(kReference, 10'000'000, mix_seed(options_.seed, 201));
  rel(5, "overlap: Lindley Monte Carlo (1e7 samples)", overlap, mc.overlap.mean, 0.005);
  const SystemTimeLB law = system_time_lb(kReference);
  const double quad = oracle::overlap_by_quadrature([&law](double t) { return law.density(t); },
                                                    kReference.lambda1());
  rel(5, "overlap: nested quadrature", overlap, quad, 0.005);
}

void Suite::no_priority_reduction() {
  const ModelParams& p = kNoPriority;
  abs(6, "lambda2=0: pi0", 0.8, *check_stability(p).pi0, 1e-10);
  abs(6, "lambda2=0: peak age", 0.625, peak_age_ordinary(p), 1e-10);
  abs(6, "lambda2=0: lower bound", 0.605, age_lower_bound(p), 1e-10);
  abs(6, "lambda2=0: M/M/1 reference age", 0.605, reference_mm1_age(2.0, 10.0), 1e-10);
  const SystemTimeLB law = system_time_lb(p);
  double worst = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    const double t = 5.0 * i / 1000.0;
    worst = std::max(worst, std::abs(law.density(t) - 8.0 * std::exp(-8.0 * t)));
  }
  abs(6, "lambda2=0: f_T vs 8 exp(-8t), max |diff|", 0.0, worst, 1e-10);
  const sim::SimResult r = sim::run(p, config(300));
  rel(6, "lambda2=0: simulated age", 0.605, r.avg_age_1, kSimRelTol);
  rel(6, "lambda2=0: simulated peak age", 0.625, r.avg_peak_1, kSimRelTol);
}

void Suite::sweep_shape() {
  SweepSpec spec;
  spec.base = kReference;
  spec.swept = SweptRate::kLambda2;
  spec.from = 0.5;
  spec.to = 19.0;
  spec.points = 38;
  spec.sim = config(400);
  spec.sim.target_deliveries = kSweepDeliveries;
  spec.threads = options_.threads;
  const std::vector<SweepRow> rows = run_sweep(spec);

  int order_violations = 0;
  for (const SweepRow& r : rows) {
    const double band = kBandSigmas * *r.sim_age_1_stderr;
    if (*r.age_lb_1 > *r.sim_age_1 + band || *r.sim_age_1 - band > *r.peak_age_1) ++order_violations;
  }
  exact(7, "sweep: lower bound <= sim age <= peak age (3-sigma band), violations", 0.0, order_violations);

  const auto count_non_monotone = [&rows](auto field, bool increasing) {
    int bad = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const double a = *field(rows[i - 1]), b = *field(rows[i]);
      if (increasing ? !(b > a) : !(b < a)) ++bad;
    }
    return static_cast<double>(bad);
  };
  exact(7, "sweep: peak age strictly increasing, violations", 0.0,
        count_non_monotone([](const SweepRow& r) { return r.peak_age_1; }, true));
  exact(7, "sweep: lower bound strictly increasing, violations", 0.0,
        count_non_monotone([](const SweepRow& r) { return r.age_lb_1; }, true));
  exact(7, "sweep: E[N] strictly increasing, violations", 0.0,
        count_non_monotone([](const SweepRow& r) { return r.e_n; }, true));
  exact(7, "sweep: simulated age strictly increasing, violations", 0.0,
        count_non_monotone([](const SweepRow& r) { return r.sim_age_1; }, true));
  exact(7, "sweep: priority age strictly decreasing, violations", 0.0,
        count_non_monotone([](const SweepRow& r) { return r.age_u2; }, false));

  double crossing = std::nan("");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double d0 = *rows[i - 1].sim_age_1 - *rows[i - 1].age_u2;
    const double d1 = *rows[i].sim_age_1 - *rows[i].age_u2;
    if (d0 < 0.0 && d1 >= 0.0) {
      const double x0 = rows[i - 1].swept_value, x1 = rows[i].swept_value;
      crossing = x0 + (x1 - x0) * (-d0) / (d1 - d0);
      break;
    }
  }
  range(7, "sweep: crossing of priority age and simulated age (near 1.9)", 1.6, crossing, 2.2);

  const auto at5 = std::find_if(rows.begin(), rows.end(), [](const SweepRow& r) { return r.swept_value == 5.0; });
  const double ratio = at5 != rows.end() ? *at5->sim_age_1 / *at5->age_ref : std::nan("");
  range(7, "sweep: simulated age / M/M/1 reference at lambda2=5 (about 1.5)", 1.35, ratio, 1.65);
}

void Suite::virtual_service() {
  const VirtualServiceLaw law = virtual_service_moments(kReference);
  const sim::SimResult& r = reference_run(0);
  rel(8, "E[Z] simulated", law.mean, r.z_mean, kSimRelTol);
  rel(8, "E[Z^2] simulated", law.m2, r.z_m2, kSimRelTol);
  const auto& c = r.races;
  const auto ord = static_cast<double>(c.ordinary_completed + c.ordinary_preempted);
  const auto pri = static_cast<double>(c.priority_completed + c.priority_replaced);
  rel(8, "race frequency a (ordinary completes)", law.race.ordinary_completes,
      static_cast<double>(c.ordinary_completed) / ord, kRaceRelTol);
  rel(8, "race frequency b (priority replaced)", law.race.priority_replaced,
      static_cast<double>(c.priority_replaced) / pri, kRaceRelTol);
  rel(8, "race frequency u (priority completes)", law.race.priority_completes,
      static_cast<double>(c.priority_completed) / pri, kRaceRelTol);
  rel(8, "race frequency v (ordinary preempted)", law.race.ordinary_preempted,
      static_cast<double>(c.ordinary_preempted) / ord, kRaceRelTol);
}

void Suite::properties() {
  // Closed-form identities on random stable points.
  const auto points = oracle::random_stable_points(20, mix_seed(options_.seed, 500));
  double vieta = 0.0, characteristic = 0.0, normalization = 0.0, mixture = 0.0, density = 0.0;
  double oracle_gap = 0.0, oracle_mean_gap = 0.0, dual_path = 0.0, mgf_gap = 0.0;
  for (const ModelParams& p : points) {
    const SpectralDecomposition sd = spectral(p);
    vieta = std::max({vieta, std::abs(sd.eig_small * sd.eig_large - sd.ratio(3) * sd.ratio(5)),
                      std::abs(sd.eig_small + sd.eig_large - (sd.ratio(1) + sd.ratio(5) - 1.0))});
    characteristic =
        std::max({characteristic, std::abs(sd.characteristic(sd.eig_small)), std::abs(sd.characteristic(sd.eig_large))});
    const StationaryDistribution dist = stationary(p);
    normalization = std::max(normalization, std::abs(dist.tail_mass));
    const VirtualServiceLaw law = virtual_service_moments(p);
    mixture = std::max({mixture, std::abs(law.mean - law.mixture_mean()),
                        std::abs(law.m2 - law.mixture_m2()) / law.m2});
    density = std::max(density, std::abs(system_time_lb(p).total_mass() - 1.0));

    const OracleSolution oracle = solve_stationary(build_generator(p, default_truncation(p)));
    oracle_gap = std::max({oracle_gap, std::abs(oracle.idle() - dist.pi0),
                           std::abs(oracle.ordinary(1) - dist.level(1).ordinary),
                           std::abs(oracle.priority(1) - dist.level(1).priority)});
    const double en = expected_queue_length(p);
    oracle_mean_gap = std::max(oracle_mean_gap, std::abs(oracle.expected_ordinary_count() - en) / std::max(1.0, en));
    const std::size_t n = std::min<std::size_t>(50, dist.levels());
    const StationaryDistribution rec = stationary_by_recursion(p, n);
    for (std::size_t i = 1; i <= n; ++i) {
      dual_path = std::max({dual_path, std::abs(rec.level(i).ordinary - dist.level(i).ordinary),
                            std::abs(rec.level(i).priority - dist.level(i).priority)});
    }
    for (double s : {-1.0, -0.1, 0.0, 0.1}) {
      if (!(s < head_of_line_mgf_bound(p))) continue;
      const double y = mgf_unblocked(p, s), yp = mgf_blocked(p, s);
      mgf_gap = std::max({mgf_gap, std::abs(mgf_unblocked_via_detour(p, s) - y) / y,
                          std::abs(mgf_blocked_via_detour(p, s) - yp) / yp});
    }
  }
  abs(9, "random points: Vieta identities, max residual", 0.0, vieta, 1e-12);
  abs(9, "random points: |p(l)| at both roots", 0.0, characteristic, 1e-12);
  abs(9, "random points: stationary tail mass", 0.0, normalization, 1e-8);
  abs(9, "random points: E[Z], E[Z^2] closed form vs mixture", 0.0, mixture, 1e-12);
  abs(9, "random points: system-time density mass - 1", 0.0, density, 1e-12);
  abs(9, "random points: oracle vs closed form (pi0, pi1, pi'1)", 0.0, oracle_gap, 1e-8);
  abs(9, "random points: oracle vs closed form E[N], relative to max(1, E[N])", 0.0, oracle_mean_gap, 1e-8);
  abs(9, "random points: spectral vs recursion ladder (i<=50)", 0.0, dual_path, 1e-10);
  abs(9, "random points: MGF direct vs detour composition (rel)", 0.0, mgf_gap, 1e-10);

  sim::SimConfig small = config(600);
  small.target_deliveries = 100'000;
  const sim::SimResult a = sim::run(kReference, small);
  const sim::SimResult b = sim::run(kReference, small);
  const bool identical = a.avg_age_1 == b.avg_age_1 && a.avg_peak_1 == b.avg_peak_1 &&
                         a.avg_age_2 == b.avg_age_2 && a.time_avg_n == b.time_avg_n &&
                         a.occupancy_ordinary == b.occupancy_ordinary &&
                         a.occupancy_priority == b.occupancy_priority && a.sim_time == b.sim_time;
  exact(9, "determinism: same seed gives identical result", 1.0, identical ? 1.0 : 0.0);

  const sim::SimResult& r = reference_run(0);
  const double little = static_cast<double>(r.deliveries_observed) / r.sim_time * r.mean_system_time_1;
  rel(9, "Little's law: time-average N vs lambda_eff * E[T]", r.time_avg_n, little, kSimRelTol);

  const sim::OccupancyReport occ = sim::occupancy_check(r, kReference);
  abs(9, "occupancy q0..q5, q'1..q'5: max |empirical - pi|", 0.0, occ.max_deviation, 0.01);
  abs(9, "occupancy: empirical idle fraction", 0.3, occ.empirical_idle, 0.01);

  sim::SimConfig resample = config(100);
  resample.preemption = sim::PreemptionRule::kResample;
  const sim::SimResult rs = sim::run(kReference, resample);
  abs(9, "resume vs resample: avg age (4-sigma)", r.avg_age_1, rs.avg_age_1,
      4.0 * std::hypot(r.age_1_stderr, rs.age_1_stderr));
  abs(9, "resume vs resample: avg peak age (4-sigma)", r.avg_peak_1, rs.avg_peak_1,
      4.0 * std::hypot(r.peak_1_stderr, rs.peak_1_stderr));

  sim::SimConfig t = small, f = small;
  f.mode = sim::Mode::kFictitiousSystem;
  const sim::SimResult rt = sim::run(kNoPriority, t), rf = sim::run(kNoPriority, f);
  exact(9, "lambda2=0: true and fictitious runs identical", 1.0,
        rt.avg_age_1 == rf.avg_age_1 && rt.avg_peak_1 == rf.avg_peak_1 && rt.sim_time == rf.sim_time ? 1.0 : 0.0);
}

void Suite::run() {
  stationary_consistency();
  queue_length_agreement();
  peak_age();
  priority_age_check();
  lower_bound();
  no_priority_reduction();
  sweep_shape();
  virtual_service();
  properties();
}

}  // namespace

std::vector<CheckResult> run_validation(const ValidationOptions& options,
                                        const std::function<void(const CheckResult&)>& on_result) {
  Suite suite(options, on_result);
  suite.run();
  return std::move(suite).results();
}

void print_check(std::ostream& out, const CheckResult& c) {
  std::ostringstream line;
  line << std::setprecision(10);
  line << (c.passed ? "PASS" : "FAIL") << " [" << c.criterion << "] " << c.name << ": ";
  switch (c.kind) {
    case ToleranceKind::kAbsolute:
      line << "expected " << c.expected << ", observed " << c.observed << ", tol +/-" << c.tolerance;
      break;
    case ToleranceKind::kRelative:
      line << "expected " << c.expected << ", observed " << c.observed << ", tol " << 100.0 * c.tolerance << "%";
      break;
    case ToleranceKind::kRange:
      line << "expected in [" << c.expected << ", " << c.tolerance << "], observed " << c.observed;
      break;
    case ToleranceKind::kExact:
      line << "expected " << c.expected << ", observed " << c.observed << ", exact";
      break;
  }
  out << line.str() << '\n';
}

}  // namespace aoi
