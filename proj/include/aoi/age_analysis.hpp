#pragma once

#include "aoi/model.hpp"

namespace aoi {

// Outcome probabilities of the two exponential races an ordinary packet sees
// while it is head of line.
//
// While the ordinary packet is in service, its service clock races the next
// priority arrival; while a priority packet is in service, its service clock
// races the next priority arrival (which would replace it).
struct RaceProbabilities {
  double ordinary_completes = 0.0;  // service (mu1) beats priority arrival
  double priority_replaced = 0.0;   // priority arrival beats priority service
  double priority_completes = 0.0;  // priority service (mu2) beats priority arrival
  double ordinary_preempted = 0.0;  // priority arrival beats ordinary service
};

RaceProbabilities clock_probabilities(const ModelParams& params);

// Per-edge marks of the detour flow graph, one per race outcome. Evaluated at
// the conditional clock MGFs they turn the path generating function into the
// MGF of the head-of-line time.
using DetourMarks = RaceProbabilities;

// Generating function of the graph entered with the ordinary packet in
// service (the packet did not find a lone priority packet in service).
double detour_gf_unblocked(const RaceProbabilities& probs, const DetourMarks& marks);
// Generating function of the graph entered with a priority packet in service.
double detour_gf_blocked(const RaceProbabilities& probs, const DetourMarks& marks);

// Upper edge of the strip where the head-of-line MGFs converge.
double head_of_line_mgf_bound(const ModelParams& params);

// MGF of Y, the head-of-line time of an ordinary packet that does not find
// the system serving a priority packet with no ordinary backlog.
double mgf_unblocked(const ModelParams& params, double s);
// MGF of Y', the same time for a packet that does find that state.
double mgf_blocked(const ModelParams& params, double s);

// Same two MGFs obtained by composing the detour generating functions with
// the conditional clock MGFs.
double mgf_unblocked_via_detour(const ModelParams& params, double s);
double mgf_blocked_via_detour(const ModelParams& params, double s);

struct VirtualServiceLaw {
  RaceProbabilities race;
  double mean_unblocked = 0.0;   // E[Y]
  double m2_unblocked = 0.0;     // E[Y^2]
  double mean_blocked = 0.0;     // E[Y']
  double m2_blocked = 0.0;       // E[Y'^2]
  double blocked_probability = 0.0;  // pi'_1: arrival finds the blocked state
  double mean = 0.0;             // E[Z]
  double m2 = 0.0;               // E[Z^2]

  double mixture_mean() const;
  double mixture_m2() const;
};

VirtualServiceLaw virtual_service_moments(const ModelParams& params);

// System-time law of the ordinary stream in the fictitious system, an M/G/1
// queue with service time Y:
//   f_T(t) = -c1 exp(-alpha1 t) - c2 exp(-alpha2 t)
// or, when the two roots coincide at alpha,
//   f_T(t) = (1 - rho) mu1 ((mu2 - alpha) t + 1) exp(-alpha t).
struct SystemTimeLB {
  double rho = 0.0;
  double alpha1 = 0.0;  // alpha1 >= alpha2 > 0
  double alpha2 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  bool double_root = false;
  // Needed for the double-root branch only.
  double mu1 = 0.0;
  double mu2 = 0.0;

  double density(double t) const;
  double total_mass() const;
  double mean() const;
};

SystemTimeLB system_time_lb(const ModelParams& params);

// MGF of the fictitious system time, straight from the M/G/1 transform.
double system_time_mgf(const ModelParams& params, double s);

// E[X (T - X)^+] with X ~ Exp(lambda1) independent of T ~ f_T.
double expected_overlap(const ModelParams& params);
double expected_overlap(const SystemTimeLB& law, double lambda1);

// Average age of the ordinary stream in the fictitious system; a lower bound
// on the true average age.
double age_lower_bound(const ModelParams& params);

}  // namespace aoi
