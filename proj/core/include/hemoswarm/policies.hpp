#pragma once

/**
 * @file policies.hpp
 * @brief Power-limitation strategies, group-absorption scaling and the
 *        Markov data-collection model.
 */

#include <variant>
#include <vector>

#include "hemoswarm/circuit.hpp"

namespace hemoswarm {

/// Strategy limiting how much of the diffusion-limited oxygen a robot
/// consumes. Policies act as a multiplicative factor on the robot sink.
struct PowerPolicy {
  struct Unlimited {};
  struct FixedCap {
    double cap_w;
  };
  struct Fraction {
    double fraction;
  };
  /// One limit per vessel class (before / in / after the body capillary).
  struct ClassLimit {
    enum class Mode { unlimited, fixed_cap, fraction };
    Mode mode = Mode::unlimited;
    double value = 0.0;
  };
  struct PerVesselClass {
    ClassLimit artery;
    ClassLimit capillary;
    ClassLimit vein;
  };
  /// Robots active only a fraction of circulations; swarm-mean reduction.
  struct DutyCycle {
    double active_fraction;
  };
  /// History-dependent limits reduced to an effective active fraction.
  struct HistoryEffective {
    double effective_fraction;
  };

  using Variant = std::variant<Unlimited, FixedCap, Fraction, PerVesselClass,
                               DutyCycle, HistoryEffective>;
  Variant variant = Unlimited{};

  static PowerPolicy unlimited() { return {}; }
  static PowerPolicy fixed_cap(double cap_w) { return {FixedCap{cap_w}}; }
  static PowerPolicy fraction(double q) { return {Fraction{q}}; }
  static PowerPolicy per_vessel_class(ClassLimit artery, ClassLimit capillary,
                                      ClassLimit vein) {
    return {PerVesselClass{artery, capillary, vein}};
  }
  static PowerPolicy duty_cycle(double active_fraction) {
    return {DutyCycle{active_fraction}};
  }
  static PowerPolicy history_effective(double effective_fraction) {
    return {HistoryEffective{effective_fraction}};
  }

  void validate() const;
};

/// Consumption multiplier in [0,1] for the current vessel class, plasma
/// concentration and unlimited (diffusion-limited) per-robot power.
double apply_policy(const PowerPolicy& policy, VesselClass vclass, double c,
                    double unlimited_power_w);

/// Per-robot absorption reduction for a compact group of n robots, n^(-2/3).
double group_absorption_factor(double n_group);

/// Markov model of per-robot data storage: each circulation either visits the
/// skin (transmit up to transmit_limit), passes a portal system (collect 2)
/// or a single non-skin capillary (collect 1), capped at capacity.
struct MarkovDataModel {
  int capacity = 5;
  int transmit_limit = 3;
  double p_skin = 0.08;
  double p_portal = 0.20;

  void validate() const;
  /// Row-stochastic transition matrix over states 0..capacity.
  std::vector<std::vector<double>> transition_matrix() const;
};

struct MarkovResult {
  std::vector<double> stationary;
  double full_probability;            // pi(capacity)
  double transmit_ready_probability;  // P(stored >= transmit_limit)
  int iterations;
  double residual;
};

/// Stationary distribution by power iteration to a 1e-12 one-step residual.
/// Throws std::invalid_argument when the matrix is not stochastic.
MarkovResult markov_stationary(const MarkovDataModel& model);

/// Fraction of robots not at full storage, 1 - pi(full); robots with full
/// storage use only minimal power.
double effective_active_fraction(const MarkovResult& result);
double effective_active_fraction(double full_probability);

}  // namespace hemoswarm
