#include "hemoswarm/policies.hpp"

#include <cmath>
#include <stdexcept>

namespace hemoswarm {

namespace {
void check_fraction(double q, const char* what) {
  if (q < 0.0 || q > 1.0) throw std::invalid_argument(what);
}

void check_limit(const PowerPolicy::ClassLimit& lim) {
  using Mode = PowerPolicy::ClassLimit::Mode;
  if (lim.mode == Mode::fixed_cap && lim.value < 0.0)
    throw std::invalid_argument("policy cap must be nonnegative");
  if (lim.mode == Mode::fraction) check_fraction(lim.value, "policy fraction out of [0,1]");
}

double limit_multiplier(const PowerPolicy::ClassLimit& lim, double unlimited_w) {
  using Mode = PowerPolicy::ClassLimit::Mode;
  switch (lim.mode) {
    case Mode::unlimited: return 1.0;
    case Mode::fixed_cap:
      return unlimited_w > lim.value ? lim.value / unlimited_w : 1.0;
    case Mode::fraction: return lim.value;
  }
  return 1.0;
}
}  // namespace

void PowerPolicy::validate() const {
  std::visit(
      [](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, FixedCap>) {
          if (p.cap_w < 0.0)
            throw std::invalid_argument("policy cap must be nonnegative");
        } else if constexpr (std::is_same_v<T, Fraction>) {
          check_fraction(p.fraction, "policy fraction out of [0,1]");
        } else if constexpr (std::is_same_v<T, PerVesselClass>) {
          check_limit(p.artery);
          check_limit(p.capillary);
          check_limit(p.vein);
        } else if constexpr (std::is_same_v<T, DutyCycle>) {
          check_fraction(p.active_fraction, "active_fraction out of [0,1]");
        } else if constexpr (std::is_same_v<T, HistoryEffective>) {
          check_fraction(p.effective_fraction, "effective_fraction out of [0,1]");
        }
      },
      variant);
}

double apply_policy(const PowerPolicy& policy, VesselClass vclass, double /*c*/,
                    double unlimited_power_w) {
  return std::visit(
      [&](const auto& p) -> double {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, PowerPolicy::Unlimited>) {
          return 1.0;
        } else if constexpr (std::is_same_v<T, PowerPolicy::FixedCap>) {
          return unlimited_power_w > p.cap_w ? p.cap_w / unlimited_power_w : 1.0;
        } else if constexpr (std::is_same_v<T, PowerPolicy::Fraction>) {
          return p.fraction;
        } else if constexpr (std::is_same_v<T, PowerPolicy::PerVesselClass>) {
          switch (vclass) {
            case VesselClass::arterial: return limit_multiplier(p.artery, unlimited_power_w);
            case VesselClass::capillary:
              return limit_multiplier(p.capillary, unlimited_power_w);
            case VesselClass::venous: return limit_multiplier(p.vein, unlimited_power_w);
          }
          return 1.0;
        } else if constexpr (std::is_same_v<T, PowerPolicy::DutyCycle>) {
          return p.active_fraction;
        } else {
          return p.effective_fraction;
        }
      },
      policy.variant);
}

double group_absorption_factor(double n_group) {
  if (n_group < 1.0) throw std::invalid_argument("group size must be >= 1");
  return std::pow(n_group, -2.0 / 3.0);
}

void MarkovDataModel::validate() const {
  if (capacity < 1) throw std::invalid_argument("capacity must be >= 1");
  if (transmit_limit < 1 || transmit_limit > capacity)
    throw std::invalid_argument("transmit_limit must lie in [1, capacity]");
  if (p_skin < 0 || p_portal < 0 || p_skin + p_portal > 1.0)
    throw std::invalid_argument("perfusion fractions must be nonnegative and sum to <= 1");
}

std::vector<std::vector<double>> MarkovDataModel::transition_matrix() const {
  validate();
  const int n = capacity + 1;
  std::vector<std::vector<double>> P(n, std::vector<double>(n, 0.0));
  const double p_single = 1.0 - p_skin - p_portal;
  for (int s = 0; s < n; ++s) {
    P[s][std::min(s + 1, capacity)] += p_single;   // one non-skin capillary
    P[s][std::min(s + 2, capacity)] += p_portal;   // portal loop: two capillaries
    P[s][s - std::min(s, transmit_limit)] += p_skin;  // skin loop: transmit only
  }
  return P;
}

MarkovResult markov_stationary(const MarkovDataModel& model) {
  const auto P = model.transition_matrix();
  const int n = static_cast<int>(P.size());
  for (const auto& row : P) {
    double sum = 0.0;
    for (double p : row) {
      if (p < 0.0) throw std::invalid_argument("transition matrix has negative entry");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw std::invalid_argument("transition matrix row does not sum to 1");
  }

  std::vector<double> pi(n, 1.0 / n), next(n, 0.0);
  double residual = 1.0;
  int iter = 0;
  const int max_iter = 100000;
  while (residual > 1e-12 && iter < max_iter) {
    for (int j = 0; j < n; ++j) next[j] = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) next[j] += pi[i] * P[i][j];
    double norm = 0.0;
    for (double v : next) norm += v;
    for (double& v : next) v /= norm;
    residual = 0.0;
    for (int j = 0; j < n; ++j) residual += std::abs(next[j] - pi[j]);
    pi.swap(next);
    ++iter;
  }
  if (residual > 1e-12)
    throw std::runtime_error("markov_stationary: power iteration did not converge");

  MarkovResult r;
  r.stationary = pi;
  r.full_probability = pi[model.capacity];
  r.transmit_ready_probability = 0.0;
  for (int s = model.transmit_limit; s <= model.capacity; ++s)
    r.transmit_ready_probability += pi[s];
  r.iterations = iter;
  r.residual = residual;
  return r;
}

double effective_active_fraction(const MarkovResult& result) {
  return effective_active_fraction(result.full_probability);
}

double effective_active_fraction(double full_probability) {
  if (full_probability < 0.0 || full_probability > 1.0)
    throw std::invalid_argument("full-storage probability out of [0,1]");
  return 1.0 - full_probability;
}

}  // namespace hemoswarm
