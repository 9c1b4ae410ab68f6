#pragma once

#include <stdexcept>

namespace elastoc {

/// Piecewise-linear bijection mu(.,tau): [0,2] -> [0,T] pinning mu(1) = tau
/// and mu(1+eps_tilde) = tau + eps; uncouples the switch time from the state.
/// The degenerate objective-at-tau case uses eps = eps_tilde = 0 (two
/// segments).
struct TimeWarp {
  double T = 0.0;
  double tau = 0.0;
  double eps = 0.0;        // objective window >= 0
  double eps_tilde = 0.0;  // reference window in [0,1)

  TimeWarp(double T_, double tau_, double eps_ = 0.0, double eps_tilde_ = 0.0);

  bool degenerate() const { return eps_tilde == 0.0; }

  /// t = mu(s), s in [0,2].
  double t(double s) const;
  /// s = mu^{-1}(t), t in [0,T].
  double s(double t) const;

  /// d mu / d s; left limit at the kinks.
  double mu_dot(double s) const;
  /// d^2 mu / (ds dtau); left limit at the kinks, independent of tau.
  double mu_dot_tau(double s) const;

  /// mu_dot_tau(mu^{-1}(t)): 1 on [0,tau), 0 on (tau,tau+eps),
  /// -1/(1-eps_tilde) on (tau+eps, T]. Left limit at the break points.
  double eulerian_weight(double t) const;
  /// mu_dot(mu^{-1}(t)): the segment speeds tau, eps/eps_tilde,
  /// (T-tau-eps)/(1-eps_tilde) as a function of t.
  double mu_dot_eulerian(double t) const;
};

}  // namespace elastoc
