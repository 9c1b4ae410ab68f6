#include "elastoc/warp.hpp"

namespace elastoc {

TimeWarp::TimeWarp(double T_, double tau_, double eps_, double eps_tilde_)
    : T(T_), tau(tau_), eps(eps_), eps_tilde(eps_tilde_) {
  if (!(T > 0.0)) throw std::invalid_argument("warp requires T > 0");
  if (!(tau > 0.0 && tau + eps < T))
    throw std::invalid_argument("warp requires 0 < tau and tau + eps < T");
  if (eps < 0.0 || eps_tilde < 0.0 || eps_tilde >= 1.0)
    throw std::invalid_argument("warp requires eps >= 0 and eps_tilde in [0,1)");
  if ((eps == 0.0) != (eps_tilde == 0.0))
    throw std::invalid_argument("warp requires eps = 0 iff eps_tilde = 0");
}

double TimeWarp::t(double s) const {
  if (s < 0.0 || s > 2.0)
    throw std::domain_error("warp argument s outside [0,2]");
  if (s <= 1.0) return tau * s;
  if (!degenerate() && s <= 1.0 + eps_tilde)
    return tau + (eps / eps_tilde) * (s - 1.0);
  return T - (2.0 - s) * (T - (tau + eps)) / (1.0 - eps_tilde);
}

double TimeWarp::s(double t_) const {
  if (t_ < 0.0 || t_ > T)
    throw std::domain_error("warp argument t outside [0,T]");
  if (t_ <= tau) return t_ / tau;
  if (!degenerate() && t_ <= tau + eps)
    return 1.0 + eps_tilde * (t_ - tau) / eps;
  return 2.0 - (T - t_) * (1.0 - eps_tilde) / (T - (tau + eps));
}

double TimeWarp::mu_dot(double s) const {
  if (s < 0.0 || s > 2.0)
    throw std::domain_error("warp argument s outside [0,2]");
  if (s <= 1.0) return tau;
  if (!degenerate() && s <= 1.0 + eps_tilde) return eps / eps_tilde;
  return (T - (tau + eps)) / (1.0 - eps_tilde);
}

double TimeWarp::mu_dot_tau(double s) const {
  if (s < 0.0 || s > 2.0)
    throw std::domain_error("warp argument s outside [0,2]");
  if (s <= 1.0) return 1.0;
  if (!degenerate() && s <= 1.0 + eps_tilde) return 0.0;
  return -1.0 / (1.0 - eps_tilde);
}

double TimeWarp::eulerian_weight(double t_) const {
  if (t_ < 0.0 || t_ > T)
    throw std::domain_error("warp argument t outside [0,T]");
  if (t_ <= tau) return 1.0;
  if (t_ <= tau + eps) return 0.0;
  return -1.0 / (1.0 - eps_tilde);
}

double TimeWarp::mu_dot_eulerian(double t_) const {
  if (t_ < 0.0 || t_ > T)
    throw std::domain_error("warp argument t outside [0,T]");
  if (t_ <= tau) return tau;
  if (t_ <= tau + eps) return eps / eps_tilde;
  return (T - (tau + eps)) / (1.0 - eps_tilde);
}

}  // namespace elastoc
