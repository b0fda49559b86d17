// Fixed-time distributed observer: every interceptor estimates the target
// state from its own seeker (if any) and its sensing-graph neighbours.
#pragma once

#include <string>

#include <Eigen/Core>

#include "salvo/graph.hpp"

namespace salvo {

/// One row per interceptor: [X, Y, Xdot, Ydot].
using EstimateMatrix = Eigen::Matrix<double, Eigen::Dynamic, 4, Eigen::RowMajor>;

struct ObserverGains {
  double k1 = 0.9;
  double k2 = 4.0;
  double k3 = 5.0;
  double alpha = 0.93;  // in (0, 1)
  double beta = 1.3;    // > 1

  /// Throws ConfigError when any bound is violated.
  void validate() const;

  friend bool operator==(const ObserverGains&, const ObserverGains&) = default;
};

/// Signed power |x|^p sign(x).
double sig(double x, double p);

/// Componentwise signed power.
template <typename Derived>
auto sig(const Eigen::ArrayBase<Derived>& x, double p) {
  return x.unaryExpr([p](double v) { return sig(v, p); });
}

/// eta^i = a_i0 (z_hat^i - z) + sum_j a_ij (z_hat^i - z_hat^j).
EstimateMatrix relative_error(const SensingGraph& graph,
                              const EstimateMatrix& z_hat,
                              const Eigen::Vector4d& z);

/// Observer vector field A z_hat^i - k1 eta^i - k2 sig^a(eta^i) - k3 sig^b(eta^i).
EstimateMatrix observer_rhs(const SensingGraph& graph, const ObserverGains& gains,
                            const EstimateMatrix& z_hat,
                            const Eigen::Vector4d& z);

/// One RK4 step of all estimates from the true target state z at the start
/// of the step; z is propagated exactly inside the stages and eta is
/// recomputed at every stage.
EstimateMatrix observer_step(const SensingGraph& graph,
                             const ObserverGains& gains,
                             const EstimateMatrix& z_hat,
                             const Eigen::Vector4d& z, double dt);

/// Lyapunov function of the relative-error dynamics. Throws
/// CertificateNotFound for an invalid certificate.
double lyapunov_value(const ObserverGains& gains,
                      const ScalingCertificate& cert, const EstimateMatrix& eta);

struct SettlingBound {
  double c_alpha = 0;
  double c_beta = 0;
  double k = 0;
  double settling_time = 0;  // +inf unless certified
  bool certified = false;
  std::string diagnostic;
};

/// Closed-form fixed-time settling bound for n agents and scaling d_max.
/// The bound is sufficient-only: certified is false whenever k <= 0.
SettlingBound settling_bound(const ObserverGains& gains, int n, double d_max);

SettlingBound settling_bound(const SensingGraph& graph,
                             const ObserverGains& gains,
                             const ScalingCertificate& cert);

}  // namespace salvo
