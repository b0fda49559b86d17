#include "salvo/observer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "salvo/engagement.hpp"
#include "salvo/errors.hpp"
#include "salvo/integrator.hpp"

namespace salvo {

void ObserverGains::validate() const {
  if (!(k1 > 0.0 && k2 > 0.0 && k3 > 0.0)) {
    throw ConfigError("observer gains k1, k2, k3 must be positive");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ConfigError("observer alpha must lie in (0, 1)");
  }
  if (!(beta > 1.0)) throw ConfigError("observer beta must exceed 1");
}

double sig(double x, double p) {
  if (x == 0.0) return 0.0;
  const double mag = std::pow(std::abs(x), p);
  return x > 0.0 ? mag : -mag;
}

EstimateMatrix relative_error(const SensingGraph& graph,
                              const EstimateMatrix& z_hat,
                              const Eigen::Vector4d& z) {
  const int n = graph.size();
  const auto& a = graph.adjacency();
  EstimateMatrix eta = EstimateMatrix::Zero(n, 4);
  for (int i = 0; i < n; ++i) {
    if (a(i + 1, 0) != 0) eta.row(i) += z_hat.row(i) - z.transpose();
    for (int j = 0; j < n; ++j) {
      if (a(i + 1, j + 1) != 0) eta.row(i) += z_hat.row(i) - z_hat.row(j);
    }
  }
  return eta;
}

EstimateMatrix observer_rhs(const SensingGraph& graph, const ObserverGains& gains,
                            const EstimateMatrix& z_hat,
                            const Eigen::Vector4d& z) {
  const EstimateMatrix eta = relative_error(graph, z_hat, z);
  EstimateMatrix rhs = z_hat * target_dynamics().transpose();
  rhs -= gains.k1 * eta;
  rhs.array() -= gains.k2 * sig(eta.array(), gains.alpha);
  rhs.array() -= gains.k3 * sig(eta.array(), gains.beta);
  return rhs;
}

EstimateMatrix observer_step(const SensingGraph& graph,
                             const ObserverGains& gains,
                             const EstimateMatrix& z_hat,
                             const Eigen::Vector4d& z, double dt) {
  const Eigen::Matrix4d& a = target_dynamics();
  const Eigen::Vector4d z_rate = a * z;
  return rk4_step(z_hat, dt, [&](double offset, const EstimateMatrix& zh) {
    return observer_rhs(graph, gains, zh, Eigen::Vector4d(z + offset * z_rate));
  });
}

double lyapunov_value(const ObserverGains& gains,
                      const ScalingCertificate& cert,
                      const EstimateMatrix& eta) {
  require_valid(cert);
  const double pa = 1.0 + gains.alpha;
  const double pb = 1.0 + gains.beta;
  double v = 0.0;
  for (Eigen::Index i = 0; i < eta.rows(); ++i) {
    const double d = cert.scaled[i];
    const auto mag = eta.row(i).array().abs();
    v += gains.k2 * d / pa * mag.pow(pa).sum();
    v += gains.k3 * d / pb * mag.pow(pb).sum();
    v += 0.5 * gains.k1 * d * eta.row(i).squaredNorm();
  }
  return v;
}

SettlingBound settling_bound(const ObserverGains& gains, int n, double d_max) {
  gains.validate();
  const double a = gains.alpha;
  const double b = gains.beta;
  const double four_n = 4.0 * n;
  // ||D_hat (x) A|| = ||D_hat|| ||A|| and ||A|| = 1 for the constant-velocity A.
  const double coupling = d_max;

  SettlingBound bound;
  const double k_linear = 0.5 * (gains.k1 * gains.k1 - coupling * coupling);
  const double k_low = 0.5 * gains.k2 * gains.k2;
  const double k_high = gains.k3 * gains.k3 / (2.0 * std::pow(four_n, b - 1.0));
  bound.k = std::min({k_linear, k_low, k_high});

  const double t1 = gains.k1 * d_max / 2.0;
  const double t2 = gains.k2 * d_max * std::pow(four_n, (1.0 - a) / 2.0) / (1.0 + a);
  const double t3 = gains.k3 * d_max / (1.0 + b);
  const double ea = 2.0 * a / (1.0 + a);
  const double eb = 2.0 * b / (1.0 + b);
  bound.c_alpha = std::max({std::pow(t1, ea), std::pow(t2, ea), std::pow(t3, ea)});
  bound.c_beta = std::pow(3.0, (b - 1.0) / (b + 1.0)) *
                 std::max({std::pow(t1, eb), std::pow(t2, eb), std::pow(t3, eb)});

  bound.certified = bound.k > 0.0;
  if (bound.certified) {
    bound.settling_time =
        4.0 * bound.c_alpha * (1.0 + a) / (bound.k * (1.0 - a)) +
        4.0 * bound.c_beta * (1.0 + b) / (bound.k * (b - 1.0));
  } else {
    bound.settling_time = std::numeric_limits<double>::infinity();
    bound.diagnostic = k_linear <= 0.0
                           ? "k1^2 <= ||D_hat (x) A||^2: sufficient condition fails"
                           : "k <= 0: sufficient condition fails";
  }
  return bound;
}

SettlingBound settling_bound(const SensingGraph& graph,
                             const ObserverGains& gains,
                             const ScalingCertificate& cert) {
  require_valid(cert);
  return settling_bound(gains, graph.size(), cert.d_max);
}

}  // namespace salvo
