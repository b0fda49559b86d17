// Directed sensing graph (target + interceptors) and leaderless actuation
// graph, with the structural checks the observer and consensus rely on.
#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace salvo {

/// Directed information link `from -> to`. Node 0 is the target; interceptors
/// are numbered 1..n in both graphs.
struct Edge {
  int from = 0;
  int to = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

class SensingGraph {
 public:
  SensingGraph() = default;
  /// Throws ConfigError on self-loops, out-of-range nodes, edges into the
  /// target, or duplicate edges.
  SensingGraph(int interceptors, const std::vector<Edge>& edges);

  int size() const { return n_; }
  /// a_ij over all n+1 nodes; a_ij = 1 when j transmits to i.
  const Eigen::MatrixXi& adjacency() const { return adjacency_; }
  const Eigen::MatrixXd& laplacian() const { return laplacian_; }
  /// L_TI: leader column of the Laplacian (-a_i0).
  Eigen::VectorXd leader_coupling() const;
  /// L_II: reduced follower Laplacian.
  Eigen::MatrixXd follower_laplacian() const;
  /// a_i0 for interceptor index i in [0, n).
  bool senses_target(int i) const { return adjacency_(i + 1, 0) != 0; }

 private:
  int n_ = 0;
  Eigen::MatrixXi adjacency_;
  Eigen::MatrixXd laplacian_;
};

class ActuationGraph {
 public:
  ActuationGraph() = default;
  ActuationGraph(int interceptors, const std::vector<Edge>& edges);

  int size() const { return n_; }
  /// n x n adjacency over interceptors (0-based).
  const Eigen::MatrixXi& adjacency() const { return adjacency_; }
  const Eigen::MatrixXd& laplacian() const { return laplacian_; }

 private:
  int n_ = 0;
  Eigen::MatrixXi adjacency_;
  Eigen::MatrixXd laplacian_;
};

std::pair<SensingGraph, ActuationGraph> build_graphs(
    int interceptors, const std::vector<Edge>& sensing,
    const std::vector<Edge>& actuation);

/// True iff every interceptor is reachable from the target.
bool check_spanning_tree(const SensingGraph& graph);

/// Eigenvalues of L_II sorted by real part. Throws ConfigError without a
/// spanning tree and TheoryViolation if a real part is not positive.
std::vector<std::complex<double>> follower_spectrum(const SensingGraph& graph);

/// Positive diagonal rescaling D_hat with L^T D_hat + D_hat L >= 2I.
struct ScalingCertificate {
  Eigen::VectorXd base;    // diagonal of D_bar
  double lambda_min = 0;   // min eig of L^T D_bar + D_bar L
  Eigen::VectorXd scaled;  // diagonal of D_hat = 2 D_bar / lambda_min
  double d_max = 0;
  double scaled_min_eig = 0;  // min eig of L^T D_hat + D_hat L
  bool valid = false;
  std::string method;
};

inline constexpr double kCertificateTolerance = 1e-9;

/// Certificate for a given D_bar diagonal (no search).
ScalingCertificate certify_scaling(const Eigen::MatrixXd& follower_laplacian,
                                   const Eigen::VectorXd& base);

/// Searches for D_bar: first diag(q/p) with p = L^-1 1, q = L^-T 1, then the
/// identity, then a seeded random positive-diagonal search. Returns
/// valid = false when nothing verifies; require_valid() turns that into
/// CertificateNotFound.
ScalingCertificate scaling_certificate(const SensingGraph& graph);

void require_valid(const ScalingCertificate& cert);

/// Smallest eigenvalue of a symmetric matrix. 2x2 uses the closed form.
double min_symmetric_eigenvalue(const Eigen::MatrixXd& m);

}  // namespace salvo
