#include "salvo/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "salvo/errors.hpp"

namespace salvo {

namespace {

std::string edge_text(const Edge& e) {
  return "(" + std::to_string(e.from) + " -> " + std::to_string(e.to) + ")";
}

Eigen::MatrixXd laplacian_of(const Eigen::MatrixXi& adjacency) {
  const Eigen::MatrixXd a = adjacency.cast<double>();
  Eigen::MatrixXd l = -a;
  for (Eigen::Index i = 0; i < a.rows(); ++i) l(i, i) = a.row(i).sum();
  return l;
}

}  // namespace

SensingGraph::SensingGraph(int interceptors, const std::vector<Edge>& edges)
    : n_(interceptors) {
  if (interceptors < 1) throw ConfigError("sensing graph needs interceptors");
  adjacency_ = Eigen::MatrixXi::Zero(n_ + 1, n_ + 1);
  for (const Edge& e : edges) {
    if (e.from < 0 || e.from > n_ || e.to < 0 || e.to > n_) {
      throw ConfigError("sensing edge out of range " + edge_text(e));
    }
    if (e.from == e.to) throw ConfigError("sensing self-loop " + edge_text(e));
    if (e.to == 0) {
      throw ConfigError("target cannot receive information " + edge_text(e));
    }
    if (adjacency_(e.to, e.from) != 0) {
      throw ConfigError("duplicate sensing edge " + edge_text(e));
    }
    adjacency_(e.to, e.from) = 1;
  }
  laplacian_ = laplacian_of(adjacency_);
}

Eigen::VectorXd SensingGraph::leader_coupling() const {
  return laplacian_.block(1, 0, n_, 1);
}

Eigen::MatrixXd SensingGraph::follower_laplacian() const {
  return laplacian_.block(1, 1, n_, n_);
}

ActuationGraph::ActuationGraph(int interceptors, const std::vector<Edge>& edges)
    : n_(interceptors) {
  if (interceptors < 1) throw ConfigError("actuation graph needs interceptors");
  adjacency_ = Eigen::MatrixXi::Zero(n_, n_);
  for (const Edge& e : edges) {
    if (e.from < 1 || e.from > n_ || e.to < 1 || e.to > n_) {
      throw ConfigError("actuation edge out of range " + edge_text(e));
    }
    if (e.from == e.to) throw ConfigError("actuation self-loop " + edge_text(e));
    if (adjacency_(e.to - 1, e.from - 1) != 0) {
      throw ConfigError("duplicate actuation edge " + edge_text(e));
    }
    adjacency_(e.to - 1, e.from - 1) = 1;
  }
  laplacian_ = laplacian_of(adjacency_);
}

std::pair<SensingGraph, ActuationGraph> build_graphs(
    int interceptors, const std::vector<Edge>& sensing,
    const std::vector<Edge>& actuation) {
  return {SensingGraph(interceptors, sensing),
          ActuationGraph(interceptors, actuation)};
}

bool check_spanning_tree(const SensingGraph& graph) {
  const auto& a = graph.adjacency();
  const Eigen::Index nodes = a.rows();
  std::vector<bool> seen(static_cast<std::size_t>(nodes), false);
  std::deque<Eigen::Index> frontier{0};
  seen[0] = true;
  while (!frontier.empty()) {
    const Eigen::Index from = frontier.front();
    frontier.pop_front();
    for (Eigen::Index to = 0; to < nodes; ++to) {
      if (a(to, from) != 0 && !seen[static_cast<std::size_t>(to)]) {
        seen[static_cast<std::size_t>(to)] = true;
        frontier.push_back(to);
      }
    }
  }
  return std::all_of(seen.begin(), seen.end(), [](bool s) { return s; });
}

std::vector<std::complex<double>> follower_spectrum(const SensingGraph& graph) {
  if (!check_spanning_tree(graph)) {
    throw ConfigError("sensing graph has no spanning tree rooted at the target");
  }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(graph.follower_laplacian(),
                                             /*computeEigenvectors=*/false);
  std::vector<std::complex<double>> values(solver.eigenvalues().begin(),
                                           solver.eigenvalues().end());
  std::sort(values.begin(), values.end(), [](const auto& a, const auto& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  if (values.front().real() <= 0.0) {
    throw TheoryViolation(
        "follower Laplacian has an eigenvalue with non-positive real part");
  }
  return values;
}

double min_symmetric_eigenvalue(const Eigen::MatrixXd& m) {
  if (m.rows() == 1) return m(0, 0);
  if (m.rows() == 2) {
    const double mean = 0.5 * (m(0, 0) + m(1, 1));
    const double half_diff = 0.5 * (m(0, 0) - m(1, 1));
    const double off = 0.5 * (m(0, 1) + m(1, 0));
    return mean - std::sqrt(half_diff * half_diff + off * off);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

ScalingCertificate certify_scaling(const Eigen::MatrixXd& follower_laplacian,
                                   const Eigen::VectorXd& base) {
  ScalingCertificate cert;
  cert.base = base;
  cert.method = "given";
  if (base.size() != follower_laplacian.rows() || (base.array() <= 0.0).any()) {
    return cert;
  }
  const auto& l = follower_laplacian;
  const Eigen::MatrixXd d_bar = base.asDiagonal();
  cert.lambda_min = min_symmetric_eigenvalue(l.transpose() * d_bar + d_bar * l);
  if (!(cert.lambda_min > 0.0)) return cert;

  cert.scaled = 2.0 * base / cert.lambda_min;
  cert.d_max = cert.scaled.maxCoeff();
  const Eigen::MatrixXd d_hat = cert.scaled.asDiagonal();
  cert.scaled_min_eig =
      min_symmetric_eigenvalue(l.transpose() * d_hat + d_hat * l);
  cert.valid = cert.scaled_min_eig >= 2.0 - kCertificateTolerance;
  return cert;
}

ScalingCertificate scaling_certificate(const SensingGraph& graph) {
  const Eigen::MatrixXd l = graph.follower_laplacian();
  const Eigen::Index n = l.rows();
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);

  Eigen::FullPivLU<Eigen::MatrixXd> lu(l);
  if (lu.isInvertible()) {
    const Eigen::VectorXd p = lu.solve(ones);
    const Eigen::VectorXd q = lu.transpose().solve(ones);
    if ((p.array() > 0.0).all() && (q.array() > 0.0).all()) {
      ScalingCertificate cert = certify_scaling(l, q.cwiseQuotient(p));
      cert.method = "m-matrix";
      if (cert.valid) return cert;
    }
  }

  ScalingCertificate cert = certify_scaling(l, ones);
  cert.method = "identity";
  if (cert.valid) return cert;

  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> log_scale(-3.0, 3.0);
  for (int attempt = 0; attempt < 5000; ++attempt) {
    Eigen::VectorXd base(n);
    for (Eigen::Index i = 0; i < n; ++i) base[i] = std::exp(log_scale(rng));
    ScalingCertificate trial = certify_scaling(l, base);
    if (trial.valid) {
      trial.method = "random-search";
      return trial;
    }
  }
  cert.method = "none";
  return cert;
}

void require_valid(const ScalingCertificate& cert) {
  if (!cert.valid) {
    throw CertificateNotFound("no diagonal scaling certifies L^T D + D L > 0");
  }
}

}  // namespace salvo
