#include <random>

#include <Eigen/Eigenvalues>
#include <doctest.h>

#include "salvo/errors.hpp"
#include "salvo/graph.hpp"

using namespace salvo;

namespace {

const std::vector<Edge> kStar = {{0, 1}, {1, 2}, {1, 3}, {1, 4}};

// Random digraph on n interceptors with a spanning tree rooted at the target
// plus extra edges.
std::vector<Edge> random_rooted(int n, std::mt19937_64& rng) {
  std::vector<Edge> edges;
  std::vector<std::vector<bool>> used(n + 1, std::vector<bool>(n + 1, false));
  for (int i = 1; i <= n; ++i) {
    std::uniform_int_distribution<int> parent(0, i - 1);
    const int p = parent(rng);
    edges.push_back({p, i});
    used[p][i] = true;
  }
  std::uniform_int_distribution<int> node(0, n);
  std::uniform_int_distribution<int> extra(0, 2 * n);
  for (int k = extra(rng); k > 0; --k) {
    const int from = node(rng), to = node(rng);
    if (to == 0 || from == to || used[from][to]) continue;
    used[from][to] = true;
    edges.push_back({from, to});
  }
  return edges;
}

}  // namespace

TEST_CASE("partitions of the four-agent sensing star") {
  const SensingGraph g(4, kStar);
  Eigen::VectorXd lti(4);
  lti << -1, 0, 0, 0;
  Eigen::MatrixXd lii(4, 4);
  lii << 1, 0, 0, 0,
        -1, 1, 0, 0,
        -1, 0, 1, 0,
        -1, 0, 0, 1;
  CHECK(g.leader_coupling() == lti);
  CHECK(g.follower_laplacian() == lii);
  CHECK(g.senses_target(0));
  CHECK_FALSE(g.senses_target(1));
  CHECK(g.laplacian().rowwise().sum().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("follower spectrum and scaling certificate of the star") {
  const SensingGraph g(4, kStar);
  CHECK(check_spanning_tree(g));
  for (const auto& l : follower_spectrum(g)) {
    CHECK(l.real() == doctest::Approx(1.0));
    CHECK(l.imag() == doctest::Approx(0.0));
  }
  const ScalingCertificate c = scaling_certificate(g);
  CHECK(c.valid);
  CHECK(c.method == "m-matrix");
  CHECK(c.base[0] == doctest::Approx(4.0));
  CHECK(c.base[1] == doctest::Approx(0.5));
  CHECK(c.lambda_min == doctest::Approx(0.894448724536).epsilon(1e-11));
  CHECK(c.scaled[0] == doctest::Approx(8.94405658).epsilon(1e-8));
  for (int i = 1; i < 4; ++i) CHECK(c.scaled[i] == doctest::Approx(1.11800707).epsilon(1e-8));
  CHECK(c.d_max == doctest::Approx(c.scaled[0]));
  CHECK(c.scaled_min_eig >= 2.0 - kCertificateTolerance);
}

TEST_CASE("two-node worked example is exact") {
  Eigen::MatrixXd l(2, 2);
  l << 1, 0, -1, 1;
  const ScalingCertificate c = certify_scaling(l, Eigen::VectorXd::Ones(2));
  CHECK(c.lambda_min == 1.0);
  CHECK(c.scaled[0] == 2.0);
  CHECK(c.scaled[1] == 2.0);
  CHECK(c.scaled_min_eig == 2.0);
  CHECK(c.valid);

  Eigen::MatrixXd form = l.transpose() * c.scaled.asDiagonal() +
                         Eigen::MatrixXd(c.scaled.asDiagonal()) * l;
  CHECK(min_symmetric_eigenvalue(form) == 2.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(form);
  CHECK(es.eigenvalues()[0] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(es.eigenvalues()[1] == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("edge validation") {
  CHECK_THROWS_AS(SensingGraph(2, {{0, 1}, {1, 1}}), ConfigError);
  CHECK_THROWS_AS(SensingGraph(2, {{0, 1}, {1, 3}}), ConfigError);
  CHECK_THROWS_AS(SensingGraph(2, {{0, 1}, {1, 0}}), ConfigError);
  CHECK_THROWS_AS(SensingGraph(2, {{0, 1}, {0, 1}}), ConfigError);
  CHECK_THROWS_AS(ActuationGraph(2, {{0, 1}}), ConfigError);
  CHECK_THROWS_AS(ActuationGraph(2, {{1, 2}, {1, 2}}), ConfigError);
  CHECK_NOTHROW(ActuationGraph(2, {{1, 2}, {2, 1}}));
}

TEST_CASE("missing spanning tree") {
  const SensingGraph g(3, {{0, 1}, {2, 3}, {3, 2}});
  CHECK_FALSE(check_spanning_tree(g));
  CHECK_THROWS_AS(follower_spectrum(g), ConfigError);
}

TEST_CASE("actuation cycle Laplacian") {
  const ActuationGraph g(4, {{1, 2}, {2, 3}, {3, 4}, {4, 1}});
  Eigen::MatrixXd expected(4, 4);
  expected << 1, 0, 0, -1,
              -1, 1, 0, 0,
              0, -1, 1, 0,
              0, 0, -1, 1;
  CHECK(g.laplacian() == expected);
}

TEST_CASE("random rooted digraphs: Laplacian, spectrum and certificate") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const SensingGraph g(n, random_rooted(n, rng));
    CAPTURE(trial);
    CHECK(g.laplacian().rowwise().sum().cwiseAbs().maxCoeff() == 0.0);
    REQUIRE(check_spanning_tree(g));
    for (const auto& l : follower_spectrum(g)) CHECK(l.real() > 0.0);
    const ScalingCertificate c = scaling_certificate(g);
    CHECK(c.valid);
    CHECK(c.scaled_min_eig >= 2.0 - kCertificateTolerance);
    CHECK(c.scaled.minCoeff() > 0.0);
  }
}

TEST_CASE("random actuation graphs have zero row sums") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 7);
    std::vector<Edge> edges;
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        if (i != j && rng() % 3 == 0) edges.push_back({i, j});
    const ActuationGraph g(n, edges);
    CHECK(g.laplacian().rowwise().sum().cwiseAbs().maxCoeff() == 0.0);
  }
}
