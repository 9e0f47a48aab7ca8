// Unit tests for the spherical-harmonic grid: quadrature exactness,
// orthonormality, transform round trips, and angular derivative tables.
#include <catch2/catch_amalgamated.hpp>

#include "willmore/sphere_basis.hpp"

#include <random>

using namespace willmore;

TEST_CASE("quadrature integrates low-degree polynomials exactly") {
  SphereGrid grid(12);
  Field one = Field::Ones(grid.nnodes());
  CHECK(grid.integrate(one) == Catch::Approx(4.0 * PI).epsilon(1e-13));

  // f = z^2 -> 4 pi / 3, f = z^4 -> 4 pi / 5, f = x^2 y^2 -> 4 pi / 15
  Field z2(grid.nnodes()), z4(grid.nnodes()), x2y2(grid.nnodes());
  for (int i = 0; i < grid.ntheta(); ++i)
    for (int j = 0; j < grid.nphi(); ++j) {
      int n = i * grid.nphi() + j;
      double ct = std::cos(grid.theta(i)), st = std::sin(grid.theta(i));
      double x = st * std::cos(grid.phi(j)), y = st * std::sin(grid.phi(j));
      z2[n] = ct * ct;
      z4[n] = ct * ct * ct * ct;
      x2y2[n] = x * x * y * y;
    }
  CHECK(grid.integrate(z2) == Catch::Approx(4.0 * PI / 3.0).epsilon(1e-13));
  CHECK(grid.integrate(z4) == Catch::Approx(4.0 * PI / 5.0).epsilon(1e-13));
  CHECK(grid.integrate(x2y2) == Catch::Approx(4.0 * PI / 15.0).epsilon(1e-13));
}

TEST_CASE("basis functions are orthonormal under the grid quadrature") {
  const int B = 16;
  SphereGrid grid(B);
  std::vector<std::pair<int, int>> picks = {{0, 0}, {1, -1}, {1, 0},  {2, 2},   {3, -2},
                                            {5, 5}, {9, -7}, {16, 0}, {16, 16}, {12, -12}};
  std::vector<Field> vals;
  for (auto [l, m] : picks) vals.push_back(grid.basis_jet(l, m, 0).val());
  for (size_t a = 0; a < picks.size(); ++a)
    for (size_t b = a; b < picks.size(); ++b) {
      double ip = grid.integrate(vals[a] * vals[b]);
      double expect = (a == b) ? 1.0 : 0.0;
      INFO("pair (" << picks[a].first << "," << picks[a].second << ") x (" << picks[b].first << ","
                    << picks[b].second << ")");
      CHECK(std::abs(ip - expect) < 1e-12);
    }
}

TEST_CASE("analysis inverts synthesis for band-limited fields") {
  const int L = 10;
  SphereGrid grid(20);
  std::mt19937 rng(1234);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd coef((L + 1) * (L + 1));
  for (int k = 0; k < coef.size(); ++k) coef[k] = gauss(rng);
  Field values = grid.synth(coef, 0).val();
  Eigen::VectorXd back = grid.analyze(values, L);
  CHECK((back - coef).cwiseAbs().maxCoeff() < 1e-12);
  // analysis at the full grid band must put nothing beyond degree L
  Eigen::VectorXd full = grid.analyze(values);
  CHECK(full.tail(full.size() - coef.size()).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("round-sphere Laplacian eigenrelation from the derivative tables") {
  SphereGrid grid(14);
  for (auto [l, m] : std::vector<std::pair<int, int>>{{2, 1}, {5, -3}, {9, 9}, {7, 0}}) {
    AngularJet jet = grid.basis_jet(l, m, 2);
    Field lap(grid.nnodes());
    for (int i = 0; i < grid.ntheta(); ++i) {
      double ct = std::cos(grid.theta(i)), st = std::sin(grid.theta(i));
      for (int j = 0; j < grid.nphi(); ++j) {
        int n = i * grid.nphi() + j;
        lap[n] = jet.d(2, 0)[n] + ct / st * jet.d(1, 0)[n] + jet.d(0, 2)[n] / (st * st);
      }
    }
    Field expect = -double(l) * (l + 1) * jet.val();
    INFO("l=" << l << " m=" << m);
    CHECK((lap - expect).abs().maxCoeff() < 1e-10 * (1.0 + expect.abs().maxCoeff()));
  }
}

TEST_CASE("all partial derivatives match analytic formulas for sin^3 t cos 3p") {
  SphereGrid grid(11);
  const int N = grid.nnodes();
  Field f(N);
  for (int i = 0; i < grid.ntheta(); ++i)
    for (int j = 0; j < grid.nphi(); ++j)
      f[i * grid.nphi() + j] = std::pow(std::sin(grid.theta(i)), 3) * std::cos(3.0 * grid.phi(j));
  Eigen::VectorXd coef = grid.analyze(f);
  AngularJet jet = grid.synth(coef, 3);

  auto dtheta = [](int a, double t) {
    // a-th t-derivative of sin^3 t
    switch (a) {
      case 0: return std::pow(std::sin(t), 3);
      case 1: return 3.0 * sqr(std::sin(t)) * std::cos(t);
      case 2: return 6.0 * std::sin(t) * sqr(std::cos(t)) - 3.0 * std::pow(std::sin(t), 3);
      default:
        return 6.0 * std::pow(std::cos(t), 3) - 21.0 * sqr(std::sin(t)) * std::cos(t);
    }
  };
  auto dphi = [](int b, double p) {
    // b-th p-derivative of cos 3p
    double s = std::pow(3.0, b);
    switch (b % 4) {
      case 0: return s * std::cos(3.0 * p);
      case 1: return -s * std::sin(3.0 * p);
      case 2: return -s * std::cos(3.0 * p);
      default: return s * std::sin(3.0 * p);
    }
  };
  for (int a = 0; a <= 3; ++a)
    for (int b = 0; a + b <= 3; ++b) {
      double worst = 0.0;
      for (int i = 0; i < grid.ntheta(); ++i)
        for (int j = 0; j < grid.nphi(); ++j) {
          double expect = dtheta(a, grid.theta(i)) * dphi(b, grid.phi(j));
          worst = std::max(worst, std::abs(jet.d(a, b)[i * grid.nphi() + j] - expect));
        }
      INFO("order (" << a << "," << b << ")");
      CHECK(worst < 1e-9);
    }
}
