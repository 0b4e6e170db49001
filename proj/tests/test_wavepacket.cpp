#include <doctest.h>

#include <cmath>

#include "scatter1d/error.hpp"
#include "scatter1d/wavepacket.hpp"

using namespace scatter1d;

namespace {

const PhysicsConstants pc{};

double lobe_max(std::span<const cplx> psi) {
  double m = 0.0;
  for (const cplx& z : psi) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace

TEST_SUITE("wavepacket") {
  TEST_CASE("gaussian packet construction") {
    const auto p = gaussian_packet(1.2, 0.08, 129);
    CHECK(p.size() == 129);
    CHECK(p.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(p.mean_momentum() - 1.2) <= 1e-6);
    for (double k : p.k) {
      CHECK(k > 0.0);
      CHECK(k >= p.k_min());
      CHECK(k <= p.k_max());
    }
    try {
      gaussian_packet(0.3, 0.1, 64);
      FAIL("support touching zero accepted");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::support_touches_zero);
    }
    const auto narrow = gaussian_packet(2.0, 1e-6, 33);
    CHECK(pc.energy(narrow.k.back()) - pc.energy(narrow.k.front()) < 1e-4);
  }

  TEST_CASE("free evolution at t = 0") {
    const auto v = zero_potential().with_half_range(1.0);
    const auto p = gaussian_packet(2.0, 0.2, 64);
    const auto states = packet_states(v, pc, p);
    const auto x = uniform_grid(-30.0, 30.0, 601);
    const auto a = propagate(p, states, 0.0, x);
    const auto b = propagate_free(p, pc, 0.0, x);
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    CHECK(worst <= 1e-6 * lobe_max(b));
    const auto fewer = gaussian_packet(2.0, 0.2, 32);
    try {
      propagate(fewer, states, 0.0, x);
      FAIL("node mismatch accepted");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::node_mismatch);
    }
  }

  TEST_CASE("populations") {
    {
      const auto v = zero_potential().with_half_range(1.0);
      const auto p = gaussian_packet(2.0, 0.2, 32);
      const auto pop = branch_populations(p, packet_states(v, pc, p));
      CHECK(pop.transmitted == doctest::Approx(1.0).epsilon(1e-10));
      CHECK(std::abs(pop.reflected) <= 1e-10);
    }
    const auto v = jolanta_potential();
    FdOptions fo;
    fo.store_psi = false;
    for (double sigma : {0.05, 0.1, 0.3}) {
      const auto p = gaussian_packet(3.0, sigma, 129);
      CAPTURE(sigma);
      CHECK(std::abs(branch_populations(p, packet_states(v, pc, p, fo)).sum() - 1.0) <= 1e-4);
    }
    const auto narrow = gaussian_packet(2.0, 1e-3, 129);
    const double t2 = std::norm(solve_right_incident(v, pc, pc.energy(2.0), fo).transmission);
    CHECK(std::abs(branch_populations(narrow, packet_states(v, pc, narrow, fo)).transmitted - t2) <= 1e-3);
  }

  TEST_CASE("norm conservation and the asymptotic condition") {
    const auto v = jolanta_potential();
    const auto p = gaussian_packet(3.0, 0.3, 600);
    FdOptions fo;
    fo.dx = 5e-4;
    const auto states = packet_states(v, pc, p, fo);
    const double half = 250.0;
    const auto x = uniform_grid(-half, half, 5001);
    const double h = x[1] - x[0];
    const double a = v.half_range();
    for (double t : {-40.0, -10.0, 0.0, 10.0, 40.0}) {
      const auto psi = propagate(p, states, t, x);
      CAPTURE(t);
      CHECK(std::abs(spatial_norm(psi, h) - 1.0) <= 1e-6);
      if (std::abs(t) == 40.0) {
        double inner = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
          if (std::abs(x[i]) <= a) inner += std::norm(psi[i]) * h;
        }
        CHECK(inner <= 1e-3);
      }
    }
  }

  TEST_CASE("stationary phase branches") {
    const auto v = jolanta_potential();
    const auto p = gaussian_packet(3.0, 0.3, 3000);
    FdOptions fo;
    const auto states = packet_states(v, pc, p, fo);
    const auto coeffs = CoefficientCurve::from_states(states);
    const double a = v.half_range();

    std::vector<double> errors;
    for (double t : {50.0, 100.0, 200.0}) {
      const auto x = uniform_grid(a + 0.05, 1000.0, 9901);
      const auto psi = propagate(p, states, t, x);
      double worst = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        worst = std::max(worst, std::abs(spa_branch(p, coeffs, pc, a, t, x[i], SpaBranch::transmitted) - psi[i]));
      }
      errors.push_back(worst / lobe_max(psi));
    }
    CHECK(errors[1] < errors[0]);
    CHECK(errors[2] < errors[1]);
    CHECK(errors[2] <= 0.05);

    // before arrival the packet moves freely
    const auto xin = uniform_grid(-1000.0, -a - 0.05, 9901);
    const auto psi = propagate(p, states, -200.0, xin);
    const auto free = propagate_free(p, pc, -200.0, xin);
    double dev = 0.0, spa_dev = 0.0;
    for (std::size_t i = 0; i < xin.size(); ++i) {
      dev = std::max(dev, std::abs(psi[i] - free[i]));
      spa_dev = std::max(spa_dev, std::abs(spa_branch(p, coeffs, pc, a, -200.0, xin[i], SpaBranch::incoming) - free[i]));
    }
    CHECK(dev <= 1e-3 * lobe_max(free));
    CHECK(spa_dev <= 0.05 * lobe_max(free));

    try {
      spa_branch(p, coeffs, pc, a, -10.0, 50.0, SpaBranch::transmitted);
      FAIL("branch domain accepted");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::branch_domain);
    }
  }

  TEST_CASE("reflected branch vanishes without a potential") {
    const auto v = zero_potential().with_half_range(1.0);
    const auto p = gaussian_packet(2.0, 0.2, 64);
    const auto coeffs = CoefficientCurve::from_states(packet_states(v, pc, p));
    for (double x : {-400.0, -300.0, -200.0}) CHECK(std::abs(spa_branch(p, coeffs, pc, 1.0, 100.0, x, SpaBranch::reflected)) <= 1e-9);
  }

  TEST_CASE("momentum direction of the outgoing lobes") {
    const auto v = square_barrier(1.0, 0.5);
    const auto p = gaussian_packet(1.5, 0.1, 300);
    const auto states = packet_states(v, pc, p);
    const double t = 60.0;
    const auto right = propagate(p, states, t, uniform_grid(10.0, 200.0, 4001));
    const auto left = propagate(p, states, t, uniform_grid(-200.0, -10.0, 4001));
    CHECK(momentum_sign(right) > 0.99);
    CHECK(momentum_sign(left) < -0.99);
  }
}
