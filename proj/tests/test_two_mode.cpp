#include "doctest.h"

#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>

#include "ptfourwell/errors.hpp"
#include "ptfourwell/two_mode.hpp"

using namespace ptfw;
using namespace ptfw::two_mode;
using cd = std::complex<double>;

namespace {

// Independent propagator: diagonalize H once and exponentiate the eigenvalues.
State exact_evolution(const State& psi0, const Params& p, double t) {
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(hamiltonian(p));
  const Eigen::Matrix2cd V = es.eigenvectors();
  Eigen::Vector2cd phases;
  for (int k = 0; k < 2; ++k) phases(k) = std::exp(cd(0.0, -1.0) * es.eigenvalues()(k) * t);
  return V * phases.asDiagonal() * V.inverse() * psi0;
}

}  // namespace

TEST_CASE("eigenvalues follow +-sqrt(J^2 - Gamma^2) on both sides of the exceptional point") {
  for (double g : {0.0, 0.25, 0.5, 0.75, 0.99, 1.01, 1.5, 2.0}) {
    const auto es = eigensystem({1.0, g});
    const cd s = std::sqrt(cd(1.0 - g * g, 0.0));
    CHECK(std::abs(es.plus.value - s) <= 1e-12);
    CHECK(std::abs(es.minus.value + s) <= 1e-12);
    if (g < 1.0) {
      CHECK(es.plus.value.imag() == 0.0);
    } else {
      CHECK(es.plus.value.real() == 0.0);
    }
    // eigen-equation residual
    const Eigen::Matrix2cd h = hamiltonian({1.0, g});
    CHECK((h * es.plus.raw - es.plus.value * es.plus.raw).norm() <= 1e-12);
    CHECK((h * es.minus.raw - es.minus.value * es.minus.raw).norm() <= 1e-12);
  }
}

TEST_CASE("eigenvalue of the example point") {
  const auto es = eigensystem({1.0, 0.5});
  CHECK(es.plus.value.real() == doctest::Approx(std::sqrt(0.75)).epsilon(1e-14));
  CHECK(es.plus.raw(0) == cd(0.0, 0.5) + std::sqrt(0.75));
  CHECK(es.plus.raw(1) == cd(-1.0, 0.0));
}

TEST_CASE("exceptional point is flagged degenerate") {
  const auto es = eigensystem({2.0, 2.0});
  CHECK(es.degenerate);
  CHECK(std::abs(es.plus.value) <= 1e-12);
  CHECK_THROWS_AS(eigensystem({0.0, 0.5}), InputError);
}

TEST_CASE("PT residual vanishes in the unbroken phase and not in the broken one") {
  CHECK(pt_symmetry_residual(eigensystem({1.0, 0.5}).plus.normalized) <= 1e-12);
  CHECK(pt_symmetry_residual(eigensystem({1.0, 0.5}).minus.normalized) <= 1e-12);
  CHECK(pt_symmetry_residual(eigensystem({1.0, 1.5}).plus.normalized) > 0.1);
  // invariant under a global phase
  const State psi = eigensystem({1.0, 0.3}).plus.normalized * std::polar(1.0, 0.7);
  CHECK(pt_symmetry_residual(psi) <= 1e-12);
  CHECK_THROWS_AS(pt_symmetry_residual(State::Zero()), InputError);
}

TEST_CASE("phase distance ignores global phase and norm") {
  const State a(cd(0.3, 0.1), cd(-0.2, 0.5));
  CHECK(phase_distance(a, 3.0 * std::polar(1.0, 1.2) * a) <= 1e-14);
  CHECK(phase_distance(State(1.0, 0.0), State(0.0, 1.0)) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("stationary eigenvector keeps n1 = n2 and the gain/loss balance j12 = 2 Gamma n1") {
  const Params p{1.0, 0.5};
  const auto obs = observables(eigensystem(p).plus.normalized, p);
  CHECK(obs.n1 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(obs.n2 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(obs.j12 == doctest::Approx(2.0 * p.gamma * obs.n1).epsilon(1e-13));
}

TEST_CASE("observable equations agree with d/dt of the observables along the flow") {
  const Params p{1.3, 0.4};
  const State psi(cd(0.6, 0.2), cd(-0.1, 0.7));
  const Rates r = observable_ode_rhs(observables(psi, p), p);
  const double h = 1e-5;
  const auto fwd = observables(State(psi + h * schrodinger_rhs(psi, p, 0.0)), p);
  const auto bwd = observables(State(psi - h * schrodinger_rhs(psi, p, 0.0)), p);
  CHECK((fwd.n1 - bwd.n1) / (2 * h) == doctest::Approx(r.dn1).epsilon(1e-7));
  CHECK((fwd.n2 - bwd.n2) / (2 * h) == doctest::Approx(r.dn2).epsilon(1e-7));
  CHECK((fwd.j12 - bwd.j12) / (2 * h) == doctest::Approx(r.dj12).epsilon(1e-7));
}

TEST_CASE("interaction adds J c (n1 - n2) C12 to the current derivative") {
  const Params p{0.8, 0.3};
  const double c = 1.7;
  const State psi(cd(0.6, 0.2), cd(-0.1, 0.7));
  const auto o = observables(psi, p);
  const double C12 = 2.0 * std::real(psi(0) * std::conj(psi(1)));
  const double h = 1e-5;
  auto j_at = [&](double s) {
    return observables(State(psi + s * schrodinger_rhs(psi, p, c)), p).j12;
  };
  const double fd = (j_at(h) - j_at(-h)) / (2 * h);
  const double linear = observable_ode_rhs(o, p).dj12;
  CHECK(fd - linear == doctest::Approx(p.J * c * (o.n1 - o.n2) * C12).epsilon(1e-6));
}

TEST_CASE("refined propagation matches the exact exponential") {
  const Params p{1.0, 0.5};
  const State psi0 = eigensystem(p).plus.normalized + 0.3 * eigensystem(p).minus.normalized;
  const auto run = propagate_refined(psi0, p, 0.0, 10.0, 0.01);
  CHECK(run.converged);
  double worst = 0.0;
  for (const auto& s : run.result) worst = std::max(worst, (s.psi - exact_evolution(psi0, p, s.t)).norm());
  CHECK(worst <= 1e-9);
  CHECK(run.result.back().t == 10.0);
}

TEST_CASE("fixed-step RK4 error drops by about 16 when dt halves") {
  const Params p{1.0, 0.5};
  const State psi0(1.0, 0.0);
  const State exact = exact_evolution(psi0, p, 5.0);
  const double e1 = (propagate(psi0, p, 5.0, 0.1).back().psi - exact).norm();
  const double e2 = (propagate(psi0, p, 5.0, 0.05).back().psi - exact).norm();
  CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.1));
}

TEST_CASE("broken phase grows exponentially") {
  const Params p{1.0, 1.5};
  const auto tr = propagate(State(1.0, 0.0), p, 10.0, 0.01);
  const double n_end = tr.back().psi.squaredNorm();
  // growth rate 2 Im(E+) = 2 sqrt(Gamma^2 - J^2)
  const double rate = std::log(n_end / tr[tr.size() / 2].psi.squaredNorm()) / 5.0;
  CHECK(rate == doctest::Approx(2.0 * std::sqrt(1.25)).epsilon(1e-3));
}

TEST_CASE("interacting propagation with balanced populations is a pure phase") {
  const Params p{1.0, 0.5};
  const State psi0 = eigensystem(p).plus.normalized;
  const auto tr = nonlinear_propagate(psi0, p, 2.0, 5.0, 0.005);
  for (const auto& s : tr) CHECK(phase_distance(s.psi, psi0) <= 1e-8);
}
