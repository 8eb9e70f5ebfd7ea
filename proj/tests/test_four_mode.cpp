#include "doctest.h"

#include <cmath>
#include <complex>
#include <limits>

#include "ptfourwell/errors.hpp"
#include "ptfourwell/four_mode.hpp"
#include "ptfourwell/init.hpp"

using namespace ptfw;
using namespace ptfw::four_mode;
using cd = std::complex<double>;

namespace {

State embedded(double gamma, double d, double weight = 0.0) {
  init::EmbeddingSpec spec;
  spec.middle = weight == 0.0 ? init::two_mode_stationary_middle(1.0, gamma)
                              : init::two_mode_superposition(1.0, gamma, weight);
  spec.n0 = 4.0;
  spec.n3 = 1.0;
  spec.gamma = gamma;
  spec.d = d;
  return init::embed_pt_state(spec);
}

// j01 = J01(ψ) j̃01(ψ) with the tunneling controller evaluated at ψ.
double controlled_j01(const State& psi, double d) {
  Params p;
  p.J01 = d * observables(psi, p).C(1, 3);
  return observables(psi, p).j01;
}

}  // namespace

TEST_CASE("observables of a simple state") {
  const State psi(cd(1, 0), cd(0, 1), cd(0, 0), cd(0, 0));
  Params p;
  p.J01 = 2.0;
  const auto o = observables(psi, p);
  CHECK(o.n[0] == 1.0);
  CHECK(o.n[1] == 1.0);
  CHECK(o.C(0, 1) == 0.0);
  // ρ01 = ψ0 ψ1* = -i, j̃01 = -2 Im ρ01 = 2
  CHECK(o.jt(0, 1) == 2.0);
  CHECK(o.j01 == 4.0);
  CHECK(o.jt(1, 0) == -2.0);
}

TEST_CASE("tunneling controller makes r3 vanish to rounding") {
  const State psi(cd(0.3, 0.4), cd(-0.2, 0.6), cd(0.5, -0.1), cd(0.7, 0.2));
  Params p;
  p.d = 0.37;
  const auto tun = controller_tunneling(observables(psi, p), p.d);
  p.J01 = tun.J01;
  p.J23 = tun.J23;
  const auto r = condition_residuals(psi, p, 0.5);
  CHECK(std::abs(r.r3) <= 4 * std::numeric_limits<double>::epsilon() * std::abs(p.J01 * observables(psi, p).C(0, 2)));
}

TEST_CASE("controller drives dj01/dt to the feedback target") {
  const double gamma = 0.5, rate = 0.2;
  const State psi = embedded(gamma, 0.3, 0.3);
  Params p;
  p.d = 0.3;
  const GammaValue g{gamma, rate};
  const Params q = apply_controller(psi, p, g);
  const auto o = observables(psi, q);
  const State dpsi = cd(0, -1) * (hamiltonian(psi, q).cast<cd>() * psi);
  const double h = 1e-6;
  const double fd = (controlled_j01(State(psi + h * dpsi), p.d) - controlled_j01(State(psi - h * dpsi), p.d)) / (2 * h);
  CHECK(fd == doctest::Approx(2 * rate * o.n[1] + 2 * gamma * (o.j01 - o.j12)).epsilon(1e-6));
}

TEST_CASE("controller with interaction still hits the target") {
  const double gamma = 0.5;
  const State psi = embedded(gamma, 0.3, 0.3);
  Params p;
  p.d = 0.3;
  p.c = 0.8;
  const Params q = apply_controller(psi, p, {gamma, 0.0});
  const auto o = observables(psi, q);
  const State dpsi = cd(0, -1) * (hamiltonian(psi, q).cast<cd>() * psi);
  const double h = 1e-6;
  const double fd = (controlled_j01(State(psi + h * dpsi), p.d) - controlled_j01(State(psi - h * dpsi), p.d)) / (2 * h);
  CHECK(fd == doctest::Approx(2 * gamma * (o.j01 - o.j12)).epsilon(1e-6));
}

TEST_CASE("controlled flow is Hermitian") {
  const State psi = embedded(0.5, 0.3);
  Params p;
  p.d = 0.3;
  p.c = 0.4;
  const State dpsi = controlled_rhs(0.0, psi, GammaSchedule::constant(0.5), p);
  CHECK(std::abs(std::real(psi.dot(dpsi))) <= 1e-13);
  CHECK((hamiltonian(psi, p) - hamiltonian(psi, p).transpose()).norm() == 0.0);
}

TEST_CASE("singular controller is reported with its time") {
  const State psi(cd(0, 0), cd(0.6, 0), cd(0, 0.5), cd(0.3, 0));
  Params p;
  p.d = 1.0;
  try {
    apply_controller(psi, p, {0.5, 0.0}, {}, 3.5);
    FAIL("expected a singular controller");
  } catch (const NearSingularController& e) {
    CHECK(e.time() == 3.5);
  }
}

TEST_CASE("run keeps the conditions and the norm") {
  const State psi = embedded(0.5, 0.3);
  Params p;
  p.d = 0.3;
  RunOptions opts;
  opts.dt_out = 0.05;
  const auto rec = run_trajectory(psi, GammaSchedule::constant(0.5), p, 5.0, opts);
  CHECK(rec.termination == Termination::completed);
  CHECK(rec.refinement_converged);
  CHECK(rec.rows.size() == 101);
  for (const auto& row : rec.rows) {
    CHECK(std::abs(row.residuals.r1) <= 1e-10);
    CHECK(std::abs(row.residuals.r2) <= 1e-10);
    CHECK(std::abs(row.obs.n[0] + row.obs.n[1] + row.obs.n[2] + row.obs.n[3] - 6.0) <= 1e-10);
    CHECK(row.obs.n[1] == doctest::Approx(0.5).epsilon(1e-9));
  }
}

TEST_CASE("run rejects an initial state that breaks the conditions") {
  const State psi(cd(1, 0), cd(0.7, 0), cd(0.7, 0), cd(1, 0));
  Params p;
  CHECK_THROWS_AS(run_trajectory(psi, GammaSchedule::constant(0.5), p, 1.0), InitialConditionViolated);
}

TEST_CASE("empty reservoir stops the run") {
  const State psi = embedded(0.5, 0.3);
  Params p;
  p.d = 0.3;
  RunOptions opts;
  opts.reservoir_floor = 0.9;  // n0 starts at 4 and drains at rate Γ
  const auto rec = run_trajectory(psi, GammaSchedule::constant(0.5), p, 8.0, opts);
  CHECK(rec.termination == Termination::reservoir_depleted);
  CHECK(rec.rows.back().obs.n[0] < 0.9);
  CHECK(rec.rows.back().t == doctest::Approx(6.21).epsilon(1e-3));
}

TEST_CASE("noise factors are reproducible and within the amplitude") {
  for (std::size_t k = 0; k < 200; ++k) {
    const auto a = perturbation_for_interval(42, k, 1e-3);
    const auto b = perturbation_for_interval(42, k, 1e-3);
    CHECK(a.E0 == b.E0);
    CHECK(a.J23 == b.J23);
    for (double f : {a.E0, a.E3, a.J01, a.J23}) CHECK(std::abs(f - 1.0) <= 1e-3);
  }
  CHECK(perturbation_for_interval(1, 0, 1e-3).E0 != perturbation_for_interval(2, 0, 1e-3).E0);
  CHECK(perturbation_for_interval(1, 3, 0.0).E0 == 1.0);
}

TEST_CASE("ground-state ramp follows the middle pair") {
  Params p;
  p.E0 = -10;
  p.E3 = -10;
  p.J01 = 0.5;
  p.J23 = 0.5;
  const State gs = init::hermitian_ground_state(p);
  p.d = 0.5 / observables(gs, p).C(1, 3);
  RunOptions opts;
  opts.dt_out = 0.1;
  const auto rec = run_trajectory(gs, GammaSchedule::cosine_ramp(0.5, 20.0), p, 20.0, opts);
  CHECK(rec.termination == Termination::completed);
  const auto& last = rec.rows.back();
  CHECK(last.gamma == 0.5);
  CHECK(std::abs(last.residuals.r1) <= 1e-10);
}
