#include "ptfourwell/acceptance/quadrature_oracle.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <Eigen/Dense>

#include "ptfourwell/errors.hpp"

namespace ptfw::acceptance {

namespace {

using boost::math::quadrature::gauss_kronrod;

// Normalized packet (2A/π)^{1/4} exp(-A (x - c)²).
double packet(double x, double A, double c) {
  return std::pow(2.0 * A / std::numbers::pi, 0.25) * std::exp(-A * (x - c) * (x - c));
}

double packet_slope(double x, double A, double c) { return -2.0 * A * (x - c) * packet(x, A, c); }

template <class F>
double integrate(F f, double lo, double hi) {
  return gauss_kronrod<double, 61>::integrate(f, lo, hi, 20, 1e-13);
}

}  // namespace

PairElements quadrature_pair(const physical::TrapGeometry& trap,
                             const physical::GaussianAnsatz& a, int left) {
  if (left < 0 || left > 2) throw InputError("pair index must be 0, 1 or 2");
  const int right = left + 1;
  const double centers[2] = {a.center[left], a.center[right]};
  const int wells[2] = {left, right};

  // Transverse factors: same center for every packet.
  const double reach_x = 12.0 / std::sqrt(a.Ax);
  const double reach_y = 12.0 / std::sqrt(a.Ay);
  const double tx = integrate([&](double x) { return 0.5 * std::pow(packet_slope(x, a.Ax, 0.0), 2); },
                              -reach_x, reach_x);
  const double ty = integrate([&](double y) { return 0.5 * std::pow(packet_slope(y, a.Ay, 0.0), 2); },
                              -reach_y, reach_y);
  const double vx = integrate(
      [&](double x) { return std::pow(packet(x, a.Ax, 0.0), 2) * std::exp(-2.0 * x * x / (trap.wx * trap.wx)); },
      -reach_x, reach_x);
  const double vy = integrate(
      [&](double y) { return std::pow(packet(y, a.Ay, 0.0), 2) * std::exp(-2.0 * y * y / (trap.wy * trap.wy)); },
      -reach_y, reach_y);

  const double reach_z = 12.0 / std::sqrt(a.Az);
  const double lo = std::min(centers[0], centers[1]) - reach_z;
  const double hi = std::max(centers[0], centers[1]) + reach_z;
  const double wz2 = trap.wz * trap.wz;

  Eigen::Matrix2d S, H;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double ci = centers[i], cj = centers[j];
      const double sz = integrate([&](double z) { return packet(z, a.Az, ci) * packet(z, a.Az, cj); }, lo, hi);
      const double tz = integrate(
          [&](double z) { return 0.5 * packet_slope(z, a.Az, ci) * packet_slope(z, a.Az, cj); }, lo, hi);
      double potential = 0.0;
      for (int w : wells) {
        const double s = trap.position[w];
        potential += trap.depth[w] * vx * vy *
                     integrate(
                         [&](double z) {
                           return packet(z, a.Az, ci) * packet(z, a.Az, cj) *
                                  std::exp(-2.0 * (z - s) * (z - s) / wz2);
                         },
                         lo, hi);
      }
      S(i, j) = sz;
      H(i, j) = (tx + ty) * sz + tz + potential;
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(S);
  const Eigen::Matrix2d inv_sqrt =
      es.eigenvectors() * es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
      es.eigenvectors().transpose();
  const Eigen::Matrix2d h = inv_sqrt * H * inv_sqrt;
  return {h(0, 0), h(1, 1), -h(0, 1), S(0, 1)};
}

}  // namespace ptfw::acceptance
