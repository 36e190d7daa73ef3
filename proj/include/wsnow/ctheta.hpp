#pragma once

#include <cmath>
#include <optional>

#include "wsnow/error.hpp"

namespace wsnow {

// phi_theta(s) = s^theta - (1-s)^theta, strictly increasing from -1 to 1.
inline double phi_theta(double theta, double s) {
  return std::pow(s, theta) - std::pow(1.0 - s, theta);
}

// psi_theta(s) = (s+1)^theta - s^theta.
inline double psi_theta(double theta, double s) {
  return std::pow(s + 1.0, theta) - std::pow(s, theta);
}

// Inverse of phi_theta on [-1,1], by bisection; |phi(s) - y| <= 1e-13.
inline double phi_theta_inverse(double theta, double y) {
  if (!(theta > 0.0 && theta <= 1.0))
    throw validation_error("ThetaOutOfRange", "theta must be in (0,1]");
  if (!(y >= -1.0 && y <= 1.0))
    throw validation_error("YOutOfRange", "phi_theta maps onto [-1,1]");
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double v = phi_theta(theta, mid);
    if (std::abs(v - y) <= 1e-14) return mid;
    (v < y ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// h_theta(c) = c * psi_theta(phi_theta^{-1}((2^theta - 1)/c)); increasing in
// c, with h(1) < 1 for theta < 1 and h -> infinity.
inline double h_theta(double theta, double c) {
  return c * psi_theta(theta, phi_theta_inverse(theta, (std::pow(2.0, theta) - 1.0) / c));
}

struct CThetaResult {
  double theta = 0.0;
  double root = 1.0;       // c(theta): the unique solution of h_theta(c) = 1 in (1,inf)
  double residual = 0.0;   // |h_theta(root) - 1|
  std::optional<double> closed_form_half;  // sqrt(1+sqrt2+sqrt(4 sqrt2 - 1)) at theta=1/2
};

// Solves the fixed-point equation for the Markov-type constant multiplier
// c(theta) by bracketing plus bisection, exploiting monotonicity of h_theta.
// theta = 1 is the degenerate boundary (psi_1 == 1, so h_1(c) = c, root 1);
// the uniqueness proof needs psi_theta < 1, which fails there.
inline CThetaResult c_theta(double theta) {
  if (!(theta > 0.0 && theta <= 1.0))
    throw validation_error("ThetaOutOfRange", "theta must be in (0,1]");
  CThetaResult out;
  out.theta = theta;
  if (theta == 0.5)
    out.closed_form_half = std::sqrt(1.0 + std::sqrt(2.0) +
                                     std::sqrt(4.0 * std::sqrt(2.0) - 1.0));
  if (theta == 1.0) {
    out.root = 1.0;
    out.residual = std::abs(h_theta(theta, 1.0) - 1.0);
    return out;
  }
  double lo = 1.0, hi = 2.0;
  while (h_theta(theta, hi) < 1.0) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (h_theta(theta, mid) < 1.0 ? lo : hi) = mid;
  }
  out.root = 0.5 * (lo + hi);
  out.residual = std::abs(h_theta(theta, out.root) - 1.0);
  return out;
}

}  // namespace wsnow
