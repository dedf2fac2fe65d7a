#include "spinet/vibronic.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "spinet/basis.hpp"

namespace spinet {

namespace {

// Associated Laguerre L_k^{(d)}(x) column with overflow-safe scaling:
// returns log|L| and sign for k = 0..kmax.
void scaled_laguerre(int d, double x, int kmax, std::vector<double>& log_mag,
                     std::vector<double>& sign) {
  log_mag.assign(kmax + 1, -std::numeric_limits<double>::infinity());
  sign.assign(kmax + 1, 1.0);
  double lm1 = 0.0, l = 1.0, scale = 0.0; // true L = l * e^{scale}
  for (int k = 0; k <= kmax; ++k) {
    if (l != 0.0) {
      log_mag[k] = std::log(std::abs(l)) + scale;
      sign[k] = (l > 0.0) ? 1.0 : -1.0;
    }
    const double lp1 = ((2.0 * k + 1.0 + d - x) * l - (k + d) * lm1) / (k + 1.0);
    lm1 = l;
    l = lp1;
    const double big = std::max(std::abs(l), std::abs(lm1));
    if (big > 1e200) {
      l /= 1e200;
      lm1 /= 1e200;
      scale += std::log(1e200);
    }
  }
}

} // namespace

Eigen::MatrixXd displacement_by_exponential(double lambda, int cutoff) {
  // lambda(b†-b) is real antisymmetric; i*K is hermitian, so
  // exp(K) = V exp(-i E) V† with (E, V) from the hermitian eigenproblem.
  Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(cutoff, cutoff);
  const std::complex<double> i1(0.0, 1.0);
  for (int m = 0; m + 1 < cutoff; ++m) {
    const double v = lambda * std::sqrt(m + 1.0);
    K(m + 1, m) += i1 * v;  // i * lambda b†
    K(m, m + 1) += -i1 * v; // -i * lambda b
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(K);
  Eigen::VectorXcd phases(cutoff);
  for (int k = 0; k < cutoff; ++k)
    phases(k) = std::exp(-i1 * es.eigenvalues()(k));
  Eigen::MatrixXcd expK = es.eigenvectors() * phases.asDiagonal() *
                          es.eigenvectors().adjoint();
  return expK.real();
}

DisplacementMatrix displacement_matrix(double lambda, int cutoff,
                                       bool cross_validate) {
  if (cutoff < 1) throw std::invalid_argument("displacement cutoff must be >= 1");
  DisplacementMatrix D;
  D.lambda = lambda;
  D.entries = Eigen::MatrixXd::Zero(cutoff, cutoff);

  if (lambda == 0.0) {
    D.entries.setIdentity();
    return D;
  }

  const double x = lambda * lambda;
  std::vector<double> log_mag, sign;
  for (int d = 0; d < cutoff; ++d) {
    scaled_laguerre(d, x, cutoff - 1 - d, log_mag, sign);
    const double parity = (d % 2 == 0) ? 1.0 : -1.0; // D(lambda)^T = D(-lambda)
    const double sgn_lo = (lambda > 0.0 || d % 2 == 0) ? 1.0 : -1.0;
    for (int mn = 0; mn + d < cutoff; ++mn) {
      const int mx = mn + d;
      const double lg = -x / 2.0 + d * std::log(std::abs(lambda)) +
                        0.5 * (std::lgamma(mn + 1.0) - std::lgamma(mx + 1.0)) +
                        log_mag[mn];
      const double v = sgn_lo * sign[mn] * std::exp(lg);
      D.entries(mx, mn) = v;          // <max| D |min>, lower triangle
      D.entries(mn, mx) = v * parity; // <min| D |max> = (-1)^d lower
    }
  }

  if (cross_validate) {
    if (cutoff < 2)
      throw std::logic_error("displacement cross-validation needs cutoff >= 2");
    // the exponential oracle gets headroom so its own edge truncation cannot
    // pollute the compared block
    const int half = cutoff / 2;
    const Eigen::MatrixXd E = displacement_by_exponential(lambda, cutoff + 32);
    const double dev =
        (D.entries.topLeftCorner(half, half) - E.topLeftCorner(half, half))
            .cwiseAbs()
            .maxCoeff();
    if (dev > 1e-8)
      throw std::logic_error(
          "displacement closed form deviates from matrix exponential: " +
          std::to_string(dev));
  }
  return D;
}

double sector_offset(int table_row, const ModelParams& p) {
  int n1 = 1, n2 = 1;
  if (table_row >= 16 && table_row < 20) {
    n1 = 2;
    n2 = 0;
  } else if (table_row >= 20) {
    n1 = 0;
    n2 = 2;
  }
  const double pol = p.phi * (n1 - n2);
  return p.epsilon1 * n1 + p.epsilon2 * n2 - p.hbar_omega() * pol * pol;
}

double h0_energy(int m, int table_row, const ModelParams& p,
                 const SpinEigensystem& spin) {
  return m * p.hbar_omega() + spin.energies[table_row] + sector_offset(table_row, p);
}

double h0_energy(int m, int table_row, const ModelParams& p) {
  return h0_energy(m, table_row, p, table1_eigensystem(p));
}

HopAmplitudes hop_amplitudes(const SpinEigensystem& spin) {
  Eigen::Matrix<double, 24, 24> h12 = Eigen::Matrix<double, 24, 24>::Zero();
  Eigen::Matrix<double, 24, 24> h21 = Eigen::Matrix<double, 24, 24>::Zero();
  const auto hop12 = basis::hop_matrix(2, 1);
  const auto hop21 = basis::hop_matrix(1, 2);
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      if (hop12(a, b) != 0.0)
        for (int c = 0; c < 4; ++c)
          h12(a * 4 + c, b * 4 + c) = hop12(a, b);
      if (hop21(a, b) != 0.0)
        for (int c = 0; c < 4; ++c)
          h21(a * 4 + c, b * 4 + c) = hop21(a, b);
    }
  HopAmplitudes out;
  out.to_site2 = spin.states.transpose() * h12 * spin.states;
  out.to_site1 = spin.states.transpose() * h21 * spin.states;
  return out;
}

std::complex<double> h1_matrix_element(int n, int p, int m, int q,
                                       const ModelParams& params,
                                       const HopAmplitudes& hops,
                                       const DisplacementMatrix& d_plus,
                                       const DisplacementMatrix& d_minus) {
  // -J [hop(2->1) e^{+2phi(b†-b)} + hop(1->2) e^{-2phi(b†-b)}]
  const double t21 = hops.to_site1(p, q);
  const double t12 = hops.to_site2(p, q);
  double v = 0.0;
  if (t21 != 0.0) v += t21 * d_plus.entries(n, m);
  if (t12 != 0.0) v += t12 * d_minus.entries(n, m);
  return {-params.tunneling_J * v, 0.0};
}

} // namespace spinet
