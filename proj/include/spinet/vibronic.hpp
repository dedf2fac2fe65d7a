#pragma once

#include <Eigen/Dense>
#include <complex>

#include "spinet/params.hpp"
#include "spinet/spin_system.hpp"

namespace spinet {

// Truncated matrix of <n| e^{lambda(b†-b)} |m>, real for real lambda.
struct DisplacementMatrix {
  double lambda = 0.0;
  Eigen::MatrixXd entries; // entries(n, m)
};

// Closed form (Laguerre recurrence + log-factorials). When cross_validate is
// set, compares the interior half-block against exponentiation of the
// truncated generator and throws std::logic_error beyond 1e-8; requires
// cutoff >= 2 in that case.
DisplacementMatrix displacement_matrix(double lambda, int cutoff,
                                       bool cross_validate = false);

// Oracle path: exp of the truncated antihermitian lambda(b†-b).
Eigen::MatrixXd displacement_by_exponential(double lambda, int cutoff);

// Orbital + polaron energy of a Table-I row (0-based): eps1 n1 + eps2 n2
// - hbar omega (sum_j phi_j n_j)^2 with phi_1 = -phi_2 = phi.
double sector_offset(int table_row, const ModelParams& p);

// E0_{m,row} = m hbar omega + E_s(row) + sector offset.
double h0_energy(int m, int table_row, const ModelParams& p,
                 const SpinEigensystem& spin);
double h0_energy(int m, int table_row, const ModelParams& p);

// Hop amplitudes between Table-I rows: to_site2(p,q) = <phi_p| sum_a
// c†_{2a} c_{1a} |phi_q>, and the reverse direction.
struct HopAmplitudes {
  Eigen::Matrix<double, 24, 24> to_site2;
  Eigen::Matrix<double, 24, 24> to_site1;
};

HopAmplitudes hop_amplitudes(const SpinEigensystem& spin);

// <psi0_{n,p}| H1 |psi0_{m,q}>: -J (hop amplitude) <n|D(±2phi)|m>, the
// displacement sign set by the hop direction.
std::complex<double> h1_matrix_element(int n, int p, int m, int q,
                                       const ModelParams& params,
                                       const HopAmplitudes& hops,
                                       const DisplacementMatrix& d_plus,
                                       const DisplacementMatrix& d_minus);

} // namespace spinet
