#pragma once

#include <Eigen/Dense>
#include <array>

#include "spinet/params.hpp"

namespace spinet {

// Electron-nuclear mixing angle theta_j = atan(2 g / (muB B0)), in [0, pi).
double mixing_angle(double g, double B0);

// Eigensystem of one electron-nuclear pair, -muB B0 Sz - g I.S with Pauli
// operators. Site-space basis index = 2*e + n, e/n = 0 down, 1 up.
struct SiteEigensystem {
  std::array<Eigen::Vector4d, 4> states;
  std::array<double, 4> energies; // e1..e4, eV
  double theta = 0.0;
};

// Closed-form eigenpairs, verified on construction against a direct 4x4
// diagonalization (throws std::logic_error on disagreement).
SiteEigensystem site_eigensystem(int site, const ModelParams& p);

// The 24 eigenstates of the transformed spin Hamiltonian on the
// filling x nuclear space, ordered: rows 0..15 products |e_a^(1)>|e_b^(2)>
// (a major), rows 16..19 site-1 doubly occupied x chi, rows 20..23 site-2.
struct SpinEigensystem {
  Eigen::Matrix<double, 24, 24> states; // column q = row q state
  std::array<double, 24> energies;      // E_sq, zero on rows 16..23
};

SpinEigensystem table1_eigensystem(const ModelParams& p);

// Numeric spin Hamiltonian built from second-quantized Pauli operators on
// the 24-dim space; the independent check path for the closed forms above.
Eigen::MatrixXcd spin_hamiltonian(const ModelParams& p);

// Electron-spin sector states over fillings (uu, ud, du, dd).
Eigen::Vector4d singlet_state();
Eigen::Vector4d triplet_state();

// Rotation about y by theta applied to each electron spin; maps the triplet
// onto cos(theta)|t> + sin(theta)(|uu> - |dd>)/sqrt(2).
Eigen::Vector4d rotate_y(const Eigen::Vector4d& state, double theta);
Eigen::Vector4d rotated_triplet(double theta);

// Embeds an electron-sector state with nuclear configuration chi into the
// 24-dim filling x nuclear space.
Eigen::VectorXd embed_spin_state(const Eigen::Vector4d& electron, int nuclear);

// Same rotation applied to a nuclear frame (4-dim chi space).
Eigen::Matrix4d nuclear_rotation_y(double theta);

} // namespace spinet
