#include "spinet/spin_system.hpp"

#include <cmath>
#include <stdexcept>

#include "spinet/basis.hpp"
#include "spinet/constants.hpp"

namespace spinet {

double mixing_angle(double g, double B0) {
  double theta = std::atan2(2.0 * g, constants::bohr_magneton_ev_per_T * B0);
  if (theta < 0.0) theta += M_PI;
  return theta;
}

SiteEigensystem site_eigensystem(int site, const ModelParams& p) {
  const double g = (site == 1) ? p.g1 : p.g2;
  const double mu = constants::bohr_magneton_ev_per_T * p.B0;
  const double root = std::sqrt(mu * mu + 4.0 * g * g);

  SiteEigensystem sys;
  sys.theta = mixing_angle(g, p.B0);
  const double c = std::cos(sys.theta / 2.0);
  const double s = std::sin(sys.theta / 2.0);

  // basis (e,n): 0=dd, 1=du, 2=ud, 3=uu  (index 2*e+n, 0 down / 1 up)
  sys.states[0] = Eigen::Vector4d(1, 0, 0, 0);
  sys.states[1] = Eigen::Vector4d(0, c, -s, 0);
  sys.states[2] = Eigen::Vector4d(0, s, c, 0);
  sys.states[3] = Eigen::Vector4d(0, 0, 0, 1);
  sys.energies = {mu - g, g + root, g - root, -mu - g};

  // verify against a direct diagonalization of -muB B0 Sz - g I.S
  Eigen::Matrix4cd H = Eigen::Matrix4cd::Zero();
  for (int e = 0; e < 2; ++e)
    for (int n = 0; n < 2; ++n)
      for (int ep = 0; ep < 2; ++ep)
        for (int np = 0; np < 2; ++np) {
          std::complex<double> v = 0.0;
          if (n == np)
            v += -mu * basis::pauli(2)(1 - ep, 1 - e);
          for (int axis = 0; axis < 3; ++axis)
            v += -g * basis::pauli(axis)(1 - ep, 1 - e) *
                 basis::pauli(axis)(1 - np, 1 - n);
          H(2 * ep + np, 2 * e + n) = v;
        }
  const double scale = std::max({std::abs(sys.energies[0]), std::abs(sys.energies[1]),
                                 std::abs(sys.energies[2]), std::abs(sys.energies[3]),
                                 1e-300});
  for (int k = 0; k < 4; ++k) {
    const Eigen::Vector4cd r =
        H * sys.states[k].cast<std::complex<double>>() -
        sys.energies[k] * sys.states[k].cast<std::complex<double>>();
    if (r.norm() > 1e-12 * scale)
      throw std::logic_error("site eigensystem closed form disagrees with "
                             "numerical diagonalization");
  }
  return sys;
}

SpinEigensystem table1_eigensystem(const ModelParams& p) {
  const SiteEigensystem s1 = site_eigensystem(1, p);
  const SiteEigensystem s2 = site_eigensystem(2, p);

  SpinEigensystem sys;
  sys.states.setZero();

  // electron spins (e1,e2) -> filling: uu=1, ud=2, du=3, dd=4 (e: 0 dn, 1 up)
  auto filling_of = [](int e1, int e2) {
    return e1 ? (e2 ? basis::kUpUp : basis::kUpDown)
              : (e2 ? basis::kDownUp : basis::kDownDown);
  };

  int q = 0;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b, ++q) {
      for (int e1 = 0; e1 < 2; ++e1)
        for (int n1 = 0; n1 < 2; ++n1)
          for (int e2 = 0; e2 < 2; ++e2)
            for (int n2 = 0; n2 < 2; ++n2) {
              const double amp =
                  s1.states[a](2 * e1 + n1) * s2.states[b](2 * e2 + n2);
              if (amp == 0.0) continue;
              const int idx = filling_of(e1, e2) * 4 + (2 * n1 + n2);
              sys.states(idx, q) += amp;
            }
      sys.energies[q] = s1.energies[a] + s2.energies[b];
    }
  }
  for (int fill : {basis::kSite1Double, basis::kSite2Double}) {
    for (int chi = 0; chi < 4; ++chi, ++q) {
      sys.states(fill * 4 + chi, q) = 1.0;
      sys.energies[q] = 0.0;
    }
  }
  return sys;
}

Eigen::MatrixXcd spin_hamiltonian(const ModelParams& p) {
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(24, 24);
  const double mu = constants::bohr_magneton_ev_per_T * p.B0;
  for (int site = 1; site <= 2; ++site) {
    const double g = (site == 1) ? p.g1 : p.g2;
    const auto Sz = basis::one_body(site, basis::pauli(2));
    for (int a = 0; a < 6; ++a)
      for (int b = 0; b < 6; ++b)
        if (Sz(a, b) != 0.0)
          for (int c = 0; c < 4; ++c) H(a * 4 + c, b * 4 + c) += -mu * Sz(a, b);
    for (int axis = 0; axis < 3; ++axis) {
      const auto S = basis::one_body(site, basis::pauli(axis));
      const auto I = basis::nuclear_operator(site, basis::pauli(axis));
      for (int a = 0; a < 6; ++a)
        for (int b = 0; b < 6; ++b)
          if (S(a, b) != 0.0)
            for (int c = 0; c < 4; ++c)
              for (int d = 0; d < 4; ++d)
                if (I(c, d) != 0.0)
                  H(a * 4 + c, b * 4 + d) += -g * S(a, b) * I(c, d);
    }
  }
  return H;
}

Eigen::Vector4d singlet_state() {
  const double r = 1.0 / std::sqrt(2.0);
  return Eigen::Vector4d(0, r, -r, 0);
}

Eigen::Vector4d triplet_state() {
  const double r = 1.0 / std::sqrt(2.0);
  return Eigen::Vector4d(0, r, r, 0);
}

Eigen::Vector4d rotate_y(const Eigen::Vector4d& state, double theta) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  // per-spin rotation in (up, down): up -> c up - s dn, dn -> s up + c dn
  Eigen::Matrix2d R;
  R << c, s, -s, c;
  Eigen::Matrix4d R2 = Eigen::Matrix4d::Zero();
  // electron sector ordering (uu, ud, du, dd) = (spin1, spin2) with up=0
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int ap = 0; ap < 2; ++ap)
        for (int bp = 0; bp < 2; ++bp)
          R2(2 * ap + bp, 2 * a + b) = R(ap, a) * R(bp, b);
  return R2 * state;
}

Eigen::Vector4d rotated_triplet(double theta) {
  return rotate_y(triplet_state(), theta);
}

Eigen::VectorXd embed_spin_state(const Eigen::Vector4d& electron, int nuclear) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(24);
  for (int k = 0; k < 4; ++k) v((k + 1) * 4 + nuclear) = electron(k);
  return v;
}

Eigen::Matrix4d nuclear_rotation_y(double theta) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  Eigen::Matrix2d R;
  R << c, s, -s, c;
  Eigen::Matrix4d R2 = Eigen::Matrix4d::Zero();
  // chi ordering (dd, du, ud, uu): index 2*n1+n2 with n=1 up; spinor up=0
  for (int n1 = 0; n1 < 2; ++n1)
    for (int n2 = 0; n2 < 2; ++n2)
      for (int m1 = 0; m1 < 2; ++m1)
        for (int m2 = 0; m2 < 2; ++m2)
          R2(2 * m1 + m2, 2 * n1 + n2) = R(1 - m1, 1 - n1) * R(1 - m2, 1 - n2);
  return R2;
}

} // namespace spinet
