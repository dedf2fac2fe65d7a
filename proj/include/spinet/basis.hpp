#pragma once

#include <Eigen/Dense>
#include <complex>

namespace spinet::basis {

// Fermionic modes ordered (1up, 1dn, 2up, 2dn); two-electron states are
// c†_a c†_b |0> with a < b. The six fillings, indexed 0..5:
//   0: site-1 doubly occupied (1up,1dn)
//   1: (1up,2up)   2: (1up,2dn)   3: (1dn,2up)   4: (1dn,2dn)
//   5: site-2 doubly occupied (2up,2dn)
inline constexpr int kOrbitalCount = 6;
inline constexpr int kNuclearCount = 4; // chi: dd, du, ud, uu
inline constexpr int kSpinDim = kOrbitalCount * kNuclearCount; // 24

inline constexpr int kSite1Double = 0;
inline constexpr int kUpUp = 1;
inline constexpr int kUpDown = 2;
inline constexpr int kDownUp = 3;
inline constexpr int kDownDown = 4;
inline constexpr int kSite2Double = 5;

// Electron count on site (1 or 2) for a filling index.
int site_occupation(int orbital, int site);

// Composite basis label; flattened index runs over
// orbital-major, then nuclear, then phonon.
struct BasisState {
  int orbital = 0; // 0..5
  int nuclear = 0; // 0..3, chi index (dd=0, du=1, ud=2, uu=3)
  int phonon = 0;  // 0..cutoff-1

  bool operator==(const BasisState&) const = default;
};

int flatten(const BasisState& s, int phonon_cutoff);
BasisState unflatten(int index, int phonon_cutoff);

// Pauli matrix (axis 0=x,1=y,2=z) in the (up, down) spinor basis.
const Eigen::Matrix2cd& pauli(int axis);

// sum_alpha c†_{dst,alpha} c_{src,alpha} on the 6-dim filling space, with
// signs from the canonical mode ordering.
Eigen::Matrix<double, 6, 6> hop_matrix(int dst_site, int src_site);

// One-body electron operator sum_{ab} op(a,b) c†_{site,a} c_{site,b}.
Eigen::Matrix<std::complex<double>, 6, 6> one_body(int site,
                                                   const Eigen::Matrix2cd& op);

// Nuclear-spin operator acting on nuclear index `site` (1 or 2) in the
// 4-dim chi basis.
Eigen::Matrix4cd nuclear_operator(int site, const Eigen::Matrix2cd& op);

} // namespace spinet::basis
