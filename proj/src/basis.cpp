#include "spinet/basis.hpp"

#include <array>
#include <stdexcept>

namespace spinet::basis {

namespace {

// filling index -> bitmask over modes (1up=0, 1dn=1, 2up=2, 2dn=3)
constexpr std::array<unsigned, 6> kFillMask = {
    0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100};

int mask_to_filling(unsigned mask) {
  for (int f = 0; f < 6; ++f)
    if (kFillMask[f] == mask) return f;
  return -1;
}

int popcount_below(unsigned mask, int mode) {
  return __builtin_popcount(mask & ((1u << mode) - 1u));
}

// c_mode then c†_mode' applied to a filling; returns target filling or -1,
// sign in *sign.
int apply_cre_ann(int filling, int cre_mode, int ann_mode, double* sign) {
  unsigned mask = kFillMask[filling];
  if (!(mask & (1u << ann_mode))) return -1;
  double s = (popcount_below(mask, ann_mode) % 2 == 0) ? 1.0 : -1.0;
  mask &= ~(1u << ann_mode);
  if (mask & (1u << cre_mode)) return -1;
  if (popcount_below(mask, cre_mode) % 2 != 0) s = -s;
  mask |= (1u << cre_mode);
  *sign = s;
  return mask_to_filling(mask);
}

} // namespace

int site_occupation(int orbital, int site) {
  const unsigned mask = kFillMask[orbital];
  const unsigned site_bits = (site == 1) ? 0b0011u : 0b1100u;
  return __builtin_popcount(mask & site_bits);
}

int flatten(const BasisState& s, int phonon_cutoff) {
  return (s.orbital * kNuclearCount + s.nuclear) * phonon_cutoff + s.phonon;
}

BasisState unflatten(int index, int phonon_cutoff) {
  BasisState s;
  s.phonon = index % phonon_cutoff;
  const int sp = index / phonon_cutoff;
  s.nuclear = sp % kNuclearCount;
  s.orbital = sp / kNuclearCount;
  return s;
}

const Eigen::Matrix2cd& pauli(int axis) {
  using namespace std::complex_literals;
  static const Eigen::Matrix2cd sx = (Eigen::Matrix2cd() << 0, 1, 1, 0).finished();
  static const Eigen::Matrix2cd sy =
      (Eigen::Matrix2cd() << 0, -1i, 1i, 0).finished();
  static const Eigen::Matrix2cd sz = (Eigen::Matrix2cd() << 1, 0, 0, -1).finished();
  switch (axis) {
    case 0: return sx;
    case 1: return sy;
    case 2: return sz;
  }
  throw std::out_of_range("pauli axis");
}

Eigen::Matrix<double, 6, 6> hop_matrix(int dst_site, int src_site) {
  Eigen::Matrix<double, 6, 6> M = Eigen::Matrix<double, 6, 6>::Zero();
  for (int q = 0; q < 6; ++q) {
    for (int alpha = 0; alpha < 2; ++alpha) { // 0=up, 1=dn
      const int ann = 2 * (src_site - 1) + alpha;
      const int cre = 2 * (dst_site - 1) + alpha;
      double sign = 0.0;
      const int p = apply_cre_ann(q, cre, ann, &sign);
      if (p >= 0) M(p, q) += sign;
    }
  }
  return M;
}

Eigen::Matrix<std::complex<double>, 6, 6> one_body(int site,
                                                   const Eigen::Matrix2cd& op) {
  Eigen::Matrix<std::complex<double>, 6, 6> M =
      Eigen::Matrix<std::complex<double>, 6, 6>::Zero();
  for (int q = 0; q < 6; ++q) {
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        if (op(a, b) == 0.0) continue;
        double sign = 0.0;
        const int p =
            apply_cre_ann(q, 2 * (site - 1) + a, 2 * (site - 1) + b, &sign);
        if (p >= 0) M(p, q) += op(a, b) * sign;
      }
    }
  }
  return M;
}

Eigen::Matrix4cd nuclear_operator(int site, const Eigen::Matrix2cd& op) {
  // chi index = 2*n1 + n2 with n=0 down, n=1 up; spinor component up=0, dn=1
  Eigen::Matrix4cd M = Eigen::Matrix4cd::Zero();
  for (int n1 = 0; n1 < 2; ++n1) {
    for (int n2 = 0; n2 < 2; ++n2) {
      const int col = 2 * n1 + n2;
      for (int np = 0; np < 2; ++np) {
        if (site == 1) {
          M(2 * np + n2, col) += op(1 - np, 1 - n1);
        } else {
          M(2 * n1 + np, col) += op(1 - np, 1 - n2);
        }
      }
    }
  }
  return M;
}

} // namespace spinet::basis
