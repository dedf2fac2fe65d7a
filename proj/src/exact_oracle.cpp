#include "spinet/exact_oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "spinet/basis.hpp"
#include "spinet/constants.hpp"
#include "spinet/vibronic.hpp"

namespace spinet {

namespace {

constexpr double kHbar = constants::hbar_ev_s;

} // namespace

FullHamiltonian build_full_hamiltonian(const ModelParams& p, int dim_cap) {
  const int N = p.phonon_cutoff;
  if (N < 2) throw std::invalid_argument("oracle needs phonon cutoff >= 2");
  const int dim = 24 * N;
  if (dim > dim_cap)
    throw std::invalid_argument("full Hamiltonian dimension " +
                                std::to_string(dim) + " exceeds cap " +
                                std::to_string(dim_cap));

  FullHamiltonian H;
  H.cutoff = N;
  H.matrix = Eigen::MatrixXd::Zero(dim, dim);
  const double hw = p.hbar_omega();

  auto idx = [N](int orbital, int nuclear, int m) {
    return basis::flatten({orbital, nuclear, m}, N);
  };

  // diagonal: phonon ladder + orbital + polaron shift
  for (int f = 0; f < 6; ++f) {
    const int n1 = basis::site_occupation(f, 1);
    const int n2 = basis::site_occupation(f, 2);
    const double pol = p.phi * (n1 - n2);
    const double off = p.epsilon1 * n1 + p.epsilon2 * n2 - hw * pol * pol;
    for (int c = 0; c < 4; ++c)
      for (int m = 0; m < N; ++m) {
        const int i = idx(f, c, m);
        H.matrix(i, i) += off + m * hw;
      }
  }

  // spin part (real in this basis; Pauli-y contributions cancel pairwise)
  const Eigen::MatrixXcd Hs = spin_hamiltonian(p);
  if (Hs.imag().cwiseAbs().maxCoeff() > 1e-14 * (1.0 + Hs.cwiseAbs().maxCoeff()))
    throw std::logic_error("spin Hamiltonian unexpectedly complex");
  for (int a = 0; a < 24; ++a)
    for (int b = 0; b < 24; ++b) {
      const double v = Hs(a, b).real();
      if (v == 0.0) continue;
      for (int m = 0; m < N; ++m)
        H.matrix(idx(a / 4, a % 4, m), idx(b / 4, b % 4, m)) += v;
    }

  // tunneling dressed by displacement operators
  const auto hop12 = basis::hop_matrix(2, 1);
  const auto hop21 = basis::hop_matrix(1, 2);
  const Eigen::MatrixXd Dm = displacement_matrix(-2.0 * p.phi, N).entries;
  const Eigen::MatrixXd Dp = displacement_matrix(+2.0 * p.phi, N).entries;
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b) {
      if (hop12(a, b) != 0.0)
        for (int c = 0; c < 4; ++c)
          for (int n = 0; n < N; ++n)
            for (int m = 0; m < N; ++m)
              H.matrix(idx(a, c, n), idx(b, c, m)) +=
                  -p.tunneling_J * hop12(a, b) * Dm(n, m);
      if (hop21(a, b) != 0.0)
        for (int c = 0; c < 4; ++c)
          for (int n = 0; n < N; ++n)
            for (int m = 0; m < N; ++m)
              H.matrix(idx(a, c, n), idx(b, c, m)) +=
                  -p.tunneling_J * hop21(a, b) * Dp(n, m);
    }

  const double asym =
      (H.matrix - H.matrix.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * (1.0 + H.matrix.cwiseAbs().maxCoeff()))
    throw std::logic_error("full Hamiltonian is not symmetric");
  return H;
}

EvolvedSeries evolve_probability(const ModelParams& p, InitialState initial,
                                 Observable obs, const std::vector<double>& t_grid,
                                 int dim_cap) {
  const int N = p.phonon_cutoff;
  const FullHamiltonian H = build_full_hamiltonian(p, dim_cap);
  const int dim = 24 * N;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H.matrix);
  const Eigen::MatrixXd& V = es.eigenvectors();
  const Eigen::VectorXd& E = es.eigenvalues();

  double tail = 0.0;
  const std::vector<double> weights = truncated_thermal_weights(p, &tail);

  const Eigen::Vector4d elec = (initial == InitialState::Singlet)
                                   ? singlet_state()
                                   : rotated_triplet(p.theta);

  // singlet projector branches: |s, chi_k, n> amplitudes
  const Eigen::Vector4d s4 = singlet_state();

  EvolvedSeries out;
  out.values.assign(t_grid.size(), 0.0);

  for (int j = 0; j < 4; ++j) {
    Eigen::VectorXd spin24 = embed_spin_state(elec, j);
    for (int m = 0; m < N; ++m) {
      const double wm = weights[m];
      if (wm < 1e-18) continue;
      Eigen::VectorXd psi0 = Eigen::VectorXd::Zero(dim);
      for (int a = 0; a < 24; ++a)
        if (spin24(a) != 0.0)
          psi0(basis::flatten({a / 4, a % 4, m}, N)) = spin24(a);
      const Eigen::VectorXd coef = V.transpose() * psi0;
      const double e_ref = coef.array().square().matrix().dot(E);

      for (size_t it = 0; it < t_grid.size(); ++it) {
        Eigen::VectorXcd phased(dim);
        for (int k = 0; k < dim; ++k) {
          const double a = -E(k) * t_grid[it] / kHbar;
          phased(k) = std::complex<double>(std::cos(a), std::sin(a)) * coef(k);
        }
        const Eigen::VectorXcd psi = V * phased;
        out.max_norm_defect =
            std::max(out.max_norm_defect, std::abs(psi.squaredNorm() - 1.0));
        const Eigen::VectorXcd back = V.transpose() * psi;
        const double e_now = back.array().abs2().matrix().dot(E);
        out.max_energy_drift =
            std::max(out.max_energy_drift, std::abs(e_now - e_ref));

        double prob = 0.0;
        if (obs == Observable::AcceptorOccupancy) {
          for (int c = 0; c < 4; ++c)
            for (int mm = 0; mm < N; ++mm)
              prob += std::norm(psi(basis::flatten({basis::kSite2Double, c, mm}, N)));
        } else {
          for (int k = 0; k < 4; ++k) {
            // amplitude on |s, chi_k, n> for each n
            for (int mm = 0; mm < N; ++mm) {
              std::complex<double> amp = 0.0;
              for (int e = 0; e < 4; ++e)
                if (s4(e) != 0.0)
                  amp += s4(e) * psi(basis::flatten({e + 1, k, mm}, N));
              prob += std::norm(amp);
            }
          }
        }
        out.values[it] += wm / 4.0 * prob;
      }
    }
  }
  return out;
}

} // namespace spinet
