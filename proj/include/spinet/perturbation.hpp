#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <memory>
#include <mutex>
#include <vector>

#include "spinet/params.hpp"
#include "spinet/spin_system.hpp"
#include "spinet/vibronic.hpp"

namespace spinet {

enum class InitialState { Singlet, Triplet }; // Triplet is rotated by params.theta
enum class FinalSector { Acceptor, All };

struct RateChannel {
  int nuclear_j; // 0..3
  int m, n;      // phonon indices
  int row;       // final Table-I row, 0-based (20..23)
  double value;  // contribution to the rate, 1/s
};

struct RateResult {
  double rate = 0.0; // 1/s
  double eta = 0.0;  // broadening used, eV
  // rate decomposed over (nuclear branch, final acceptor row), phonons summed
  Eigen::Matrix4d by_branch_and_row = Eigen::Matrix4d::Zero();
  std::vector<RateChannel> channels; // per (j,m,n,row) when requested
};

// First-order time-dependent perturbation theory on top of the Table-I
// eigenbasis. Immutable after construction; safe to share across threads.
class PerturbationEngine {
public:
  explicit PerturbationEngine(const ModelParams& validated);

  const ModelParams& params() const { return params_; }
  const SpinEigensystem& spin() const { return spin_; }
  double thermal_tail_mass() const { return tail_mass_; }

  // c_{j,q} = <phi_q| state x chi_j >, unit-norm 24-vector over rows.
  Eigen::VectorXd initial_expansion(InitialState which, int nuclear_index) const;
  Eigen::VectorXd initial_expansion(const Eigen::VectorXd& spin24) const;

  // c_{n,p}(tau) for a source branch with phonon index m and coefficients
  // c0 over Table-I rows; (n,p) must lie outside the source support.
  std::complex<double> first_order_amplitude(int n, int p, int m,
                                             const Eigen::VectorXd& c0,
                                             double tau) const;

  // Thermally and nuclear averaged transfer probability at time tau.
  double reaction_probability(InitialState which, double tau,
                              FinalSector sector = FinalSector::Acceptor) const;
  // Same for four custom orthonormal nuclear branches (24-dim spin states).
  double reaction_probability(const std::array<Eigen::VectorXd, 4>& branches,
                              double tau, FinalSector sector) const;

  // Golden-rule rate onto the acceptor rows, Lorentzian-regularized.
  // Degenerate spin channels are summed coherently before squaring.
  RateResult reaction_rate(InitialState which, bool keep_channels = false) const;

  // Zeroth-order-in-J interconversion probability with second-order
  // corrected phases.
  double triplet_to_singlet_probability(double t) const;
  std::vector<double> triplet_to_singlet_series(const std::vector<double>& ts) const;

private:
  friend struct EngineTestAccess;
  ModelParams params_;
  SpinEigensystem spin_;
  HopAmplitudes hops_;
  std::shared_ptr<const DisplacementMatrix> d_plus_, d_minus_;
  std::vector<double> weights_; // renormalized over the truncated ladder
  double tail_mass_ = 0.0;
  double off_sep_ = 0.0, off_d1_ = 0.0, off_d2_ = 0.0;
  std::vector<std::vector<int>> degeneracy_classes_; // over rows 0..15

  mutable std::once_flag shift_once_;
  mutable Eigen::MatrixXd energy_shifts_; // (m, q<16), second-order in J

  const Eigen::MatrixXd& second_order_shifts() const;
};

struct FieldScanPoint {
  double B0 = 0.0;
  double max_probability = 0.0;
  double argmax_time = 0.0;
};

// max over the time grid of the interconversion probability per field value.
std::vector<FieldScanPoint> field_magnitude_scan(double theta,
                                                 const std::vector<double>& B0_grid,
                                                 const ModelParams& base,
                                                 const std::vector<double>& t_grid);

} // namespace spinet
