#include "spinet/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "spinet/basis.hpp"
#include "spinet/constants.hpp"

namespace spinet {

namespace {

constexpr double kHbar = constants::hbar_ev_s;

// process-wide cache of displacement matrices, one entry per (lambda, N)
std::shared_ptr<const DisplacementMatrix> cached_displacement(double lambda,
                                                              int cutoff) {
  static std::mutex mu;
  static std::map<std::pair<double, int>, std::shared_ptr<const DisplacementMatrix>>
      cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(lambda, cutoff);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto d = std::make_shared<DisplacementMatrix>(
      displacement_matrix(lambda, cutoff, /*cross_validate=*/cutoff >= 2));
  cache.emplace(key, d);
  return d;
}

// (e^{i w tau} - 1) / dE with the series branch near resonance
std::complex<double> oscillation_factor(double dE, double tau) {
  const double w = dE / kHbar;
  const std::complex<double> i1(0.0, 1.0);
  if (std::abs(w * tau) < 1e-6)
    return (i1 * tau / kHbar) * (1.0 + i1 * w * tau / 2.0);
  return (std::exp(i1 * w * tau) - 1.0) / dE;
}

double lorentzian(double dE, double eta) {
  return (eta / M_PI) / (dE * dE + eta * eta);
}

} // namespace

PerturbationEngine::PerturbationEngine(const ModelParams& validated)
    : params_(validated), spin_(table1_eigensystem(validated)) {
  if (params_.phonon_cutoff < 1)
    throw ParamError("engine requires validated params (resolved cutoff)");
  hops_ = hop_amplitudes(spin_);
  d_plus_ = cached_displacement(2.0 * params_.phi, params_.phonon_cutoff);
  d_minus_ = cached_displacement(-2.0 * params_.phi, params_.phonon_cutoff);
  weights_ = truncated_thermal_weights(params_, &tail_mass_);
  off_sep_ = sector_offset(0, params_);
  off_d1_ = sector_offset(16, params_);
  off_d2_ = sector_offset(20, params_);

  // group rows 0..15 into degenerate classes of E_sq
  std::array<int, 16> order;
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return spin_.energies[a] < spin_.energies[b];
  });
  double scale = 0.0;
  for (int q = 0; q < 16; ++q) scale = std::max(scale, std::abs(spin_.energies[q]));
  const double tol = 1e-12 * scale;
  std::vector<int> cur{order[0]};
  for (int i = 1; i < 16; ++i) {
    if (spin_.energies[order[i]] - spin_.energies[cur.back()] <= tol) {
      cur.push_back(order[i]);
    } else {
      degeneracy_classes_.push_back(cur);
      cur = {order[i]};
    }
  }
  degeneracy_classes_.push_back(cur);
}

Eigen::VectorXd PerturbationEngine::initial_expansion(
    const Eigen::VectorXd& spin24) const {
  return spin_.states.transpose() * spin24;
}

Eigen::VectorXd PerturbationEngine::initial_expansion(InitialState which,
                                                      int nuclear_index) const {
  const Eigen::Vector4d elec = (which == InitialState::Singlet)
                                   ? singlet_state()
                                   : rotated_triplet(params_.theta);
  return initial_expansion(embed_spin_state(elec, nuclear_index));
}

std::complex<double> PerturbationEngine::first_order_amplitude(
    int n, int p, int m, const Eigen::VectorXd& c0, double tau) const {
  std::complex<double> acc = 0.0;
  for (int q = 0; q < 24; ++q) {
    if (c0(q) == 0.0) continue;
    const std::complex<double> h = h1_matrix_element(
        n, p, m, q, params_, hops_, *d_plus_, *d_minus_);
    if (h == 0.0) continue;
    const double dE = h0_energy(n, p, params_, spin_) -
                      h0_energy(m, q, params_, spin_);
    acc += c0(q) * h * oscillation_factor(dE, tau);
  }
  return -acc;
}

double PerturbationEngine::reaction_probability(InitialState which, double tau,
                                                FinalSector sector) const {
  std::array<Eigen::VectorXd, 4> branches;
  const Eigen::Vector4d elec = (which == InitialState::Singlet)
                                   ? singlet_state()
                                   : rotated_triplet(params_.theta);
  for (int j = 0; j < 4; ++j) branches[j] = embed_spin_state(elec, j);
  return reaction_probability(branches, tau, sector);
}

double PerturbationEngine::reaction_probability(
    const std::array<Eigen::VectorXd, 4>& branches, double tau,
    FinalSector sector) const {
  if (tau < 0.0) throw std::invalid_argument("tau must be nonnegative");
  const int N = params_.phonon_cutoff;
  const double J = params_.tunneling_J;
  const double hw = params_.hbar_omega();

  // c_{j,q} T(p,q) products, fixed over the phonon sums
  std::array<Eigen::VectorXd, 4> c;
  for (int j = 0; j < 4; ++j) {
    c[j] = initial_expansion(branches[j]);
    for (int q = 16; q < 24; ++q)
      if (std::abs(c[j](q)) > 1e-12)
        throw std::invalid_argument(
            "initial state must lie in the separated-electron sector");
  }
  struct Sector {
    int p_begin, p_end;
    const Eigen::Matrix<double, 24, 24>* T;
    const Eigen::MatrixXd* D;
    double offset;
  };
  std::vector<Sector> sectors;
  sectors.push_back({20, 24, &hops_.to_site2, &d_minus_->entries, off_d2_});
  if (sector == FinalSector::All)
    sectors.push_back({16, 20, &hops_.to_site1, &d_plus_->entries, off_d1_});

  double total = 0.0;
  std::array<std::complex<double>, 16> f;
  for (const Sector& s : sectors) {
    // M(j*4 + (p - p_begin), q) with only rows carrying nonzero hops
    double M[16][16];
    for (int j = 0; j < 4; ++j)
      for (int p = s.p_begin; p < s.p_end; ++p)
        for (int q = 0; q < 16; ++q)
          M[j * 4 + (p - s.p_begin)][q] = c[j](q) * (*s.T)(p, q);
    for (int m = 0; m < N; ++m) {
      const double wm = weights_[m];
      if (wm < 1e-18) continue;
      for (int n = 0; n < N; ++n) {
        const double fc = (*s.D)(n, m);
        if (fc == 0.0) continue;
        for (int q = 0; q < 16; ++q) {
          const double dE =
              (n - m) * hw + s.offset - off_sep_ - spin_.energies[q];
          f[q] = oscillation_factor(dE, tau);
        }
        const double pref = wm / 4.0 * J * J * fc * fc;
        for (int jp = 0; jp < 16; ++jp) {
          std::complex<double> a = 0.0;
          const double* row = M[jp];
          for (int q = 0; q < 16; ++q) a += row[q] * f[q];
          total += pref * std::norm(a);
        }
      }
    }
  }
  return total;
}

RateResult PerturbationEngine::reaction_rate(InitialState which,
                                             bool keep_channels) const {
  const int N = params_.phonon_cutoff;
  const double J = params_.tunneling_J;
  const double hw = params_.hbar_omega();
  const double eta = params_.broadening_eta;

  std::array<Eigen::VectorXd, 4> c;
  for (int j = 0; j < 4; ++j) c[j] = initial_expansion(which, j);

  RateResult out;
  out.eta = eta;
  const double prefactor = M_PI * J * J / (4.0 * kHbar);

  // coherent class sums S(j, p, class); a class shares one energy E_cls
  struct ClassTerm {
    double energy;
    double weight[16]; // indexed j*4 + (p-20), value 2*|sum|^2
  };
  std::vector<ClassTerm> terms;
  for (const auto& cls : degeneracy_classes_) {
    ClassTerm t{};
    t.energy = spin_.energies[cls.front()];
    bool any = false;
    for (int j = 0; j < 4; ++j)
      for (int p = 20; p < 24; ++p) {
        double sum = 0.0;
        for (int q : cls) sum += c[j](q) * hops_.to_site2(p, q);
        t.weight[j * 4 + (p - 20)] = 2.0 * sum * sum;
        any |= (sum != 0.0);
      }
    if (any) terms.push_back(t);
  }

  for (int m = 0; m < N; ++m) {
    const double wm = weights_[m];
    if (wm < 1e-18) continue;
    for (int n = 0; n < N; ++n) {
      const double fc2 = d_minus_->entries(n, m) * d_minus_->entries(n, m);
      if (fc2 == 0.0) continue;
      for (const ClassTerm& t : terms) {
        const double dE = (n - m) * hw + off_d2_ - off_sep_ - t.energy;
        const double lor = lorentzian(dE, eta);
        const double common = prefactor * wm * fc2 * lor;
        for (int jp = 0; jp < 16; ++jp) {
          if (t.weight[jp] == 0.0) continue;
          const double v = common * t.weight[jp];
          out.rate += v;
          out.by_branch_and_row(jp / 4, jp % 4) += v;
          if (keep_channels)
            out.channels.push_back({jp / 4, m, n, 20 + jp % 4, v});
        }
      }
    }
  }
  if (keep_channels) {
    // merge duplicates from distinct degeneracy classes at the same (j,m,n,p)
    std::map<std::tuple<int, int, int, int>, double> merged;
    for (const auto& ch : out.channels)
      merged[{ch.nuclear_j, ch.m, ch.n, ch.row}] += ch.value;
    out.channels.clear();
    for (const auto& [k, v] : merged)
      out.channels.push_back(
          {std::get<0>(k), std::get<1>(k), std::get<2>(k), std::get<3>(k), v});
  }
  return out;
}

const Eigen::MatrixXd& PerturbationEngine::second_order_shifts() const {
  std::call_once(shift_once_, [this] {
    const int N = params_.phonon_cutoff;
    const double J = params_.tunneling_J;
    const double hw = params_.hbar_omega();
    energy_shifts_ = Eigen::MatrixXd::Zero(N, 16);
    for (int q = 0; q < 16; ++q) {
      for (int p = 16; p < 24; ++p) {
        const bool acceptor = p >= 20;
        const double t = acceptor ? hops_.to_site2(p, q) : hops_.to_site1(p, q);
        if (t == 0.0) continue;
        const Eigen::MatrixXd& D =
            acceptor ? d_minus_->entries : d_plus_->entries;
        const double off = acceptor ? off_d2_ : off_d1_;
        const double jt2 = J * J * t * t;
        for (int m = 0; m < N; ++m) {
          double acc = 0.0;
          for (int n = 0; n < N; ++n) {
            const double num = D(n, m) * D(n, m);
            if (num == 0.0) continue;
            const double den =
                (m - n) * hw + off_sep_ + spin_.energies[q] - off;
            acc += num / den;
          }
          energy_shifts_(m, q) += jt2 * acc;
        }
      }
    }
  });
  return energy_shifts_;
}

std::vector<double> PerturbationEngine::triplet_to_singlet_series(
    const std::vector<double>& ts) const {
  const int N = params_.phonon_cutoff;
  const Eigen::MatrixXd& shifts = second_order_shifts();

  // O(jk, q) = <t~, chi_k | phi_q> <phi_q | s, chi_j>
  std::array<Eigen::VectorXd, 4> ct, cs;
  for (int j = 0; j < 4; ++j) {
    ct[j] = initial_expansion(InitialState::Triplet, j);
    cs[j] = initial_expansion(InitialState::Singlet, j);
  }
  double O[16][16];
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k)
      for (int q = 0; q < 16; ++q) O[j * 4 + k][q] = ct[k](q) * cs[j](q);

  std::vector<double> out;
  out.reserve(ts.size());
  std::array<std::complex<double>, 16> ph;
  for (double t : ts) {
    double tot = 0.0;
    for (int m = 0; m < N; ++m) {
      const double wm = weights_[m];
      if (wm < 1e-18) continue;
      for (int q = 0; q < 16; ++q) {
        const double a = -(spin_.energies[q] + shifts(m, q)) * t / kHbar;
        ph[q] = {std::cos(a), std::sin(a)};
      }
      double s = 0.0;
      for (int jk = 0; jk < 16; ++jk) {
        std::complex<double> d = 0.0;
        for (int q = 0; q < 16; ++q) d += O[jk][q] * ph[q];
        s += std::norm(d);
      }
      tot += wm / 4.0 * s;
    }
    out.push_back(tot);
  }
  return out;
}

double PerturbationEngine::triplet_to_singlet_probability(double t) const {
  return triplet_to_singlet_series({t}).front();
}

std::vector<FieldScanPoint> field_magnitude_scan(
    double theta, const std::vector<double>& B0_grid, const ModelParams& base,
    const std::vector<double>& t_grid) {
  if (B0_grid.empty()) throw std::invalid_argument("B0 grid must be nonempty");
  if (t_grid.empty()) throw std::invalid_argument("time grid must be nonempty");
  std::vector<FieldScanPoint> out;
  out.reserve(B0_grid.size());
  for (double b : B0_grid) {
    ModelParams p = base;
    p.theta = theta;
    p.B0 = b;
    PerturbationEngine engine(validate_params(p));
    const std::vector<double> series = engine.triplet_to_singlet_series(t_grid);
    const auto it = std::max_element(series.begin(), series.end());
    out.push_back({b, *it,
                   t_grid[static_cast<size_t>(std::distance(series.begin(), it))]});
  }
  return out;
}

} // namespace spinet
