#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace spinet {

// Model parameters for the two-site radical pair with one relative
// vibrational mode. All energies in eV, omega in rad/s, field in tesla.
struct ModelParams {
  double epsilon1 = 0.0;       // donor orbital energy
  double epsilon2 = 0.0;       // acceptor orbital energy
  double tunneling_J = 0.0;    // inter-site tunneling integral
  double omega = 0.0;          // relative vibration angular frequency
  double phi = 0.0;            // dimensionless polaron displacement
  double B0 = 0.0;             // field magnitude
  double theta = 0.0;          // field inclination angle, [0, pi]
  double g1 = 0.0;             // hyperfine coupling, site 1
  double g2 = 0.0;             // hyperfine coupling, site 2
  double temperature = 0.0;    // kelvin
  int phonon_cutoff = kAutoCutoff;  // Fock truncation; kAutoCutoff = resolve from T
  double broadening_eta = 0.0; // Lorentzian width regularizing delta functions
  int cutoff_hard_max = 512;   // cap applied when resolving an auto cutoff

  // set by validate_params
  bool cutoff_cap_bound = false;
  bool phonon_cutoff_auto = false; // original request was "auto"

  static constexpr int kAutoCutoff = 0;

  double delta() const { return epsilon1 - epsilon2; }
  double hbar_omega() const;
  double beta() const;               // 1/(kB T), 1/eV
  double partition_function() const; // Z = 1/(1 - exp(-beta hbar omega))
};

class ParamError : public std::runtime_error {
public:
  explicit ParamError(const std::string& msg) : std::runtime_error(msg) {}
};

// Checks invariants (throws ParamError naming the first violation) and
// resolves an auto phonon cutoff to the smallest M whose cumulative thermal
// weight reaches 1 - 1e-8, capped at cutoff_hard_max.
ModelParams validate_params(ModelParams p);

// Boltzmann weight e^{-beta m hbar omega} / Z of phonon level m.
double thermal_weight(int m, const ModelParams& p);

// Weights of levels 0..cutoff-1 renormalized to sum to 1 on the truncated
// space; tail_mass (if non-null) receives the untruncated mass beyond it.
std::vector<double> truncated_thermal_weights(const ModelParams& p,
                                              double* tail_mass = nullptr);

// Strict config ingestion (JSON). Unknown or missing keys are errors.
ModelParams load_config(const std::string& path, int cutoff_hard_max = 512);
ModelParams parse_config(const std::string& json_text, int cutoff_hard_max = 512);

} // namespace spinet
