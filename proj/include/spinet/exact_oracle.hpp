#pragma once

#include <Eigen/Dense>
#include <vector>

#include "spinet/params.hpp"
#include "spinet/perturbation.hpp"

namespace spinet {

// Full transformed Hamiltonian on the product basis indexed by
// basis::flatten (orbital x nuclear x phonon). Built from second-quantized
// operators; shares no construction with the Table-I closed forms.
struct FullHamiltonian {
  int cutoff = 0;
  Eigen::MatrixXd matrix; // real symmetric, dim 24*cutoff
};

FullHamiltonian build_full_hamiltonian(const ModelParams& p, int dim_cap = 4096);

enum class Observable { AcceptorOccupancy, SingletProjector };

struct EvolvedSeries {
  std::vector<double> values;    // one per time point
  double max_norm_defect = 0.0;  // max over branches/steps of |norm - 1|
  double max_energy_drift = 0.0; // max |<H>(t) - <H>(0)| over branches, eV
};

// Evolves the thermal/nuclear mixture of the given initial electron state by
// spectral decomposition and applies the observable projector.
EvolvedSeries evolve_probability(const ModelParams& p, InitialState initial,
                                 Observable obs, const std::vector<double>& t_grid,
                                 int dim_cap = 4096);

} // namespace spinet
