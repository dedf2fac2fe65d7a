#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spinet/params.hpp"
#include "spinet/perturbation.hpp"

namespace spinet {

enum class SweepObservable { Pt, Ps, Kt, Ks, Pts, PtsMax, B0Scan };

const char* observable_name(SweepObservable o);
std::optional<SweepObservable> observable_from_name(const std::string& name);

// Linear grid; count 1 pins the axis to `start`.
struct AxisSpec {
  double start = 0.0;
  double stop = 0.0;
  int count = 1;
  bool explicitly_set = false;

  std::vector<double> values() const;
};

struct SweepSpec {
  SweepObservable observable = SweepObservable::Pt;
  AxisSpec time, theta, B0, temperature;
  FinalSector final_sector = FinalSector::Acceptor;
  int workers = 1;
  bool time_in_inverse_omega = false; // print t*omega instead of seconds
};

struct SweepRow {
  double theta = 0.0;
  double time = 0.0; // argmax time for max-over-t observables
  double B0 = 0.0;
  double temperature = 0.0;
  double value = 0.0;
  std::string flags; // semicolon-joined, empty if none
};

struct SweepResult {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<SweepRow> rows;
  double omega = 0.0; // for the dimensionless time column option
};

// Evaluates the observable on the Cartesian grid. Rows are ordered
// lexicographically in (theta, time, B0, temperature) regardless of the
// worker count; re-running an identical spec is byte-identical.
SweepResult run_sweep(const SweepSpec& spec, const ModelParams& base);

void write_sweep_csv(std::ostream& os, const SweepSpec& spec,
                     const SweepResult& result);

std::string format_g17(double v);

struct OracleCompareRow {
  double time = 0.0;
  double perturbative = 0.0;
  double exact = 0.0;
};

struct OracleCompareResult {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<OracleCompareRow> rows; // pt series
  std::vector<OracleCompareRow> pts_rows;
  double max_rel_error_pt = 0.0;  // relative to the exact peak
  double max_rel_error_pts = 0.0;
  double j2_ratio = 0.0;   // Pt(J)/Pt(J/2) at the last grid time
  double j2_expected = 4.0;
};

// Side-by-side perturbative vs exact-diagonalization values on the time
// grid, plus the J^2-scaling check at two tunneling values.
OracleCompareResult oracle_compare(const ModelParams& params,
                                   const std::vector<double>& t_grid,
                                   int dim_cap = 4096);

void write_oracle_csv(std::ostream& os, const OracleCompareResult& result);

} // namespace spinet
