#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "spinet/params.hpp"

namespace spinet {

struct Table1Report {
  std::array<double, 24> residuals{};   // ||H phi_q - E_q phi_q||, eV
  double gram_defect = 0.0;             // max |G - I|
  double max_residual = 0.0;
  bool pass = false;                    // all residuals and defects < 1e-12
};

Table1Report verify_table1(const ModelParams& p);

// One published-table channel: the coefficient multiplying
// delta(E - E_{m,q}) (rate table) or e^{-i E_{m,q} t / hbar} (conversion
// table). `numeric` is recomputed from matrix elements, `printed` evaluates
// the published expression; disagreement beyond 1e-8 is flagged as a
// suspected transcription discrepancy, never corrected.
struct EntryCheck {
  std::string table;   // "II" or "III"
  std::string entry;   // e.g. "R_{1,mn,21}" or "D_{m,2,3}"
  int q = 0;           // 1-based Table-I row of the channel
  double numeric = 0.0;
  double printed = 0.0;
  double deviation = 0.0; // max |numeric - printed| over the theta grid
  bool flagged = false;
};

std::vector<EntryCheck> verify_table2(const ModelParams& p,
                                      const std::vector<double>& theta_grid);
std::vector<EntryCheck> verify_table3(const ModelParams& p,
                                      const std::vector<double>& theta_grid);

void write_verification_csv(std::ostream& os, const Table1Report& t1,
                            const std::vector<EntryCheck>& t2,
                            const std::vector<EntryCheck>& t3);

} // namespace spinet
