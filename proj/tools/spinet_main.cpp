// Command-line front end: parameter sweeps, table verification, and the
// exact-diagonalization comparison workflow.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "spinet/constants.hpp"
#include "spinet/exact_oracle.hpp"
#include "spinet/params.hpp"
#include "spinet/sweep.hpp"
#include "spinet/tables.hpp"

namespace {

using namespace spinet;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitVerification = 2;

AxisSpec parse_axis(const std::string& text) {
  AxisSpec axis;
  axis.explicitly_set = true;
  const auto c1 = text.find(':');
  const auto c2 = text.find(':', c1 == std::string::npos ? 0 : c1 + 1);
  try {
    if (c1 == std::string::npos) {
      axis.start = axis.stop = std::stod(text);
      axis.count = 1;
    } else if (c2 == std::string::npos) {
      throw std::invalid_argument("bad axis");
    } else {
      axis.start = std::stod(text.substr(0, c1));
      axis.stop = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
      axis.count = std::stoi(text.substr(c2 + 1));
    }
  } catch (const std::exception&) {
    throw ParamError("bad --sweep range '" + text +
                     "' (expected START:STOP:COUNT or a single value)");
  }
  return axis;
}

void apply_sweeps(SweepSpec& spec, const std::vector<std::string>& sweeps) {
  for (const std::string& s : sweeps) {
    const auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ParamError("bad --sweep '" + s + "' (expected AXIS=RANGE)");
    const std::string axis = s.substr(0, eq);
    const AxisSpec a = parse_axis(s.substr(eq + 1));
    if (axis == "t") spec.time = a;
    else if (axis == "theta") spec.theta = a;
    else if (axis == "B0") spec.B0 = a;
    else if (axis == "T") spec.temperature = a;
    else throw ParamError("unknown sweep axis '" + axis + "' (t, theta, B0, T)");
  }
}

std::ofstream open_out(const std::string& path, std::ostream*& os) {
  std::ofstream file;
  if (path.empty() || path == "-") {
    os = &std::cout;
  } else {
    file.open(path);
    if (!file) throw ParamError("cannot open output file: " + path);
    os = &file;
  }
  return file;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"spin-dependent electron-transfer simulator"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  std::string observable = "pt", final_sector = "acceptor";
  std::vector<std::string> sweeps;
  int workers = 1, max_cutoff = 512, theta_points = 9, dim_cap = 4096;
  bool time_in_inverse_omega = false;

  auto* sim = app.add_subcommand("simulate", "evaluate an observable on a grid");
  sim->add_option("--config", config_path, "model config (JSON)")->required();
  sim->add_option("--out", out_path, "output CSV path ('-' for stdout)");
  sim->add_option("--observable", observable,
                  "pt | ps | kt | ks | pts | pts_max | b0_scan");
  sim->add_option("--sweep", sweeps,
                  "axis grid, e.g. theta=0:3.14159:33 or t=5e-8 (repeatable)");
  sim->add_option("--final-sector", final_sector, "acceptor | all");
  sim->add_option("--workers", workers, "worker threads");
  sim->add_flag("--time-in-inverse-omega", time_in_inverse_omega,
                "print the time column as t*omega");
  sim->add_option("--max-phonon-cutoff", max_cutoff,
                  "hard cap for an auto phonon cutoff");

  auto* ver = app.add_subcommand("verify-tables",
                                 "reconcile published tables with matrix elements");
  ver->add_option("--config", config_path, "model config (JSON)")->required();
  ver->add_option("--out", out_path, "report CSV path ('-' for stdout)");
  ver->add_option("--theta-points", theta_points, "field-angle grid size");

  auto* orc = app.add_subcommand("oracle-compare",
                                 "perturbative vs exact evolution on a time grid");
  orc->add_option("--config", config_path, "model config (JSON)")->required();
  orc->add_option("--out", out_path, "output CSV path ('-' for stdout)");
  orc->add_option("--sweep", sweeps, "time grid, t=START:STOP:COUNT")->required();
  orc->add_option("--dim-cap", dim_cap, "max full-Hamiltonian dimension");

  auto* dump = app.add_subcommand("dump-eigensystem",
                                  "write the 24 spin eigenpairs as CSV");
  dump->add_option("--config", config_path, "model config (JSON)")->required();
  dump->add_option("--out", out_path, "output CSV path ('-' for stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    const ModelParams params = load_config(config_path, max_cutoff);
    std::ostream* os = nullptr;

    if (sim->parsed()) {
      SweepSpec spec;
      const auto obs = observable_from_name(observable);
      if (!obs) throw ParamError("unknown observable '" + observable + "'");
      spec.observable = *obs;
      if (final_sector == "acceptor") spec.final_sector = FinalSector::Acceptor;
      else if (final_sector == "all") spec.final_sector = FinalSector::All;
      else throw ParamError("final sector must be 'acceptor' or 'all'");
      spec.workers = workers;
      spec.time_in_inverse_omega = time_in_inverse_omega;
      apply_sweeps(spec, sweeps);
      const SweepResult result = run_sweep(spec, params);
      auto file = open_out(out_path, os);
      write_sweep_csv(*os, spec, result);
      return kExitOk;
    }

    if (ver->parsed()) {
      std::vector<double> grid;
      for (int i = 0; i < theta_points; ++i)
        grid.push_back(M_PI * i / std::max(1, theta_points - 1));
      const Table1Report t1 = verify_table1(params);
      const auto t2 = verify_table2(params, grid);
      const auto t3 = verify_table3(params, grid);
      auto file = open_out(out_path, os);
      write_verification_csv(*os, t1, t2, t3);
      int flagged = 0;
      for (const auto* v : {&t2, &t3})
        for (const auto& c : *v) flagged += c.flagged;
      std::cerr << "table I: max residual " << format_g17(t1.max_residual)
                << (t1.pass ? " (pass)" : " (FAIL)") << "; " << flagged
                << " published entries flagged as suspected transcription"
                   " discrepancies\n";
      return t1.pass ? kExitOk : kExitVerification;
    }

    if (orc->parsed()) {
      SweepSpec spec;
      apply_sweeps(spec, sweeps);
      if (spec.time.count < 2) throw ParamError("need a time grid t=START:STOP:COUNT");
      const OracleCompareResult result =
          oracle_compare(params, spec.time.values(), dim_cap);
      auto file = open_out(out_path, os);
      write_oracle_csv(*os, result);
      return kExitOk;
    }

    if (dump->parsed()) {
      const SpinEigensystem sys = table1_eigensystem(params);
      auto file = open_out(out_path, os);
      *os << "q,E_sq_ev,amplitudes\n";
      for (int q = 0; q < 24; ++q) {
        *os << (q + 1) << ',' << format_g17(sys.energies[q]);
        for (int a = 0; a < 24; ++a) *os << ',' << format_g17(sys.states(a, q));
        *os << "\n";
      }
      return kExitOk;
    }
  } catch (const ParamError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitVerification;
  }
  return kExitOk;
}
