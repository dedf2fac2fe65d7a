#include "spinet/params.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "spinet/constants.hpp"
#include <json.hpp>

namespace spinet {

namespace {

bool finite(double x) { return std::isfinite(x); }

int resolve_auto_cutoff(double omega, double temperature, int hard_max,
                        bool* cap_bound) {
  const double bhw =
      constants::hbar_ev_s * omega / (constants::k_boltzmann_ev_per_K * temperature);
  // tail mass beyond M levels is e^{-M beta hbar omega}; want <= 1e-8
  const double target = std::log(1e8) / bhw;
  int M = (target >= static_cast<double>(hard_max))
              ? hard_max
              : static_cast<int>(std::ceil(target));
  if (M < 1) M = 1;
  // ceil() can land one level early or late at representation boundaries
  while (M < hard_max && std::exp(-M * bhw) > 1e-8) ++M;
  while (M > 1 && std::exp(-(M - 1) * bhw) <= 1e-8) --M;
  *cap_bound = std::exp(-M * bhw) > 1e-8;
  return M;
}

} // namespace

double ModelParams::hbar_omega() const { return constants::hbar_ev_s * omega; }

double ModelParams::beta() const {
  return 1.0 / (constants::k_boltzmann_ev_per_K * temperature);
}

double ModelParams::partition_function() const {
  return 1.0 / (1.0 - std::exp(-beta() * hbar_omega()));
}

ModelParams validate_params(ModelParams p) {
  if (!(p.omega > 0.0)) throw ParamError("omega must be positive");
  if (!(p.B0 >= 0.0)) throw ParamError("B0 must be nonnegative");
  if (!(p.temperature > 0.0)) throw ParamError("temperature must be positive");
  if (p.phonon_cutoff != ModelParams::kAutoCutoff && p.phonon_cutoff < 1)
    throw ParamError("phonon_cutoff must be at least 1");
  if (!(p.broadening_eta > 0.0)) throw ParamError("broadening_eta must be positive");
  if (!(p.theta >= 0.0 && p.theta <= M_PI))
    throw ParamError("theta must lie in [0, pi]");
  if (p.cutoff_hard_max < 1) throw ParamError("cutoff_hard_max must be at least 1");
  for (double v : {p.epsilon1, p.epsilon2, p.tunneling_J, p.omega, p.phi, p.B0,
                   p.theta, p.g1, p.g2, p.temperature, p.broadening_eta})
    if (!finite(v)) throw ParamError("all parameters must be finite");

  p.cutoff_cap_bound = false;
  if (p.phonon_cutoff == ModelParams::kAutoCutoff) {
    p.phonon_cutoff_auto = true;
    p.phonon_cutoff = resolve_auto_cutoff(p.omega, p.temperature,
                                          p.cutoff_hard_max, &p.cutoff_cap_bound);
  }
  return p;
}

double thermal_weight(int m, const ModelParams& p) {
  return std::exp(-p.beta() * m * p.hbar_omega()) / p.partition_function();
}

std::vector<double> truncated_thermal_weights(const ModelParams& p,
                                              double* tail_mass) {
  const int N = p.phonon_cutoff;
  const double r = std::exp(-p.beta() * p.hbar_omega());
  std::vector<double> w(N);
  double sum = 0.0, wm = 1.0;
  for (int m = 0; m < N; ++m) {
    w[m] = wm;
    sum += wm;
    wm *= r;
  }
  for (double& x : w) x /= sum;
  if (tail_mass) *tail_mass = 1.0 - sum * (1.0 - r); // sum/Z of the kept levels
  return w;
}

namespace {

ModelParams from_json(const nlohmann::json& j, int cutoff_hard_max) {
  static const char* keys[] = {
      "epsilon1_ev",  "epsilon2_ev",   "J_ev",          "omega_rad_per_s",
      "phi",          "B0_tesla",      "theta_rad",     "g1_ev",
      "g2_ev",        "temperature_K", "phonon_cutoff", "broadening_eta_ev"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known |= (it.key() == k);
    if (!known) throw ParamError("unknown config key: " + it.key());
  }
  for (const char* k : keys)
    if (!j.contains(k)) throw ParamError(std::string("missing config key: ") + k);

  ModelParams p;
  p.epsilon1 = j.at("epsilon1_ev").get<double>();
  p.epsilon2 = j.at("epsilon2_ev").get<double>();
  p.tunneling_J = j.at("J_ev").get<double>();
  p.omega = j.at("omega_rad_per_s").get<double>();
  p.phi = j.at("phi").get<double>();
  p.B0 = j.at("B0_tesla").get<double>();
  p.theta = j.at("theta_rad").get<double>();
  p.g1 = j.at("g1_ev").get<double>();
  p.g2 = j.at("g2_ev").get<double>();
  p.temperature = j.at("temperature_K").get<double>();
  p.broadening_eta = j.at("broadening_eta_ev").get<double>();
  p.cutoff_hard_max = cutoff_hard_max;

  const auto& pc = j.at("phonon_cutoff");
  if (pc.is_string()) {
    if (pc.get<std::string>() != "auto")
      throw ParamError("phonon_cutoff must be \"auto\" or a positive integer");
    p.phonon_cutoff = ModelParams::kAutoCutoff;
  } else if (pc.is_number_integer()) {
    p.phonon_cutoff = pc.get<int>();
  } else {
    throw ParamError("phonon_cutoff must be \"auto\" or a positive integer");
  }
  return validate_params(p);
}

} // namespace

ModelParams parse_config(const std::string& json_text, int cutoff_hard_max) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParamError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParamError("config must be a JSON object");
  return from_json(j, cutoff_hard_max);
}

ModelParams load_config(const std::string& path, int cutoff_hard_max) {
  std::ifstream in(path);
  if (!in) throw ParamError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), cutoff_hard_max);
}

} // namespace spinet
