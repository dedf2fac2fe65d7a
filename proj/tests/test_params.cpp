#include <doctest.h>

#include <cmath>

#include "spinet/constants.hpp"
#include "spinet/params.hpp"

using namespace spinet;

namespace {

ModelParams reference_params() {
  ModelParams p;
  p.epsilon1 = 0.01; // delta = 0.01 eV with the acceptor at zero
  p.epsilon2 = 0.0;
  p.tunneling_J = 1e-4;
  p.omega = 1e7;
  p.phi = 0.2;
  p.B0 = 50e-6;
  p.theta = 0.0;
  p.g1 = 1e-8;
  p.g2 = 1e-8;
  p.temperature = 0.01;
  p.phonon_cutoff = 32;
  p.broadening_eta = 6.582119569e-11;
  return p;
}

} // namespace

TEST_CASE("reference parameter set is accepted") {
  CHECK_NOTHROW(validate_params(reference_params()));
}

TEST_CASE("validation reports the first violated invariant by name") {
  ModelParams p = reference_params();
  p.omega = 0.0;
  CHECK_THROWS_WITH_AS(validate_params(p), "omega must be positive", ParamError);

  p = reference_params();
  p.temperature = -1.0;
  CHECK_THROWS_WITH_AS(validate_params(p), "temperature must be positive",
                       ParamError);

  p = reference_params();
  p.broadening_eta = 0.0;
  CHECK_THROWS_WITH_AS(validate_params(p), "broadening_eta must be positive",
                       ParamError);

  p = reference_params();
  p.theta = 4.0;
  CHECK_THROWS_AS(validate_params(p), ParamError);

  p = reference_params();
  p.phonon_cutoff = -3;
  CHECK_THROWS_AS(validate_params(p), ParamError);
}

TEST_CASE("auto cutoff reaches the 1e-8 tail mass or the hard cap") {
  // frozen from the geometric-series tail at T = 10 mK, omega = 1e7:
  // beta hbar omega = 0.0076382325817957, smallest M with tail <= 1e-8 is 2412
  ModelParams p = reference_params();
  p.phonon_cutoff = ModelParams::kAutoCutoff;
  p.cutoff_hard_max = 4096;
  ModelParams v = validate_params(p);
  CHECK(v.phonon_cutoff == 2412);
  CHECK_FALSE(v.cutoff_cap_bound);
  const double bhw = v.beta() * v.hbar_omega();
  CHECK(std::exp(-v.phonon_cutoff * bhw) <= 1e-8);
  CHECK(std::exp(-(v.phonon_cutoff - 1) * bhw) > 1e-8);

  p.cutoff_hard_max = 512; // default cap binds at this temperature
  v = validate_params(p);
  CHECK(v.phonon_cutoff == 512);
  CHECK(v.cutoff_cap_bound);
}

TEST_CASE("thermal weights") {
  ModelParams p = validate_params(reference_params());

  SUBCASE("ratio matches exp(-beta hbar omega) at the reference parameters") {
    const double expected =
        std::exp(-p.hbar_omega() / (constants::k_boltzmann_ev_per_K * 0.01));
    CHECK(thermal_weight(1, p) / thermal_weight(0, p) ==
          doctest::Approx(expected).epsilon(1e-14));
    CHECK(expected == doctest::Approx(0.99239086458591467).epsilon(1e-12));
  }

  SUBCASE("ground-state freeze-out as T -> 0") {
    ModelParams cold = reference_params();
    cold.temperature = 1e-9;
    cold.phonon_cutoff = 4;
    cold = validate_params(cold);
    CHECK(thermal_weight(0, cold) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(thermal_weight(1, cold) < 1e-12);
  }

  SUBCASE("hbar omega = kB T ln 2 gives the halving geometric series") {
    ModelParams h = reference_params();
    h.temperature =
        h.hbar_omega() / (constants::k_boltzmann_ev_per_K * std::log(2.0));
    h = validate_params(h);
    for (int m = 0; m < 4; ++m)
      CHECK(thermal_weight(m, h) ==
            doctest::Approx(0.5 * std::pow(0.5, m)).epsilon(1e-12));
  }

  SUBCASE("weights over the canonical cutoff capture at least 1 - 1e-8") {
    ModelParams a = reference_params();
    a.phonon_cutoff = ModelParams::kAutoCutoff;
    a.cutoff_hard_max = 4096;
    a = validate_params(a);
    double sum = 0.0;
    for (int m = 0; m < a.phonon_cutoff; ++m) sum += thermal_weight(m, a);
    CHECK(sum >= 1.0 - 1e-8);
    CHECK(sum <= 1.0 + 1e-12);
  }

  SUBCASE("truncated weights renormalize to one and report the tail") {
    double tail = 0.0;
    const auto w = truncated_thermal_weights(p, &tail);
    double sum = 0.0;
    for (double x : w) sum += x;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
    const double bhw = p.beta() * p.hbar_omega();
    CHECK(tail == doctest::Approx(std::exp(-p.phonon_cutoff * bhw)).epsilon(1e-10));
  }
}

TEST_CASE("unit round trip omega <-> eV") {
  ModelParams p = validate_params(reference_params());
  const double back = p.hbar_omega() / constants::hbar_ev_s;
  CHECK(back == doctest::Approx(p.omega).epsilon(1e-15));
}

TEST_CASE("config ingestion is fail-closed") {
  const char* good = R"({
    "epsilon1_ev": 0.01, "epsilon2_ev": 0.0, "J_ev": 1e-4,
    "omega_rad_per_s": 1e7, "phi": 0.2, "B0_tesla": 50e-6,
    "theta_rad": 0.0, "g1_ev": 1e-8, "g2_ev": 1e-8,
    "temperature_K": 0.01, "phonon_cutoff": 64,
    "broadening_eta_ev": 6.6e-11
  })";
  ModelParams p = parse_config(good);
  CHECK(p.delta() == doctest::Approx(0.01));
  CHECK(p.phonon_cutoff == 64);

  const char* unknown = R"({
    "epsilon1_ev": 0.01, "epsilon2_ev": 0.0, "J_ev": 1e-4,
    "omega_rad_per_s": 1e7, "phi": 0.2, "B0_tesla": 50e-6,
    "theta_rad": 0.0, "g1_ev": 1e-8, "g2_ev": 1e-8,
    "temperature_K": 0.01, "phonon_cutoff": 64,
    "broadening_eta_ev": 6.6e-11, "tyop": 1
  })";
  CHECK_THROWS_WITH_AS(parse_config(unknown), "unknown config key: tyop",
                       ParamError);

  const char* missing = R"({"epsilon1_ev": 0.01})";
  CHECK_THROWS_AS(parse_config(missing), ParamError);

  const char* auto_cutoff = R"({
    "epsilon1_ev": 0.01, "epsilon2_ev": 0.0, "J_ev": 1e-4,
    "omega_rad_per_s": 1e7, "phi": 0.2, "B0_tesla": 50e-6,
    "theta_rad": 0.0, "g1_ev": 1e-8, "g2_ev": 1e-8,
    "temperature_K": 0.01, "phonon_cutoff": "auto",
    "broadening_eta_ev": 6.6e-11
  })";
  ModelParams a = parse_config(auto_cutoff, 128);
  CHECK(a.phonon_cutoff == 128);
  CHECK(a.cutoff_cap_bound);
  CHECK(a.phonon_cutoff_auto);
}
