#include <doctest.h>

#include <cmath>
#include <random>

#include "spinet/constants.hpp"
#include "spinet/spin_system.hpp"

using namespace spinet;

namespace {

ModelParams reference_params() {
  ModelParams p;
  p.epsilon1 = 0.01;
  p.epsilon2 = 0.0;
  p.tunneling_J = 1e-4;
  p.omega = 1e7;
  p.phi = 0.2;
  p.B0 = 50e-6;
  p.theta = 0.0;
  p.g1 = 1e-8;
  p.g2 = 1e-8;
  p.temperature = 0.01;
  p.phonon_cutoff = 8;
  p.broadening_eta = 6.6e-11;
  return validate_params(p);
}

} // namespace

TEST_CASE("mixing angle") {
  CHECK(mixing_angle(0.0, 1.0) == doctest::Approx(0.0));
  // muB B0 = 2g gives tan(theta) = 1
  const double g = 1e-7;
  const double b = 2.0 * g / constants::bohr_magneton_ev_per_T;
  CHECK(mixing_angle(g, b) == doctest::Approx(M_PI / 4).epsilon(1e-14));
  // zero field with positive coupling
  CHECK(mixing_angle(1e-8, 0.0) == doctest::Approx(M_PI / 2));
  // frozen arctangent at the default couplings (muB B0 = 2.894190903e-9 eV)
  CHECK(mixing_angle(1e-8, 50e-6) ==
        doctest::Approx(1.4270843906015825).epsilon(1e-14));
}

TEST_CASE("mixing angle limits") {
  CHECK(mixing_angle(1e-8, 1e3) < 1e-6);                 // B0 -> inf
  CHECK(mixing_angle(10.0, 1e-9) ==
        doctest::Approx(M_PI / 2).epsilon(1e-6));        // g -> inf
}

TEST_CASE("site eigensystem") {
  ModelParams p = reference_params();

  SUBCASE("closed-form energies at g = 0 are +/- muB B0 pairs") {
    ModelParams q = p;
    q.g1 = 0.0;
    const SiteEigensystem sys = site_eigensystem(1, q);
    const double mu = constants::bohr_magneton_ev_per_T * q.B0;
    CHECK(sys.energies[0] == doctest::Approx(mu));
    CHECK(sys.energies[1] == doctest::Approx(mu));
    CHECK(sys.energies[2] == doctest::Approx(-mu));
    CHECK(sys.energies[3] == doctest::Approx(-mu));
  }

  SUBCASE("trace vanishes for random couplings") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
      ModelParams q = p;
      q.g1 = 1e-7 * dist(rng);
      q.B0 = 1e-3 * dist(rng);
      const SiteEigensystem sys = site_eigensystem(1, q);
      const double tr = sys.energies[0] + sys.energies[1] + sys.energies[2] +
                        sys.energies[3];
      CHECK(std::abs(tr) < 1e-22);
    }
  }

  SUBCASE("frozen e2 at the reference couplings") {
    const SiteEigensystem sys = site_eigensystem(1, p);
    CHECK(sys.energies[1] ==
          doctest::Approx(3.0208323556965530e-8).epsilon(1e-13));
  }

  SUBCASE("states are orthonormal") {
    const SiteEigensystem sys = site_eigensystem(2, p);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        CHECK(sys.states[a].dot(sys.states[b]) ==
              doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-14));
  }
}

TEST_CASE("Table I eigensystem") {
  ModelParams p = reference_params();
  const SpinEigensystem sys = table1_eigensystem(p);
  const Eigen::MatrixXcd H = spin_hamiltonian(p);

  SUBCASE("row 1 energy is 2 muB B0 - g1 - g2") {
    const double mu = constants::bohr_magneton_ev_per_T * p.B0;
    CHECK(sys.energies[0] ==
          doctest::Approx(2 * mu - p.g1 - p.g2).epsilon(1e-14));
  }

  SUBCASE("rows 17-24 have exactly zero energy") {
    for (int q = 16; q < 24; ++q) CHECK(sys.energies[q] == 0.0);
  }

  SUBCASE("Gram matrix is the identity") {
    const Eigen::MatrixXd g = sys.states.transpose() * sys.states;
    CHECK((g - Eigen::MatrixXd::Identity(24, 24)).cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("eigenvalue residuals against the Pauli-built Hamiltonian") {
    for (int q = 0; q < 24; ++q) {
      const Eigen::VectorXcd phi = sys.states.col(q).cast<std::complex<double>>();
      CHECK((H * phi - sys.energies[q] * phi).norm() < 1e-12);
    }
  }

  SUBCASE("degenerate g = 0 case still satisfies the residual test") {
    ModelParams q = p;
    q.g1 = q.g2 = 0.0;
    const SpinEigensystem dsys = table1_eigensystem(q);
    const Eigen::MatrixXcd dH = spin_hamiltonian(q);
    for (int r = 0; r < 24; ++r) {
      const Eigen::VectorXcd phi = dsys.states.col(r).cast<std::complex<double>>();
      CHECK((dH * phi - dsys.energies[r] * phi).norm() < 1e-12);
    }
  }
}

TEST_CASE("rotation about y") {
  SUBCASE("the singlet is invariant with unit phase") {
    for (double th : {0.0, 0.3, 1.2, M_PI / 2, 2.9}) {
      const Eigen::Vector4d r = rotate_y(singlet_state(), th);
      CHECK((r - singlet_state()).cwiseAbs().maxCoeff() < 1e-15);
    }
  }

  SUBCASE("identity at zero angle") {
    CHECK((rotate_y(triplet_state(), 0.0) - triplet_state())
              .cwiseAbs()
              .maxCoeff() < 1e-15);
  }

  SUBCASE("rotated triplet matches cos t + sin (uu - dd)/sqrt2") {
    for (double th : {0.2, 1.0, 2.5}) {
      const Eigen::Vector4d expected =
          std::cos(th) * triplet_state() +
          std::sin(th) / std::sqrt(2.0) *
              (Eigen::Vector4d(1, 0, 0, 0) - Eigen::Vector4d(0, 0, 0, 1));
      CHECK((rotated_triplet(th) - expected).cwiseAbs().maxCoeff() < 1e-14);
    }
  }

  SUBCASE("composition law on random states") {
    std::mt19937 rng(11);
    std::normal_distribution<double> dist;
    for (int trial = 0; trial < 20; ++trial) {
      Eigen::Vector4d v;
      for (int i = 0; i < 4; ++i) v(i) = dist(rng);
      v.normalize();
      const double a = dist(rng), b = dist(rng);
      const Eigen::Vector4d lhs = rotate_y(rotate_y(v, a), b);
      const Eigen::Vector4d rhs = rotate_y(v, a + b);
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-13);
    }
  }

  SUBCASE("rotated triplet stays unit norm and orthogonal to the singlet") {
    for (double th = 0.0; th < M_PI; th += 0.17) {
      CHECK(rotated_triplet(th).norm() == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(std::abs(rotated_triplet(th).dot(singlet_state())) < 1e-15);
    }
  }
}
