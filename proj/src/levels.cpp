#include "ionkick/levels.hpp"

#include <cmath>
#include <cstdlib>

#include "ionkick/constants.hpp"
#include "ionkick/errors.hpp"

namespace ionkick {

LevelSystem::LevelSystem(std::vector<std::string> labels, Eigen::VectorXd energies,
                         std::array<Eigen::MatrixXd, 3> couplings)
    : labels_(std::move(labels)),
      energies_(std::move(energies)),
      couplings_(std::move(couplings)) {
  const int n = static_cast<int>(labels_.size());
  if (energies_.size() != n) throw ConfigError("level energies/labels size mismatch");
  if (std::abs(energies_(0)) != 0.0)
    throw ConfigError("reference level |0> must have zero energy");
  for (const auto& m : couplings_) {
    if (m.rows() != n || m.cols() != n)
      throw ConfigError("coupling matrix size mismatch");
    // magnitudes must be symmetric: weight(i->j) == weight(j->i)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j)
        if (std::abs(std::abs(m(i, j)) - std::abs(m(j, i))) > 1e-14)
          throw ConfigError("coupling weights not Hermitian-symmetric in magnitude");
  }
}

int LevelSystem::index_of(const std::string& label) const {
  for (int i = 0; i < size(); ++i)
    if (labels_[i] == label) return i;
  throw ConfigError("unknown level label: " + label);
}

ZeemanConfig ZeemanConfig::off() { return at(0.0); }

ZeemanConfig ZeemanConfig::at(double b_gauss) {
  if (b_gauss < 0.0) throw ConfigError("magnetic field must be >= 0");
  return ZeemanConfig{b_gauss, yb171::zeeman_linear_s, yb171::zeeman_linear_p,
                      yb171::zeeman_quadratic};
}

LevelSystem build_lambda_system(double splitting, double intermediate_energy) {
  if (splitting <= 0.0) throw ConfigError("lambda system splitting must be > 0");
  Eigen::VectorXd energies(3);
  energies << 0.0, intermediate_energy, splitting;
  std::array<Eigen::MatrixXd, 3> couplings;
  for (auto& m : couplings) m = Eigen::MatrixXd::Zero(3, 3);
  // leg 1: |0> <-> |e>, leg 2: |1> <-> |e>, unit weights, placed on the
  // sigma+ component (the reduction carries no angular structure).
  auto& sig = couplings[static_cast<int>(Polarization::L)];
  sig(0, 1) = sig(1, 0) = 1.0;
  sig(2, 1) = sig(1, 2) = 1.0;
  return LevelSystem({"0", "e", "1"}, std::move(energies), std::move(couplings));
}

namespace {

struct HyperfineState {
  int f;
  int mf;
};

// Allowed S1/2(F,m) <-> P1/2(F',m') dipole weights for 171Yb+ in the
// spherical basis, from standard angular-momentum recoupling
// (J = J' = 1/2, I = 1/2). Every allowed transition has magnitude
// 1/sqrt(3); F=0 -> F'=0 and (F=1,m=0) -> (F'=1,m'=0) are forbidden.
// The full signed table is documented in docs/levels.md.
double yb_weight(HyperfineState s, HyperfineState p, int q) {
  if (p.mf != s.mf + q) return 0.0;
  const double w = 1.0 / std::sqrt(3.0);
  if (s.f == 0 && p.f == 0) return 0.0;
  if (s.f == 0 && p.f == 1) return -w;
  if (s.f == 1 && p.f == 0) {
    return (s.mf == 0) ? -w : w;  // m=+-1 via sigma-+: +w
  }
  // F=1 -> F'=1
  if (s.mf == 0 && p.mf == 0) return 0.0;
  if (q == 0) return (s.mf == -1) ? -w : w;
  if (q == +1) return -w;        // m -> m+1
  return w;                      // q == -1
}

}  // namespace

LevelSystem build_yb171_system(const ZeemanConfig& z) {
  if (z.b_field_gauss < 0.0) throw ConfigError("magnetic field must be >= 0");
  const double b = z.b_field_gauss;

  // order: S|0,0>=|0>, S|1,-1>, S|1,0>=|1>, S|1,+1>, P|0,0>, P|1,-1>, P|1,0>, P|1,+1>
  const std::vector<std::string> labels = {"S:F0m0", "S:F1m-1", "S:F1m0", "S:F1m+1",
                                           "P:F0m0", "P:F1m-1", "P:F1m0", "P:F1m+1"};
  const std::vector<HyperfineState> hf = {{0, 0}, {1, -1}, {1, 0}, {1, +1},
                                          {0, 0}, {1, -1}, {1, 0}, {1, +1}};

  // optical reference: the 2P1/2 F=0 level sits at 0 of its manifold offset;
  // internal-state energies are what matter, the optical carrier is removed
  // by the rotating frame, so the P manifold offset is kept at 0.
  const double quad = z.quadratic * b * b;
  Eigen::VectorXd e(8);
  e(0) = 0.0;
  e(1) = yb171::hyperfine_splitting + quad - z.linear_s * b;
  e(2) = yb171::hyperfine_splitting + quad;  // clock state |1>: purely quadratic shift
  e(3) = yb171::hyperfine_splitting + quad + z.linear_s * b;
  e(4) = 0.0;
  e(5) = yb171::p_hyperfine_splitting - z.linear_p * b;
  e(6) = yb171::p_hyperfine_splitting;
  e(7) = yb171::p_hyperfine_splitting + z.linear_p * b;

  std::array<Eigen::MatrixXd, 3> couplings;
  for (auto& m : couplings) m = Eigen::MatrixXd::Zero(8, 8);
  const std::array<std::pair<Polarization, int>, 3> comps = {
      std::pair{Polarization::L, +1}, std::pair{Polarization::R, -1},
      std::pair{Polarization::Pi, 0}};
  for (auto [pol, q] : comps) {
    auto& m = couplings[static_cast<int>(pol)];
    for (int i = 0; i < 4; ++i) {
      for (int j = 4; j < 8; ++j) {
        const double w = yb_weight(hf[i], hf[j], q);
        m(i, j) = w;
        m(j, i) = w;
      }
    }
  }
  return LevelSystem(labels, std::move(e), std::move(couplings));
}

std::pair<std::complex<double>, std::complex<double>> decompose_polarization(
    LinearPolarization pol) {
  const double s = 1.0 / std::sqrt(2.0);
  if (pol == LinearPolarization::H) return {s, s};
  return {s, -s};
}

EffectiveRaman effective_raman(double omega1, double omega2, double delta_single,
                               double delta_k, int direction, double delta_two) {
  if (omega1 != omega2)
    throw ConfigError("effective_raman requires equal leg intensities (I1 = I2)");
  if (delta_single == 0.0)
    throw NumericError(
        "adiabatic elimination invalid at zero single-photon detuning; "
        "use full three-level propagation");
  if (direction != 1 && direction != -1)
    throw ConfigError("kick direction must be +1 or -1");
  EffectiveRaman r;
  r.omega_eff = omega1 * omega2 / (2.0 * delta_single);
  // Each leg also light-shifts the other qubit state through the coupling
  // detuned by the hyperfine splitting; the differential remainder is
  // O(omega^2 * w_HF / delta^2).
  const double whf = yb171::hyperfine_splitting;
  r.stark_shift = (omega1 * omega1 / 4.0) *
                  (1.0 / delta_single - 1.0 / (delta_single + whf));
  r.delta_single = delta_single;
  r.delta_two = delta_two;
  r.delta_k = delta_k;
  r.direction = direction;
  return r;
}

}  // namespace ionkick
