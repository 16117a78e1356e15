#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <string>
#include <vector>

namespace ionkick {

// Polarization components of the driving field in the spherical basis.
enum class Polarization { L, R, Pi };

enum class LinearPolarization { H, V };

// Static model of an ion's internal levels: energies (rad/s, relative to
// |0>) and dimensionless dipole coupling weights per polarization component.
// Immutable after construction; all operations on it are pure.
class LevelSystem {
 public:
  LevelSystem(std::vector<std::string> labels, Eigen::VectorXd energies,
              std::array<Eigen::MatrixXd, 3> couplings);

  int size() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  int index_of(const std::string& label) const;

  double energy(int i) const { return energies_(i); }
  const Eigen::VectorXd& energies() const { return energies_; }

  // weight(i -> j) for one spherical polarization component.
  double coupling(int i, int j, Polarization p) const {
    return couplings_[static_cast<int>(p)](i, j);
  }
  const Eigen::MatrixXd& coupling_matrix(Polarization p) const {
    return couplings_[static_cast<int>(p)];
  }

 private:
  std::vector<std::string> labels_;
  Eigen::VectorXd energies_;
  std::array<Eigen::MatrixXd, 3> couplings_;  // indexed by Polarization
};

// Zeeman model of 171Yb+: linear coefficients per manifold plus the
// quadratic clock-state coefficient. All coefficients in rad/s per G (G^2).
struct ZeemanConfig {
  double b_field_gauss = 0.0;
  double linear_s;     // 2S1/2 sublevels
  double linear_p;     // 2P1/2 sublevels
  double quadratic;    // clock-state splitting, per G^2

  static ZeemanConfig off();
  static ZeemanConfig at(double b_gauss);
};

// Parameters of the adiabatically eliminated two-level Raman model.
struct EffectiveRaman {
  double omega_eff;     // two-photon Rabi frequency, rad/s
  double stark_shift;   // differential Stark shift between |0> and |1>, rad/s
  double delta_single;  // single-photon detuning, rad/s
  double delta_two;     // two-photon detuning, rad/s
  double delta_k;       // effective wave-vector difference, 1/m
  int direction;        // kick direction sign, +1 or -1
};

// Minimal Lambda reduction: {|0>, |e>, |1>} with unit weights on both legs.
LevelSystem build_lambda_system(double splitting, double intermediate_energy);

// Full 8-level 171Yb+ model (4 states in 2S1/2, 4 in 2P1/2) with hyperfine
// splittings, Zeeman shifts and selection-rule coupling weights.
LevelSystem build_yb171_system(const ZeemanConfig& zeeman);

// H/V linear polarization decomposed into circular (L, R) amplitudes.
std::pair<std::complex<double>, std::complex<double>> decompose_polarization(
    LinearPolarization pol);

// Adiabatic elimination of the intermediate state at single-photon detuning
// delta_single, for equal leg Rabi frequencies omega1 == omega2 (rad/s).
// Convention: omega_eff = omega1*omega2 / (2*delta_single).
EffectiveRaman effective_raman(double omega1, double omega2, double delta_single,
                               double delta_k, int direction,
                               double delta_two = 0.0);

}  // namespace ionkick
