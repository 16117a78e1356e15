#pragma once

#include <Eigen/Dense>
#include <complex>
#include <iosfwd>
#include <vector>

#include "ionkick/levels.hpp"
#include "ionkick/pulses.hpp"

namespace ionkick {

struct PropagateOptions {
  double tol = 1e-10;
  bool store_trajectory = true;
  int initial_state = 0;  // which basis state the stored trajectory starts in
};

// Result of one rotating-frame Schrodinger propagation.
struct Propagation {
  std::vector<double> t_grid;
  std::vector<Eigen::VectorXcd> states;  // amplitudes of initial_state's column
  Eigen::MatrixXcd u_final;
  double tol = 0.0;
  int initial_state = 0;

  double max_norm_deviation() const;
  double unitarity_defect() const;  // max-norm of U^dag U - I

  // CSV dump: header `t,re_c0,im_c0,...`, one row per stored step.
  void write_csv(std::ostream& os) const;
};

struct TransferResult {
  double epsilon;            // 1 - |<target|psi(T)>|^2
  double final_phase;        // phase of the target-state amplitude, rad
  double intermediate_peak;  // max population in |e> over the pulse
};

// Fitted spin-conditioned displacement from a counter-propagating kick pair.
struct DisplacementEstimate {
  std::complex<double> alpha;   // fitted motional displacement for spin |0>
  double coherent_overlap;      // |<alpha|psi_motion>|^2 against the fit
  double conditioning_error;    // 1 - overlap against the ideal +-2i*eta target
  double spin_error;            // population left outside the expected spin state
};

// Rotating-frame propagation of a Lambda system (|0>, |e>, |1>) driven by a
// ProtocolPulse. Optical carriers are removed; the single-photon detuning
// enters on |e> and the two-photon detuning as a time-dependent shift on |1>.
Propagation propagate(const LevelSystem& system, const ProtocolPulse& pulse,
                      const PropagateOptions& opt = {});

// Two-level propagation of the adiabatically eliminated model (|0>, |1>).
Propagation propagate_effective(const EffectiveRaman& eff, const ProtocolPulse& pulse,
                                const PropagateOptions& opt = {});

TransferResult transfer_error(const Propagation& prop, const LevelSystem& system,
                              int initial, int target);

// Joint internal (x) Fock propagation of one counter-propagating pulse pair;
// fits the resulting motional transformation to a displacement conditioned
// on the qubit state. eta is the Lamb-Dicke parameter per single flip.
DisplacementEstimate sdk_phase_check(const LevelSystem& system,
                                     const ProtocolPulse& pulse, double eta,
                                     int fock_truncation, double tol = 1e-10);

}  // namespace ionkick
