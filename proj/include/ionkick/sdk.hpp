#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ionkick/dynamics.hpp"
#include "ionkick/levels.hpp"
#include "ionkick/pulses.hpp"

namespace ionkick {

// Cumulative SDK fidelity of a gate built from pulse_pairs qubit flips,
// each with transfer error epsilon: F_s = |1 - 2*Np*eps + Np^2*eps^2|.
double cumulative_fidelity(double epsilon, int pulse_pairs);

enum class AxisScale { Linear, Log };

struct SweepAxis {
  std::string parameter;
  double min;
  double max;
  int count;
  AxisScale scale = AxisScale::Linear;

  std::vector<double> values() const;
  void validate() const;
};

struct MapCell {
  double x;
  double y;
  double epsilon;       // NaN when the propagation failed
  std::string error;    // per-cell failure note, empty on success
};

struct FidelityMap {
  SweepAxis x_axis;
  SweepAxis y_axis;
  std::vector<MapCell> cells;  // row-major, y outer, x inner
};

enum class PerturbationKind { Intensity, Detuning, Delay };

std::string to_string(PerturbationKind k);
PerturbationKind perturbation_from_string(const std::string& s);

struct RobustnessPoint {
  double perturbation;
  double epsilon;
  double one_minus_fs;
};

struct RobustnessCurve {
  Protocol protocol;
  PerturbationKind kind;
  std::vector<RobustnessPoint> samples;
};

// Paper-reference operating point of one protocol (tau = 1 ns family);
// peak Rabi frequencies are calibrated numerically, see reference_pulse().
struct OperatingPoint {
  Protocol protocol;
  double tau;
  double omega0;
  double delta_single;
  double delta0;    // ARP
  double t_d;       // STIRAP
  double omega_e;   // DE
};

OperatingPoint reference_operating_point(Protocol p);
ProtocolPulse reference_pulse(Protocol p);
ProtocolPulse make_pulse(const OperatingPoint& op);

double transfer_epsilon(const ProtocolPulse& pulse, double tol = 1e-10);

// Minimizes epsilon over the peak Rabi frequency on [lo, hi] by golden-
// section refinement of a coarse scan. Used to pin operating points.
double calibrate_peak_rabi(const OperatingPoint& op, double lo, double hi,
                           int coarse = 48, double tol = 1e-10);

FidelityMap fidelity_map(const OperatingPoint& op, const SweepAxis& x,
                         const SweepAxis& y, int threads = 1, double tol = 1e-10);

// Quasi-static perturbation sweep at the protocol's operating point.
// Intensity: both legs scale together by (1 + p). Detuning: the single-photon
// detuning shifts by p * delta_reference (common laser-drift model).
RobustnessCurve robustness_sweep(const OperatingPoint& op, PerturbationKind kind,
                                 const std::vector<double>& perturbations,
                                 int pulse_pairs, double delta_reference,
                                 int threads = 1, double tol = 1e-10);

// STIRAP delay-deviation sweep around the optimum t_d.
RobustnessCurve delay_sensitivity(const OperatingPoint& op,
                                  const std::vector<double>& delay_deviations,
                                  int pulse_pairs, int threads = 1,
                                  double tol = 1e-10);

}  // namespace ionkick
