#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace ionkick {

enum class Scheme { GZC, FRAG, Custom };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

// Two-ion trap: COM angular frequency, Lamb-Dicke parameter and thermal
// occupations of the two normal modes. The stretch mode sits at sqrt(3)*omega.
struct TrapConfig {
  double omega;         // COM angular frequency, rad/s
  double eta;           // Lamb-Dicke parameter
  double nbar_com = 0.0;
  double nbar_stretch = 0.0;

  double omega_stretch() const;
  void validate() const;
};

struct Kick {
  double time;  // s
  int weight;   // signed kick weight z_k
};

// Ordered kick schedule of an entangling gate.
struct KickSequence {
  std::vector<Kick> kicks;  // strictly increasing times
  Scheme scheme = Scheme::Custom;
  int multiplier = 0;  // scheme repetition factor n (0 for custom)

  int pulse_pairs() const;       // N_p = sum |z_k|
  int weight_sum() const;        // sum z_k
  double gate_time() const;      // t_N - t_1
  void validate() const;
};

// Cumulative phase-space path of both modes in the rotating frame.
struct Trajectory {
  std::vector<std::complex<double>> com;      // partial sums of alpha_c
  std::vector<std::complex<double>> stretch;  // partial sums of alpha_s
};

struct ClosureResult {
  std::complex<double> alpha_com;
  std::complex<double> alpha_stretch;
  Trajectory trajectory;
};

struct GateReport {
  std::complex<double> alpha_com;
  std::complex<double> alpha_stretch;
  double phase;           // accumulated two-qubit phase phi, rad
  double phase_mismatch;  // phi - pi/4
  double fidelity_timing; // F_o
  double gate_time;       // s
};

struct SolveReport {
  KickSequence sequence;
  std::array<double, 3> taus;
  double residual_norm;
  int iterations;
  int restarts;
};

struct DiscretizeResult {
  KickSequence sequence;
  std::vector<std::string> warnings;  // grid collisions, merged weights
};

// Fock-space oracle output: displacements and two-qubit phase extracted by
// state evolution on the truncated two-mode space.
struct FockOracleResult {
  double alpha_com_abs;
  double alpha_stretch_abs;
  double phase;
  double return_overlap_com;      // |<vac|psi_com>|^2 for the aligned-spin branch
  double return_overlap_stretch;
  int truncation_used;
};

KickSequence build_sequence(Scheme scheme, int n, double tau1, double tau2,
                            double tau3);

ClosureResult closure(const KickSequence& seq, const TrapConfig& trap);

double gate_phase(const KickSequence& seq, const TrapConfig& trap);

SolveReport solve_timings(Scheme scheme, int n, const TrapConfig& trap,
                          std::optional<std::array<double, 3>> seed = std::nullopt);

DiscretizeResult discretize(const KickSequence& seq, double f_bw, double t0 = 0.0);

// Eq.-(21)-style timing fidelity from closure residuals and phase mismatch.
double gate_infidelity_fo(std::complex<double> alpha_com,
                          std::complex<double> alpha_stretch,
                          double phase_mismatch, const TrapConfig& trap);

GateReport evaluate(const KickSequence& seq, const TrapConfig& trap);

struct ScanRow {
  int n;
  double f_bw;
  double gate_time;
  double alpha_com_abs;
  double alpha_stretch_abs;
  double phase_mismatch;
  double one_minus_fo;
};

std::vector<ScanRow> repetition_scan(Scheme scheme, const std::vector<int>& ns,
                                     const std::vector<double>& f_bws,
                                     const TrapConfig& trap, int threads = 1);

// Brute-force evolution on the truncated Fock space; independent oracle for
// closure() and gate_phase(). truncation <= 0 picks a size automatically
// from the worst-case excursion and grows it until the tail check passes.
FockOracleResult fock_oracle(const KickSequence& seq, const TrapConfig& trap,
                             int truncation = 0);

}  // namespace ionkick
