#pragma once

#include <string>

namespace ionkick {

enum class Protocol { SRT, ARP, STIRAP, DE };

std::string to_string(Protocol p);
Protocol protocol_from_string(const std::string& s);

// Instantaneous envelope values at one point in time.
struct PulseSample {
  double omega1;  // pump leg |0> <-> |e>, rad/s (signed for DE)
  double omega2;  // Stokes leg |1> <-> |e>, rad/s (signed for DE)
  double delta;   // two-photon detuning, rad/s
};

// Time-parameterized pair of Raman leg envelopes for one SDK protocol.
// All protocols store Rabi-frequency envelopes (Omega ~ E ~ sqrt(I)); the
// DE envelopes are signed. Immutable value type; sampling is pure.
class ProtocolPulse {
 public:
  Protocol protocol() const { return protocol_; }
  double tau() const { return tau_; }
  double total_duration() const { return total_; }  // tau + delay for STIRAP
  double peak_rabi() const { return omega0_; }
  double delta_single() const { return delta_single_; }
  double delta0() const { return delta0_; }
  double stokes_delay() const { return delay_; }
  double envelope_frequency() const { return omega_e_; }
  int direction() const { return direction_; }

  // Envelopes clamp to zero outside their support; delta(t) is evaluated on
  // the clamped time.
  PulseSample sample(double t) const;

  ProtocolPulse with_direction(int z) const;
  // Quasi-static perturbations used by the robustness sweeps: both legs
  // rescale together (intensity), the single-photon detuning shifts.
  ProtocolPulse with_intensity_scale(double intensity_factor) const;
  ProtocolPulse with_detuning_offset(double delta_shift) const;
  ProtocolPulse with_stokes_delay(double t_d) const;

  static ProtocolPulse srt(double omega0, double tau, double delta_single);
  static ProtocolPulse arp(double omega0, double tau, double delta0,
                           double delta_single);
  static ProtocolPulse stirap(double omega0, double tau, double t_d);
  static ProtocolPulse de(double omega0, double tau, double omega_e);

 private:
  ProtocolPulse() = default;

  Protocol protocol_;
  double tau_ = 0.0;
  double total_ = 0.0;
  double omega0_ = 0.0;
  double delta_single_ = 0.0;
  double delta0_ = 0.0;      // ARP sweep amplitude
  double delay_ = 0.0;       // STIRAP Stokes->pump delay
  double omega_e_ = 0.0;     // DE envelope oscillation frequency
  int direction_ = +1;
};

}  // namespace ionkick
