#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ionkick/pulses.hpp"

namespace ionkick {

struct Sideband {
  int order;
  double amplitude;  // J_n(beta)
};

// Phase-EOM sideband amplitudes J_n(beta) for |n| <= n_max; sideband n sits
// at omega_0 + n * omega_p.
std::vector<Sideband> phase_eom_spectrum(double beta, int n_max);

// Intensity-EOM field transmission factor sin(pi V / (2 V_pi)).
double intensity_transfer(double v, double v_pi);

// One EOM drive channel: RF frequency/phase schedule plus the intensity-EOM
// voltage trace, all sampled on the same uniform grid.
struct WaveformChannel {
  std::vector<double> rf_frequency;      // omega_p(t), rad/s
  std::vector<double> rf_phase;          // phi_p(t), rad (pi flags signed fields)
  std::vector<double> intensity_v;       // V_I(t) / V_pi
};

struct WaveformProgram {
  double sample_rate;       // Hz
  double v_pi;              // volts
  double carrier_omega;     // seed laser angular frequency omega_0, rad/s
  double peak_rabi;         // Omega_0 the unit-normalized field maps to
  double path_delay;        // required counter-propagation path delay, s
  Protocol protocol;
  std::vector<WaveformChannel> channels;  // one per Raman leg

  int samples() const {
    return channels.empty() ? 0 : static_cast<int>(channels[0].intensity_v.size());
  }
  double time_at(int i) const { return i / sample_rate; }
};

struct PredictedChannel {
  std::vector<double> intensity;  // I(t)/I_0 after THG
  std::vector<double> frequency;  // omega(t) = 3*omega_0 + 9*omega_p(t), rad/s
  std::vector<double> rabi;       // signed recovered Rabi envelope, rad/s
};

struct PredictedOutput {
  std::vector<PredictedChannel> channels;
};

// Inverts the intensity transfer so the post-THG envelope realizes the
// pulse's Rabi envelopes; leg 2 rides the RF hop omega_p + delta_HF/9.
WaveformProgram compile_protocol(const ProtocolPulse& pulse, double sample_rate,
                                 double v_pi, double rf_base_omega,
                                 double carrier_omega);

PredictedOutput predict_output(const WaveformProgram& program);

// CSV (`t,phase_rf_freq_hz,phase_rf_phase_rad,intensity_v_over_vpi`) for one
// channel, and the raw binary sample format (magic `IONKWF01`, little-endian
// f64 samples).
void write_channel_csv(std::ostream& os, const WaveformProgram& program,
                       int channel);
void write_program_binary(std::ostream& os, const WaveformProgram& program);

}  // namespace ionkick
