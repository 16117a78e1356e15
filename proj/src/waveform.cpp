#include "ionkick/waveform.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <ostream>

#include "ionkick/constants.hpp"
#include "ionkick/errors.hpp"
#include "ionkick/textio.hpp"

namespace ionkick {

std::vector<Sideband> phase_eom_spectrum(double beta, int n_max) {
  if (beta < 0.0) throw ConfigError("modulation depth must be >= 0");
  if (n_max < 0) throw ConfigError("sideband order must be >= 0");
  std::vector<Sideband> out;
  out.reserve(2 * n_max + 1);
  for (int n = -n_max; n <= n_max; ++n) {
    const double jn = std::cyl_bessel_j(std::abs(n), beta);
    out.push_back({n, (n < 0 && (n & 1)) ? -jn : jn});
  }
  return out;
}

double intensity_transfer(double v, double v_pi) {
  if (v_pi <= 0.0) throw ConfigError("half-wave voltage must be > 0");
  return std::sin(pi * v / (2.0 * v_pi));
}

WaveformProgram compile_protocol(const ProtocolPulse& pulse, double sample_rate,
                                 double v_pi, double rf_base_omega,
                                 double carrier_omega) {
  if (v_pi <= 0.0) throw ConfigError("half-wave voltage must be > 0");
  const double fastest = pulse.protocol() == Protocol::DE
                             ? pulse.envelope_frequency() / two_pi
                             : 1.0 / pulse.tau();
  if (sample_rate < 20.0 * fastest)
    throw ConfigError("sample rate below 20x the fastest pulse feature");

  const double hf_hop = yb171::hyperfine_splitting / 9.0;
  const double omega0 = pulse.peak_rabi();
  if (omega0 <= 0.0) throw ConfigError("pulse peak Rabi frequency must be > 0");

  WaveformProgram prog;
  prog.sample_rate = sample_rate;
  prog.v_pi = v_pi;
  prog.carrier_omega = carrier_omega;
  prog.peak_rabi = omega0;
  prog.protocol = pulse.protocol();
  // the retro-reflected copy supplies the counter-propagating window; its
  // path delay must equal one pulse window
  prog.path_delay = pulse.total_duration();
  prog.channels.resize(2);

  const int n = static_cast<int>(std::ceil(pulse.total_duration() * sample_rate)) + 1;
  for (int c = 0; c < 2; ++c) {
    auto& ch = prog.channels[c];
    ch.rf_frequency.resize(n);
    ch.rf_phase.resize(n);
    ch.intensity_v.resize(n);
  }
  for (int i = 0; i < n; ++i) {
    const double t = i / sample_rate;
    const PulseSample s = pulse.sample(t);
    const double legs[2] = {s.omega1, s.omega2};
    for (int c = 0; c < 2; ++c) {
      const double f = legs[c] / omega0;  // normalized signed field
      if (std::abs(f) > 1.0 + 1e-12)
        throw NumericError("envelope exceeds the unit normalized field (clipping)");
      // V/V_pi realizing |field| = sin^3(pi V / (2 V_pi)) after THG
      const double mag = std::cbrt(std::min(std::abs(f), 1.0));
      prog.channels[c].intensity_v[i] = (2.0 / pi) * std::asin(mag);
      // signed fields carry a pi phase flag; intensity EOMs are non-negative
      prog.channels[c].rf_phase[i] = f < 0.0 ? pi : 0.0;
      prog.channels[c].rf_frequency[i] = rf_base_omega + (c == 1 ? hf_hop : 0.0);
    }
  }
  return prog;
}

PredictedOutput predict_output(const WaveformProgram& program) {
  PredictedOutput out;
  out.channels.resize(program.channels.size());
  for (size_t c = 0; c < program.channels.size(); ++c) {
    const auto& ch = program.channels[c];
    auto& pch = out.channels[c];
    const size_t n = ch.intensity_v.size();
    pch.intensity.resize(n);
    pch.frequency.resize(n);
    pch.rabi.resize(n);
    for (size_t i = 0; i < n; ++i) {
      const double field = std::sin(pi * ch.intensity_v[i] / 2.0);
      const double f3 = field * field * field;  // THG cubes the envelope
      pch.intensity[i] = f3 * f3;
      pch.frequency[i] = 3.0 * program.carrier_omega + 9.0 * ch.rf_frequency[i];
      const double sign = std::cos(ch.rf_phase[i]) < 0.0 ? -1.0 : 1.0;
      pch.rabi[i] = sign * f3 * program.peak_rabi;
    }
  }
  return out;
}

void write_channel_csv(std::ostream& os, const WaveformProgram& program,
                       int channel) {
  const auto& ch = program.channels.at(channel);
  os << "t,phase_rf_freq_hz,phase_rf_phase_rad,intensity_v_over_vpi\n";
  for (size_t i = 0; i < ch.intensity_v.size(); ++i)
    os << format_double(program.time_at(static_cast<int>(i))) << ","
       << format_double(ch.rf_frequency[i] / two_pi) << ","
       << format_double(ch.rf_phase[i]) << "," << format_double(ch.intensity_v[i])
       << "\n";
}

namespace {
void put_f64(std::ostream& os, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  char buf[8];
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
  os.write(buf, 8);
}
void put_u32(std::ostream& os, std::uint32_t v) {
  char buf[4];
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(buf, 4);
}
}  // namespace

void write_program_binary(std::ostream& os, const WaveformProgram& program) {
  os.write("IONKWF01", 8);
  put_f64(os, program.sample_rate);
  put_u32(os, static_cast<std::uint32_t>(program.channels.size()));
  put_u32(os, static_cast<std::uint32_t>(program.samples()));
  for (const auto& ch : program.channels) {
    for (double v : ch.rf_frequency) put_f64(os, v);
    for (double v : ch.rf_phase) put_f64(os, v);
    for (double v : ch.intensity_v) put_f64(os, v);
  }
}

}  // namespace ionkick
