#include <doctest.h>

#include <cmath>
#include <cstring>
#include <sstream>

#include "ionkick/constants.hpp"
#include "ionkick/errors.hpp"
#include "ionkick/sdk.hpp"
#include "ionkick/waveform.hpp"

using namespace ionkick;

TEST_CASE("phase eom spectrum carries signed bessel amplitudes") {
  const auto flat = phase_eom_spectrum(0.0, 3);
  REQUIRE(flat.size() == 7);
  for (const auto& s : flat)
    CHECK(s.amplitude == (s.order == 0 ? 1.0 : 0.0));

  const double beta = 1.5;
  const auto sb = phase_eom_spectrum(beta, 20);
  double power = 0.0;
  for (const auto& s : sb) {
    power += s.amplitude * s.amplitude;
    // J_{-n} = (-1)^n J_n
    if (s.order < 0) {
      const double jn = std::cyl_bessel_j(-s.order, beta);
      CHECK(s.amplitude == doctest::Approx((s.order & 1) ? -jn : jn));
    }
  }
  CHECK(power == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(phase_eom_spectrum(-1.0, 3), ConfigError);
  CHECK_THROWS_AS(phase_eom_spectrum(1.0, -1), ConfigError);
}

TEST_CASE("intensity transfer interpolates sin between 0 and V_pi") {
  CHECK(intensity_transfer(0.0, 1.0) == 0.0);
  CHECK(intensity_transfer(1.0, 1.0) == doctest::Approx(1.0));
  CHECK(intensity_transfer(1.0 / 3.0, 1.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(intensity_transfer(0.5, 0.0), ConfigError);
}

TEST_CASE("compile then predict round-trips the rabi envelopes") {
  const double rate = 100e9;
  // the reference de point oscillates too fast for this sampling rate, so the
  // de leg of the round trip runs at a slower envelope frequency
  const ProtocolPulse de_slow = ProtocolPulse::de(3e11, 1e-9, two_pi * 1e9);
  for (const ProtocolPulse& pulse :
       {reference_pulse(Protocol::SRT), reference_pulse(Protocol::STIRAP), de_slow}) {
    const WaveformProgram prog =
        compile_protocol(pulse, rate, 1.0, two_pi * 4.2e9, two_pi * 2.8e14);
    const PredictedOutput out = predict_output(prog);
    REQUIRE(out.channels.size() == 2);
    double acc = 0.0;
    int n = 0;
    for (int i = 0; i < prog.samples(); ++i) {
      const PulseSample s = pulse.sample(prog.time_at(i));
      const double legs[2] = {s.omega1, s.omega2};
      for (int c = 0; c < 2; ++c) {
        const double d = (out.channels[c].rabi[i] - legs[c]) / pulse.peak_rabi();
        acc += d * d;
        ++n;
      }
    }
    CHECK(std::sqrt(acc / n) < 1e-6);
  }
}

TEST_CASE("second channel rides the hyperfine rf hop") {
  const ProtocolPulse pulse = reference_pulse(Protocol::SRT);
  const double rf = two_pi * 4.2e9;
  const WaveformProgram prog =
      compile_protocol(pulse, 100e9, 1.0, rf, two_pi * 2.8e14);
  CHECK(prog.channels[0].rf_frequency[0] == doctest::Approx(rf));
  CHECK(prog.channels[1].rf_frequency[0] ==
        doctest::Approx(rf + yb171::hyperfine_splitting / 9.0));
  CHECK(prog.path_delay == doctest::Approx(pulse.total_duration()));
  // predicted optical frequency after THG: tripled carrier + 9x the rf
  const PredictedOutput out = predict_output(prog);
  CHECK(out.channels[0].frequency[0] ==
        doctest::Approx(3.0 * two_pi * 2.8e14 + 9.0 * rf));
}

TEST_CASE("de sign flips land in the rf phase, not the voltage") {
  const ProtocolPulse pulse = ProtocolPulse::de(3e11, 1e-9, two_pi * 1e9);
  const WaveformProgram prog =
      compile_protocol(pulse, 100e9, 1.0, two_pi * 4.2e9, two_pi * 2.8e14);
  bool saw_flag = false;
  for (int i = 0; i < prog.samples(); ++i)
    for (int c = 0; c < 2; ++c) {
      CHECK(prog.channels[c].intensity_v[i] >= 0.0);
      CHECK(prog.channels[c].intensity_v[i] <= 1.0);
      saw_flag |= prog.channels[c].rf_phase[i] == pi;
    }
  CHECK(saw_flag);
}

TEST_CASE("undersampling is rejected") {
  const ProtocolPulse pulse = reference_pulse(Protocol::DE);
  // DE needs 20x its envelope frequency, far above 20x 1/tau
  CHECK_THROWS_AS(compile_protocol(pulse, 100e9 / 50.0, 1.0, two_pi * 4.2e9,
                                   two_pi * 2.8e14),
                  ConfigError);
  CHECK_THROWS_AS(compile_protocol(pulse, 100e9, 0.0, two_pi * 4.2e9,
                                   two_pi * 2.8e14),
                  ConfigError);
}

TEST_CASE("binary program layout: magic, sizes, little-endian doubles") {
  const ProtocolPulse pulse = reference_pulse(Protocol::SRT);
  const WaveformProgram prog =
      compile_protocol(pulse, 100e9, 1.0, two_pi * 4.2e9, two_pi * 2.8e14);
  std::ostringstream ss(std::ios::binary);
  write_program_binary(ss, prog);
  const std::string blob = ss.str();
  REQUIRE(blob.size() >= 24);
  CHECK(blob.substr(0, 8) == "IONKWF01");
  const size_t n = prog.samples();
  CHECK(blob.size() == 8 + 8 + 4 + 4 + 2 * 3 * n * 8);
  // sample_rate as little-endian f64
  double rate = 0.0;
  std::memcpy(&rate, blob.data() + 8, 8);
  CHECK(rate == 100e9);
}

TEST_CASE("channel csv carries the documented header") {
  const ProtocolPulse pulse = reference_pulse(Protocol::SRT);
  const WaveformProgram prog =
      compile_protocol(pulse, 100e9, 1.0, two_pi * 4.2e9, two_pi * 2.8e14);
  std::ostringstream ss;
  write_channel_csv(ss, prog, 0);
  std::istringstream in(ss.str());
  std::string header;
  std::getline(in, header);
  CHECK(header == "t,phase_rf_freq_hz,phase_rf_phase_rad,intensity_v_over_vpi");
}
