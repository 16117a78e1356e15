#include <doctest.h>

#include <cmath>

#include "ionkick/constants.hpp"
#include "ionkick/errors.hpp"
#include "ionkick/pulses.hpp"

using namespace ionkick;

namespace {
constexpr double tau = 1e-9;
constexpr double om0 = 2e11;
}  // namespace

TEST_CASE("sin^3 envelope peaks at mid-pulse and clamps outside") {
  const ProtocolPulse p = ProtocolPulse::srt(om0, tau, two_pi * 400e9);
  CHECK(p.sample(tau / 2).omega1 == doctest::Approx(om0));
  const double quarter = std::pow(std::sin(pi / 4.0), 3.0);
  CHECK(p.sample(tau / 4).omega1 == doctest::Approx(om0 * quarter));
  CHECK(p.sample(-1e-12).omega1 == 0.0);
  CHECK(p.sample(tau + 1e-12).omega1 == 0.0);
  CHECK(p.sample(tau / 2).omega2 == p.sample(tau / 2).omega1);
  CHECK(p.sample(tau / 2).delta == 0.0);
  CHECK(p.total_duration() == tau);
}

TEST_CASE("arp chirp runs from +delta0 to -delta0 through zero") {
  const double delta0 = two_pi * 18e9;
  const ProtocolPulse p = ProtocolPulse::arp(om0, tau, delta0, two_pi * 400e9);
  CHECK(p.sample(0.0).delta == doctest::Approx(delta0));
  CHECK(p.sample(tau).delta == doctest::Approx(-delta0));
  CHECK(std::abs(p.sample(tau / 2).delta) < 1e-3);  // cos(pi/2) to roundoff
  // the chirp clamps with the envelope window
  CHECK(p.sample(2 * tau).delta == doctest::Approx(-delta0));
}

TEST_CASE("stirap orders stokes before pump (counter-intuitive ordering)") {
  const double td = 0.26e-9;
  const ProtocolPulse p = ProtocolPulse::stirap(om0, tau, td);
  CHECK(p.total_duration() == doctest::Approx(tau + td));
  // early times: only the Stokes leg (|1><->|e|) is on
  const PulseSample early = p.sample(0.1e-9);
  CHECK(early.omega2 > 0.0);
  CHECK(early.omega1 == 0.0);
  // late times: only the pump leg remains
  const PulseSample late = p.sample(tau + 0.1e-9);
  CHECK(late.omega1 > 0.0);
  CHECK(late.omega2 == 0.0);
  CHECK_THROWS_AS(ProtocolPulse::stirap(om0, tau, tau), ConfigError);
  CHECK_THROWS_AS(ProtocolPulse::stirap(om0, tau, -1e-12), ConfigError);
}

TEST_CASE("de envelopes are signed cos^3/sin^3 slices of the slow pulse") {
  const double we = two_pi * 200e9;
  const ProtocolPulse p = ProtocolPulse::de(om0, tau, we);
  const double t = 0.4e-9;
  const double slow = om0 * std::pow(std::sin(pi * t / tau), 3.0);
  CHECK(p.sample(t).omega1 == doctest::Approx(slow * std::pow(std::cos(we * t), 3.0)));
  CHECK(p.sample(t).omega2 == doctest::Approx(slow * std::pow(std::sin(we * t), 3.0)));
  // the signed envelopes really do change sign
  bool neg1 = false, neg2 = false;
  for (int i = 1; i < 400; ++i) {
    const PulseSample s = p.sample(tau * i / 400.0);
    neg1 |= s.omega1 < 0.0;
    neg2 |= s.omega2 < 0.0;
  }
  CHECK(neg1);
  CHECK(neg2);
}

TEST_CASE("de signed envelopes carry almost no dc area") {
  const ProtocolPulse p = ProtocolPulse::de(om0, tau, two_pi * 200e9);
  // Simpson quadrature of the signed envelopes against the rectified one
  const int n = 20000;
  double signed1 = 0.0, rect = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const PulseSample s = p.sample(tau * i / n);
    signed1 += w * s.omega1;
    rect += w * std::abs(s.omega1);
  }
  CHECK(std::abs(signed1) < 2e-2 * rect);
}

TEST_CASE("quasi-static perturbations act on the right knobs") {
  const ProtocolPulse p = ProtocolPulse::srt(om0, tau, two_pi * 400e9);
  // intensity scaling moves the field by sqrt
  const ProtocolPulse up = p.with_intensity_scale(1.21);
  CHECK(up.peak_rabi() == doctest::Approx(om0 * 1.1));
  CHECK(up.sample(tau / 2).omega1 == doctest::Approx(om0 * 1.1));
  const ProtocolPulse shifted = p.with_detuning_offset(two_pi * 1e9);
  CHECK(shifted.delta_single() == doctest::Approx(two_pi * 401e9));
  CHECK_THROWS_AS(p.with_intensity_scale(-0.1), ConfigError);
  CHECK_THROWS_AS(p.with_direction(0), ConfigError);
  CHECK_THROWS_AS(p.with_stokes_delay(0.1e-9), ConfigError);
  CHECK(p.with_direction(-1).direction() == -1);
}

TEST_CASE("protocol names round-trip") {
  for (auto p : {Protocol::SRT, Protocol::ARP, Protocol::STIRAP, Protocol::DE})
    CHECK(protocol_from_string(to_string(p)) == p);
  CHECK_THROWS_AS(protocol_from_string("nope"), ConfigError);
  CHECK_THROWS_AS(ProtocolPulse::srt(om0, 0.0, 0.0), ConfigError);
  CHECK_THROWS_AS(ProtocolPulse::de(om0, tau, 0.0), ConfigError);
}
