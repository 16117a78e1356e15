#include "ionkick/pulses.hpp"

#include <cmath>

#include "ionkick/constants.hpp"
#include "ionkick/errors.hpp"

namespace ionkick {

std::string to_string(Protocol p) {
  switch (p) {
    case Protocol::SRT: return "srt";
    case Protocol::ARP: return "arp";
    case Protocol::STIRAP: return "stirap";
    case Protocol::DE: return "de";
  }
  return "?";
}

Protocol protocol_from_string(const std::string& s) {
  if (s == "srt") return Protocol::SRT;
  if (s == "arp") return Protocol::ARP;
  if (s == "stirap") return Protocol::STIRAP;
  if (s == "de") return Protocol::DE;
  throw ConfigError("unknown protocol: " + s);
}

namespace {
// sin^3(pi t / tau) on [0, tau], zero outside.
double sin3(double t, double tau) {
  if (t <= 0.0 || t >= tau) return 0.0;
  const double s = std::sin(pi * t / tau);
  return s * s * s;
}
}  // namespace

PulseSample ProtocolPulse::sample(double t) const {
  PulseSample out{0.0, 0.0, 0.0};
  switch (protocol_) {
    case Protocol::SRT:
      out.omega1 = out.omega2 = omega0_ * sin3(t, tau_);
      break;
    case Protocol::ARP: {
      out.omega1 = out.omega2 = omega0_ * sin3(t, tau_);
      const double tc = std::clamp(t, 0.0, tau_);
      out.delta = delta0_ * std::cos(pi * tc / tau_);
      break;
    }
    case Protocol::STIRAP:
      // Stokes window [0, tau], pump window [t_d, t_d + tau].
      out.omega2 = omega0_ * sin3(t, tau_);
      out.omega1 = omega0_ * sin3(t - delay_, tau_);
      break;
    case Protocol::DE: {
      const double slow = omega0_ * sin3(t, tau_);
      const double c = std::cos(omega_e_ * t);
      const double s = std::sin(omega_e_ * t);
      out.omega1 = slow * c * c * c;
      out.omega2 = slow * s * s * s;
      break;
    }
  }
  return out;
}

ProtocolPulse ProtocolPulse::with_direction(int z) const {
  if (z != 1 && z != -1) throw ConfigError("direction must be +1 or -1");
  ProtocolPulse p = *this;
  p.direction_ = z;
  return p;
}

ProtocolPulse ProtocolPulse::with_intensity_scale(double f) const {
  if (f < 0.0) throw ConfigError("intensity scale must be >= 0");
  ProtocolPulse p = *this;
  p.omega0_ = omega0_ * std::sqrt(f);
  return p;
}

ProtocolPulse ProtocolPulse::with_detuning_offset(double shift) const {
  ProtocolPulse p = *this;
  p.delta_single_ = delta_single_ + shift;
  return p;
}

ProtocolPulse ProtocolPulse::with_stokes_delay(double t_d) const {
  if (protocol_ != Protocol::STIRAP)
    throw ConfigError("stokes delay applies to STIRAP only");
  return stirap(omega0_, tau_, t_d);
}

ProtocolPulse ProtocolPulse::srt(double omega0, double tau, double delta_single) {
  if (tau <= 0.0) throw ConfigError("pulse duration must be > 0");
  ProtocolPulse p;
  p.protocol_ = Protocol::SRT;
  p.omega0_ = omega0;
  p.tau_ = tau;
  p.total_ = tau;
  p.delta_single_ = delta_single;
  return p;
}

ProtocolPulse ProtocolPulse::arp(double omega0, double tau, double delta0,
                                 double delta_single) {
  if (tau <= 0.0) throw ConfigError("pulse duration must be > 0");
  ProtocolPulse p;
  p.protocol_ = Protocol::ARP;
  p.omega0_ = omega0;
  p.tau_ = tau;
  p.total_ = tau;
  p.delta0_ = delta0;
  p.delta_single_ = delta_single;
  return p;
}

ProtocolPulse ProtocolPulse::stirap(double omega0, double tau, double t_d) {
  if (tau <= 0.0) throw ConfigError("pulse duration must be > 0");
  if (t_d < 0.0 || t_d >= tau)
    throw ConfigError("STIRAP delay must satisfy 0 <= t_d < tau");
  ProtocolPulse p;
  p.protocol_ = Protocol::STIRAP;
  p.omega0_ = omega0;
  p.tau_ = tau;
  p.total_ = tau + t_d;
  p.delay_ = t_d;
  return p;
}

ProtocolPulse ProtocolPulse::de(double omega0, double tau, double omega_e) {
  if (tau <= 0.0) throw ConfigError("pulse duration must be > 0");
  if (omega_e <= 0.0) throw ConfigError("envelope frequency must be > 0");
  ProtocolPulse p;
  p.protocol_ = Protocol::DE;
  p.omega0_ = omega0;
  p.tau_ = tau;
  p.total_ = tau;
  p.omega_e_ = omega_e;
  return p;
}

}  // namespace ionkick
