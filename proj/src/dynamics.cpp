#include "ionkick/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <ostream>

#include "ionkick/constants.hpp"
#include "ionkick/errors.hpp"
#include "ionkick/integrator.hpp"
#include "ionkick/textio.hpp"

namespace ionkick {

double Propagation::max_norm_deviation() const {
  double worst = 0.0;
  for (const auto& s : states) worst = std::max(worst, std::abs(s.norm() - 1.0));
  return worst;
}

double Propagation::unitarity_defect() const {
  const Eigen::MatrixXcd d =
      u_final.adjoint() * u_final -
      Eigen::MatrixXcd::Identity(u_final.rows(), u_final.cols());
  return d.cwiseAbs().maxCoeff();
}

void Propagation::write_csv(std::ostream& os) const {
  os << "t";
  const Eigen::Index n = states.empty() ? 0 : states.front().size();
  for (Eigen::Index i = 0; i < n; ++i) os << ",re_c" << i << ",im_c" << i;
  os << "\n";
  for (size_t k = 0; k < t_grid.size(); ++k) {
    os << format_double(t_grid[k]);
    for (Eigen::Index i = 0; i < n; ++i)
      os << "," << format_double(states[k](i).real()) << ","
         << format_double(states[k](i).imag());
    os << "\n";
  }
}

namespace {

StepperOptions stepper_for(const ProtocolPulse& pulse, double tol) {
  StepperOptions opt;
  // local per-step tolerance sits well below the requested global one;
  // accumulated error must stay within the norm/unitarity invariants (10x
  // tol) even for strongly detuned pulses that take several 1e5 steps
  opt.tol = tol * 1e-4;
  opt.max_step = pulse.total_duration() / 50.0;
  if (pulse.protocol() == Protocol::DE)
    opt.max_step = std::min(opt.max_step,
                            (two_pi / pulse.envelope_frequency()) / 20.0);
  return opt;
}

Propagation run_propagation(int dim, const std::function<void(double, Eigen::MatrixXcd&)>& fill_h,
                            double t_end, const PropagateOptions& opt,
                            const StepperOptions& stepper) {
  Propagation prop;
  prop.tol = opt.tol;
  prop.initial_state = opt.initial_state;

  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  Eigen::MatrixXcd h(dim, dim);
  const std::complex<double> mi(0.0, -1.0);
  auto deriv = [&](double t, const Eigen::MatrixXcd& y, Eigen::MatrixXcd& dydt) {
    fill_h(t, h);
    dydt.noalias() = mi * (h * y);
  };
  auto observer = [&](double t, const Eigen::MatrixXcd& y) {
    if (opt.store_trajectory) {
      prop.t_grid.push_back(t);
      prop.states.push_back(y.col(opt.initial_state));
    }
  };
  integrate_adaptive(deriv, u, 0.0, t_end, stepper, observer);
  prop.u_final = std::move(u);

  if (prop.max_norm_deviation() > 10.0 * opt.tol)
    throw NumericError("propagation lost norm beyond tolerance");
  if (prop.unitarity_defect() > 10.0 * opt.tol)
    throw NumericError("propagator failed unitarity check");
  return prop;
}

}  // namespace

Propagation propagate(const LevelSystem& system, const ProtocolPulse& pulse,
                      const PropagateOptions& opt) {
  if (system.size() != 3)
    throw ConfigError("propagate expects a three-level Lambda system");
  const double delta_single = pulse.delta_single();
  auto fill_h = [&pulse, delta_single](double t, Eigen::MatrixXcd& h) {
    const PulseSample s = pulse.sample(t);
    h.setZero();
    h(0, 1) = h(1, 0) = 0.5 * s.omega1;
    h(1, 2) = h(2, 1) = 0.5 * s.omega2;
    h(1, 1) = -delta_single;
    h(2, 2) = -s.delta;
  };
  return run_propagation(3, fill_h, pulse.total_duration(), opt,
                         stepper_for(pulse, opt.tol));
}

Propagation propagate_effective(const EffectiveRaman& eff, const ProtocolPulse& pulse,
                                const PropagateOptions& opt) {
  const double delta = eff.delta_single;
  if (delta == 0.0)
    throw NumericError("effective model requires nonzero single-photon detuning");
  const double whf = yb171::hyperfine_splitting;
  auto fill_h = [&pulse, delta, whf](double t, Eigen::MatrixXcd& h) {
    const PulseSample s = pulse.sample(t);
    const double omega_eff = s.omega1 * s.omega2 / (2.0 * delta);
    const double stark =
        (s.omega1 * s.omega1 / 4.0) * (1.0 / delta - 1.0 / (delta + whf));
    h(0, 0) = 0.5 * stark;
    h(0, 1) = h(1, 0) = 0.5 * omega_eff;
    h(1, 1) = -0.5 * stark - s.delta;
  };
  return run_propagation(2, fill_h, pulse.total_duration(), opt,
                         stepper_for(pulse, opt.tol));
}

TransferResult transfer_error(const Propagation& prop, const LevelSystem& system,
                              int initial, int target) {
  const Eigen::VectorXcd psi = prop.u_final.col(initial);
  TransferResult r;
  const std::complex<double> amp = psi(target);
  r.epsilon = std::clamp(1.0 - std::norm(amp), 0.0, 1.0);
  r.final_phase = std::arg(amp);
  r.intermediate_peak = 0.0;
  if (system.size() == 3 && prop.initial_state == initial) {
    for (const auto& s : prop.states)
      r.intermediate_peak = std::max(r.intermediate_peak, std::norm(s(1)));
  }
  return r;
}

namespace {

// Coherent state on a truncated Fock basis.
Eigen::VectorXcd coherent_state(std::complex<double> alpha, int n) {
  Eigen::VectorXcd v(n);
  std::complex<double> term = std::exp(-0.5 * std::norm(alpha));
  for (int m = 0; m < n; ++m) {
    v(m) = term;
    term *= alpha / std::sqrt(double(m + 1));
  }
  return v;
}

}  // namespace

DisplacementEstimate sdk_phase_check(const LevelSystem& system,
                                     const ProtocolPulse& pulse, double eta,
                                     int fock_truncation, double tol) {
  if (system.size() != 3)
    throw ConfigError("sdk_phase_check expects a three-level Lambda system");
  const int nf = fock_truncation;
  if (nf < 2) throw ConfigError("Fock truncation must be >= 2");
  const int dim = 3 * nf;

  // X = a + a^dag, eigendecomposed once; the kick factor is exp(i z eta X).
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(nf, nf);
  for (int m = 0; m + 1 < nf; ++m) x(m, m + 1) = x(m + 1, m) = std::sqrt(double(m + 1));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(x);
  auto kick_matrix = [&](double zeta) {
    const Eigen::VectorXcd phases =
        (std::complex<double>(0.0, zeta) * es.eigenvalues().array()).exp();
    return Eigen::MatrixXcd(es.eigenvectors() * phases.asDiagonal() *
                            es.eigenvectors().transpose());
  };

  const double delta_single = pulse.delta_single();
  // block layout: [ |0> (x) fock | |e> (x) fock | |1> (x) fock ]
  auto run_window = [&](Eigen::VectorXcd& psi, bool swap_legs, int z) {
    const Eigen::MatrixXcd kick = kick_matrix(z * eta);
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
    auto fill_h = [&](double t, Eigen::MatrixXcd& hh) {
      const PulseSample s = pulse.sample(t);
      const double w0e = swap_legs ? s.omega2 : s.omega1;  // leg carrying the kick
      const double w1e = swap_legs ? s.omega1 : s.omega2;
      hh.setZero();
      hh.block(nf, 0, nf, nf) = (0.5 * w0e) * kick;
      hh.block(0, nf, nf, nf) = (0.5 * w0e) * kick.adjoint();
      hh.block(nf, 2 * nf, nf, nf) =
          (0.5 * w1e) * Eigen::MatrixXcd::Identity(nf, nf);
      hh.block(2 * nf, nf, nf, nf) =
          (0.5 * w1e) * Eigen::MatrixXcd::Identity(nf, nf);
      for (int m = 0; m < nf; ++m) {
        hh(nf + m, nf + m) = -delta_single;
        hh(2 * nf + m, 2 * nf + m) = -s.delta;
      }
      (void)t;
    };
    Eigen::MatrixXcd y = psi;
    const std::complex<double> mi(0.0, -1.0);
    auto deriv = [&](double t, const Eigen::MatrixXcd& yy, Eigen::MatrixXcd& dydt) {
      fill_h(t, h);
      dydt.noalias() = mi * (h * yy);
    };
    StepperOptions so = stepper_for(pulse, tol);
    integrate_adaptive(deriv, y, 0.0, pulse.total_duration(), so,
                       [](double, const Eigen::MatrixXcd&) {});
    psi = y.col(0);
  };

  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
  psi(0) = 1.0;  // |0> (x) |vac>
  run_window(psi, /*swap_legs=*/false, /*z=*/+pulse.direction());
  run_window(psi, /*swap_legs=*/true, /*z=*/-pulse.direction());

  // truncation tail check over all internal blocks
  double tail = std::norm(psi(nf - 1)) + std::norm(psi(2 * nf - 1)) +
                std::norm(psi(3 * nf - 1));
  if (tail > 1e-8)
    throw NumericError(
        "Fock truncation too small for this kick (tail population " +
        std::to_string(tail) + "); increase the truncation");

  DisplacementEstimate out;
  Eigen::VectorXcd block0 = psi.segment(0, nf);
  const double p0 = block0.squaredNorm();
  out.spin_error = 1.0 - p0;
  if (p0 > 0.0) block0 /= std::sqrt(p0);

  // <a> of the (normalized) spin-|0> motional state
  std::complex<double> a_exp = 0.0;
  for (int m = 0; m + 1 < nf; ++m)
    a_exp += std::conj(block0(m)) * std::sqrt(double(m + 1)) * block0(m + 1);
  out.alpha = a_exp;

  const Eigen::VectorXcd fit = coherent_state(out.alpha, nf);
  out.coherent_overlap = std::norm(fit.dot(block0));
  const std::complex<double> ideal(0.0, 2.0 * eta * pulse.direction());
  const Eigen::VectorXcd ideal_state = coherent_state(ideal, nf);
  out.conditioning_error = 1.0 - std::norm(ideal_state.dot(block0)) * p0;
  return out;
}

}  // namespace ionkick
