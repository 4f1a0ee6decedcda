#include "fidsim/bloch.hpp"

#include <cmath>
#include <stdexcept>

#include "fidsim/kernels.hpp"

namespace fidsim {

void MediumSpec::validate() const {
  if (!(optical_depth >= 0.0))
    throw std::invalid_argument("medium: optical_depth must be >= 0");
  if (!(t1 > 0.0) || !(t2 > 0.0))
    throw std::invalid_argument("medium: t1 and t2 must be > 0");
  if (t2 > 2.0 * t1 * (1.0 + 1e-12))
    throw std::invalid_argument("medium: t2 must not exceed 2*t1");
  if (!(length > 0.0))
    throw std::invalid_argument("medium: length must be > 0");
  if (!(drive_scale > 0.0))
    throw std::invalid_argument("medium: drive_scale must be > 0");
}

MediumSpec default_waveguide_i() {
  MediumSpec m;
  m.label = "waveguide_i";
  return m;
}

MediumSpec default_waveguide_ii() {
  MediumSpec m;
  m.optical_depth = 4.0;
  m.label = "waveguide_ii";
  return m;
}

BlochEnsembleState BlochEnsembleState::ground(std::size_t n_classes) {
  BlochEnsembleState s;
  s.u.assign(n_classes, 0.0);
  s.v.assign(n_classes, 0.0);
  s.w.assign(n_classes, -1.0);
  return s;
}

double BlochEnsembleState::max_norm_deviation() const {
  double worst = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double n = std::sqrt(u[k] * u[k] + v[k] * v[k] + w[k] * w[k]);
    worst = std::max(worst, std::abs(n - 1.0));
  }
  return worst;
}

double bloch_dt_guard(double max_abs_detuning, double max_abs_rabi) {
  const double rate = std::max(max_abs_detuning, max_abs_rabi);
  if (rate <= 0.0) return 1e-6;
  return 1.0 / (20.0 * rate);
}

double bloch_default_dt(double max_abs_detuning, double max_abs_rabi,
                        double t1, double t2) {
  double dt = 0.8 * bloch_dt_guard(max_abs_detuning, max_abs_rabi);
  dt = std::min(dt, t1 / 10.0);
  dt = std::min(dt, t2 / 10.0);
  return dt;
}

BlochEnsembleState bloch_step(const BlochEnsembleState& state,
                              std::complex<double> rabi, double dt,
                              const DetuningGrid& grid,
                              const MediumSpec& medium) {
  if (state.size() != grid.size() || state.v.size() != state.u.size() ||
      state.w.size() != state.u.size())
    throw std::invalid_argument("bloch_step: state/grid dimension mismatch");
  const double guard = bloch_dt_guard(grid.max_abs_detuning(), std::abs(rabi));
  if (!(dt > 0.0) || dt > guard * (1.0 + 1e-12))
    throw std::invalid_argument("bloch_step: dt violates stability guard");

  BlochEnsembleState next = state;
  kernels::StepParams p;
  p.dt = dt;
  p.inv_t1 = 1.0 / medium.t1;
  p.inv_t2 = 1.0 / medium.t2;
  p.rabi0 = p.rabi_mid = p.rabi1 = rabi;
  kernels::select_step()(next.u.data(), next.v.data(), next.w.data(),
                         grid.detunings.data(), next.size(), p);
  return next;
}

std::array<double, 3> rabi_oracle(double rabi, double detuning, double t) {
  const double g2 = rabi * rabi + detuning * detuning;
  if (g2 == 0.0) return {0.0, 0.0, -1.0};
  const double g = std::sqrt(g2);
  const double phi = g * t;
  const double c = std::cos(phi), s = std::sin(phi);
  // Rodrigues rotation of (0,0,-1) about k = (-rabi, 0, detuning)/g.
  const double u = rabi * detuning / g2 * (1.0 - c);
  const double v = -rabi / g * s;
  const double w = -c - detuning * detuning / g2 * (1.0 - c);
  return {u, v, w};
}

} // namespace fidsim
