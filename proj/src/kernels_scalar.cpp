#include "fidsim/kernels.hpp"

namespace fidsim::kernels {

namespace {

struct Deriv {
  double fu, fv, fw;
};

// du/dt = -D v + Wi w - u/T2
// dv/dt =  D u + Wr w - v/T2
// dw/dt = -Wr v - Wi u - (w + 1)/T1
inline Deriv rhs(double u, double v, double w, double delta, double wr,
                 double wi, double inv_t1, double inv_t2) {
  return {-delta * v + wi * w - u * inv_t2,
          delta * u + wr * w - v * inv_t2,
          -wr * v - wi * u - (w + 1.0) * inv_t1};
}

} // namespace

void step_classes_scalar(double* u, double* v, double* w, const double* delta,
                         std::size_t n, const StepParams& p) {
  const double dt = p.dt;
  const double half = 0.5 * dt;
  const double sixth = dt / 6.0;
  const double r0r = p.rabi0.real(), r0i = p.rabi0.imag();
  const double rmr = p.rabi_mid.real(), rmi = p.rabi_mid.imag();
  const double r1r = p.rabi1.real(), r1i = p.rabi1.imag();

  for (std::size_t k = 0; k < n; ++k) {
    const double d = delta[k];
    const double u0 = u[k], v0 = v[k], w0 = w[k];

    const Deriv k1 = rhs(u0, v0, w0, d, r0r, r0i, p.inv_t1, p.inv_t2);
    const Deriv k2 = rhs(u0 + half * k1.fu, v0 + half * k1.fv,
                         w0 + half * k1.fw, d, rmr, rmi, p.inv_t1, p.inv_t2);
    const Deriv k3 = rhs(u0 + half * k2.fu, v0 + half * k2.fv,
                         w0 + half * k2.fw, d, rmr, rmi, p.inv_t1, p.inv_t2);
    const Deriv k4 = rhs(u0 + dt * k3.fu, v0 + dt * k3.fv, w0 + dt * k3.fw, d,
                         r1r, r1i, p.inv_t1, p.inv_t2);

    u[k] = u0 + sixth * (k1.fu + 2.0 * (k2.fu + k3.fu) + k4.fu);
    v[k] = v0 + sixth * (k1.fv + 2.0 * (k2.fv + k3.fv) + k4.fv);
    w[k] = w0 + sixth * (k1.fw + 2.0 * (k2.fw + k3.fw) + k4.fw);
  }
}

void weighted_sum_scalar(const double* u, const double* v, const double* wt,
                         std::size_t n, double& su, double& sv) {
  double au = 0.0, av = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    au += wt[k] * u[k];
    av += wt[k] * v[k];
  }
  su = au;
  sv = av;
}

} // namespace fidsim::kernels
