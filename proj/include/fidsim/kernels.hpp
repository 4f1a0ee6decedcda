#pragma once

#include <complex>
#include <cstddef>
#include <string>

namespace fidsim::kernels {

// Inner loop of the Maxwell-Bloch solver: advance a batch of independent
// detuning classes by one RK4 step. Implemented as a scalar reference
// kernel plus an AVX2 variant selected at runtime; the two are
// equivalence-tested against each other.

struct StepParams {
  double dt = 0.0;
  double inv_t1 = 0.0;
  double inv_t2 = 0.0;
  // Drive at the step start, midpoint and end (RK4 stage times).
  std::complex<double> rabi0, rabi_mid, rabi1;
};

/// Advances n classes in place. delta[k] is the detuning of class k.
using StepFn = void (*)(double* u, double* v, double* w, const double* delta,
                        std::size_t n, const StepParams& p);

/// Weighted sums su = sum_k wt[k]*u[k], sv = sum_k wt[k]*v[k]
/// (the slice polarization components).
using WeightedSumFn = void (*)(const double* u, const double* v,
                               const double* wt, std::size_t n, double& su,
                               double& sv);

void step_classes_scalar(double* u, double* v, double* w, const double* delta,
                         std::size_t n, const StepParams& p);
void weighted_sum_scalar(const double* u, const double* v, const double* wt,
                         std::size_t n, double& su, double& sv);

#if defined(__x86_64__) || defined(_M_X64)
void step_classes_avx2(double* u, double* v, double* w, const double* delta,
                       std::size_t n, const StepParams& p);
void weighted_sum_avx2(const double* u, const double* v, const double* wt,
                       std::size_t n, double& su, double& sv);
#endif

/// Best kernel for this machine. Honors FIDSIM_KERNEL=scalar|avx2 from the
/// environment (the override is read once, at first use).
StepFn select_step();
WeightedSumFn select_weighted_sum();

/// Name of the kernel select_step() returns ("scalar" or "avx2").
std::string active_kernel_name();

} // namespace fidsim::kernels
