#include <cstdlib>
#include <mutex>
#include <string>

#include "fidsim/kernels.hpp"

namespace fidsim::kernels {

namespace {

struct Selection {
  StepFn step = step_classes_scalar;
  WeightedSumFn sum = weighted_sum_scalar;
  std::string name = "scalar";
};

Selection pick() {
  Selection sel;
#if defined(__x86_64__) || defined(_M_X64)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    sel = {step_classes_avx2, weighted_sum_avx2, "avx2"};
  }
#endif
  if (const char* forced = std::getenv("FIDSIM_KERNEL")) {
    const std::string want(forced);
    if (want == "scalar") {
      sel = {step_classes_scalar, weighted_sum_scalar, "scalar"};
    }
#if defined(__x86_64__) || defined(_M_X64)
    else if (want == "avx2" && __builtin_cpu_supports("avx2") &&
             __builtin_cpu_supports("fma")) {
      sel = {step_classes_avx2, weighted_sum_avx2, "avx2"};
    }
#endif
  }
  return sel;
}

const Selection& selection() {
  static const Selection sel = pick();
  return sel;
}

} // namespace

StepFn select_step() { return selection().step; }
WeightedSumFn select_weighted_sum() { return selection().sum; }
std::string active_kernel_name() { return selection().name; }

} // namespace fidsim::kernels
