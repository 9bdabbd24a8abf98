#include <complex>
#include <limits>

#include "pwlab/kernels.hpp"

namespace pwlab::kernels::parallel {

#define PWLAB_PARALLEL_FOR _Pragma("omp parallel for schedule(static)")
#include "kernels_body.inc"
#undef PWLAB_PARALLEL_FOR

}  // namespace pwlab::kernels::parallel
