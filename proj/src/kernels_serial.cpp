#include <complex>
#include <limits>

#include "pwlab/kernels.hpp"

namespace pwlab::kernels::serial {

#define PWLAB_PARALLEL_FOR
#include "kernels_body.inc"
#undef PWLAB_PARALLEL_FOR

}  // namespace pwlab::kernels::serial
