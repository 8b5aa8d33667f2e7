#include "qinterf/harness/runtime.hpp"

#include <cstdlib>

#if defined(__GLIBC__)
#include <malloc.h>
#endif

namespace qinterf::harness {

void tune_allocator() {
#if defined(__GLIBC__)
  // glibc rejects mmap thresholds above 32 MiB on 64-bit targets.
  mallopt(M_MMAP_THRESHOLD, 32 << 20);
  mallopt(M_TRIM_THRESHOLD, 256 << 20);
#endif
}

}  // namespace qinterf::harness
