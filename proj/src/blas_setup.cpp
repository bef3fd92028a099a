// Copyright 2026 The qldyn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>

#if defined(QLDYN_HAVE_LAPACKE) && defined(__x86_64__) && defined(__GNUC__)
// DYNAMIC_ARCH OpenBLAS selects its kernel table in a library constructor,
// which runs before any of ours; these hooks (absent in fixed-arch builds,
// hence weak) let us redo the selection after adjusting the environment.
extern "C" void gotoblas_dynamic_init(void) __attribute__((weak));
extern "C" void gotoblas_dynamic_quit(void) __attribute__((weak));
#endif

namespace qldyn::detail {

// Some OpenBLAS builds misdetect virtualized x86 CPUs and select pre-AVX
// kernels an order of magnitude slower than the hardware supports. When the
// user has not pinned OPENBLAS_CORETYPE and the CPU reports AVX-512F, pin a
// matching kernel set and make OpenBLAS re-run its dynamic selection.
bool ensure_blas_kernel_arch() {
#if defined(QLDYN_HAVE_LAPACKE) && defined(__x86_64__) && defined(__GNUC__)
  __builtin_cpu_init();
  if (std::getenv("OPENBLAS_CORETYPE") == nullptr &&
      __builtin_cpu_supports("avx512f")) {
    ::setenv("OPENBLAS_CORETYPE", "SKYLAKEX", 0);
    if (gotoblas_dynamic_quit != nullptr && gotoblas_dynamic_init != nullptr) {
      gotoblas_dynamic_quit();
      gotoblas_dynamic_init();
    }
  }
#endif
  return true;
}

}  // namespace qldyn::detail
