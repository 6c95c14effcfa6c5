// Copyright 2026 The ProxySel Authors
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

#ifndef PROXYSEL_PARALLEL_HPP
#define PROXYSEL_PARALLEL_HPP

namespace proxysel {

// Every OpenMP kernel in this project has a serial twin selected by
// ExecPolicy. Parallel paths split work across independent output cells
// only; per-cell arithmetic and summation order are identical in both
// paths, so Serial and Parallel results are bit-identical. Tests and the
// bench tool rely on that.

enum class ExecPolicy {
  kSerial,
  kParallel,
};

/// Number of OpenMP threads a parallel region would use (1 without OpenMP).
int hardware_thread_count();

}  // namespace proxysel

#endif  // PROXYSEL_PARALLEL_HPP
