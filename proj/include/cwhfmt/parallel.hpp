/*
 Copyright 2026 The cwhfmt Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#ifndef CWHFMT_PARALLEL_HPP
#define CWHFMT_PARALLEL_HPP

namespace cwhfmt {

/// Serial kernels are the reference implementation; parallel kernels must
/// produce identical output.
enum class Exec { Serial, Parallel };

/// Worker count: CWHFMT_THREADS if set to a positive integer, otherwise the
/// OpenMP default.  Always 1 in builds without OpenMP.
int worker_count();

/// Applies worker_count() to the OpenMP runtime.  Safe to call repeatedly.
void configure_workers();

}  // namespace cwhfmt

#endif  // CWHFMT_PARALLEL_HPP
