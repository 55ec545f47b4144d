// Copyright 2026 qnoise Contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QNOISE_PARALLEL_H
#define QNOISE_PARALLEL_H

#include <cstddef>
#include <functional>

namespace qnoise {

/// Runs fn(i) for i in [begin, end) across a pool of threads.
///
/// Every index is an independent task writing only to its own slots, so the
/// result is identical for any thread count. threads == 0 picks the
/// hardware concurrency; threads == 1 runs inline.
void parallel_for(size_t begin, size_t end, unsigned threads, const std::function<void(size_t)> &fn);

}  // namespace qnoise

#endif
