// Copyright 2026 The HBR Authors.
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

#pragma once

#include <cstddef>
#include <functional>

namespace hbr {

/// Worker count: HBR_THREADS when set and positive, else hardware concurrency.
/// A thread-local override (see ScopedThreadCount) takes precedence.
std::size_t thread_count();

/// Overrides thread_count() on the current thread for the lifetime of the object.
class ScopedThreadCount {
 public:
  explicit ScopedThreadCount(std::size_t count);
  ~ScopedThreadCount();
  ScopedThreadCount(const ScopedThreadCount&) = delete;
  ScopedThreadCount& operator=(const ScopedThreadCount&) = delete;

 private:
  std::size_t previous_;
};

/// Runs body(i) for i in [0, count) on up to thread_count() workers. Each index
/// runs exactly once; callers write results into slot i so output order never
/// depends on the schedule. The first exception thrown is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace hbr
