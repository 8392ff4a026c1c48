// SPDX-License-Identifier: Apache-2.0
//
// fssim - frequency-selective SDMA-OFDMA downlink scheduling simulator
// Copyright (C) 2026 The fssim authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "fssim/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>
#include <set>

namespace fssim {

namespace {
std::atomic<bool> g_enabled{true};
std::mutex g_mutex;
std::set<std::string> g_seen;
}  // namespace

void log_warning(const std::string& msg) {
  if (!g_enabled.load()) return;
  std::lock_guard lock(g_mutex);
  if (g_seen.insert(msg).second) std::clog << "warning: " << msg << '\n';
}

bool set_warnings_enabled(bool enabled) { return g_enabled.exchange(enabled); }

}  // namespace fssim
