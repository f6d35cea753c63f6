// SPDX-License-Identifier: Apache-2.0
#include "elorank/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace elorank {
namespace {

std::mutex g_mu;
std::atomic<bool> g_quiet{false};

}  // namespace

void log_warning(std::string_view message) {
  std::lock_guard lock(g_mu);
  std::cerr << "warning: " << message << '\n';
}

void log_info(std::string_view message) {
  if (g_quiet.load()) return;
  std::lock_guard lock(g_mu);
  std::cerr << message << '\n';
}

void set_quiet(bool quiet) { g_quiet.store(quiet); }

}  // namespace elorank
