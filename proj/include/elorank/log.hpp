// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>

namespace elorank {

/// Writes "warning: <message>" to stderr. Safe to call from any thread.
void log_warning(std::string_view message);

/// Writes an informational line to stderr unless quiet mode is on.
void log_info(std::string_view message);

void set_quiet(bool quiet);

}  // namespace elorank
