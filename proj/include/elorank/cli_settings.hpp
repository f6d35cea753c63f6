// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace elorank {

struct SettingSpec {
  std::string key;   // config file key, "section.name"
  std::string flag;  // command-line flag
  std::string help;
  bool is_flag = false;  // boolean switch; a bare flag means true
};

/// All settings in registration order.
std::vector<SettingSpec> setting_specs();

}  // namespace elorank
