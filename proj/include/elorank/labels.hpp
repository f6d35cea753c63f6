// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <string_view>

namespace elorank {

enum class Label { Benign, Harmful };

std::string_view to_string(Label label);
/// Accepts exactly "harmful" or "benign".
Label label_from_string(std::string_view s);

using LabelMap = std::map<std::string, Label>;

}  // namespace elorank
