// SPDX-License-Identifier: Apache-2.0
#include "elorank/labels.hpp"

#include "elorank/errors.hpp"

namespace elorank {

std::string_view to_string(Label label) { return label == Label::Harmful ? "harmful" : "benign"; }

Label label_from_string(std::string_view s) {
  if (s == "harmful") return Label::Harmful;
  if (s == "benign") return Label::Benign;
  throw ValidationError("unknown label '" + std::string(s) + "'");
}

}  // namespace elorank
