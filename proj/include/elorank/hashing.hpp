// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace elorank {

/// Lowercase hex SHA-256 of `data`.
std::string sha256_hex(std::string_view data);

/// First 8 bytes of SHA-256 of `data`, big-endian.
std::uint64_t hash64(std::string_view data);

/// Incremental SHA-256 for hashing several inputs without concatenating them.
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  Sha256& update(std::string_view data);
  std::string hex_digest();

 private:
  void* ctx_;
};

}  // namespace elorank
