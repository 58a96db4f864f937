// Copyright 2026 The facegen Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>

namespace facegen {

/// Platform-stable 64-bit hash (FNV-1a over little-endian encodings with a
/// splitmix64 finalizer). Used wherever a value must be reproducible across
/// runs and machines; std::hash gives no such guarantee.
class StableHasher {
 public:
  StableHasher& add(std::string_view text);
  StableHasher& add(std::uint64_t value);
  StableHasher& add(std::int64_t value);
  StableHasher& add(double value);
  std::uint64_t digest() const;

 private:
  void mix_byte(std::uint8_t byte);

  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

std::string sha256_hex(std::span<const std::uint8_t> bytes);
std::string sha256_file(const std::filesystem::path& path);

/// Incremental SHA-256 for data that is streamed in pieces.
class Sha256 {
 public:
  Sha256();
  ~Sha256();
  Sha256(const Sha256&) = delete;
  Sha256& operator=(const Sha256&) = delete;

  void update(std::span<const std::uint8_t> bytes);
  void update(std::string_view text);
  std::string hex_digest();

 private:
  struct Impl;
  Impl* impl_;
};

}  // namespace facegen
