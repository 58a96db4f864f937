// Copyright 2026 The facegen Authors
// SPDX-License-Identifier: Apache-2.0
#include "facegen/hashing.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include <openssl/evp.h>

namespace facegen {

void StableHasher::mix_byte(std::uint8_t byte) {
  state_ ^= byte;
  state_ *= 0x100000001b3ULL;
}

StableHasher& StableHasher::add(std::string_view text) {
  add(static_cast<std::uint64_t>(text.size()));
  for (char ch : text) mix_byte(static_cast<std::uint8_t>(ch));
  return *this;
}

StableHasher& StableHasher::add(std::uint64_t value) {
  for (int i = 0; i < 8; ++i) mix_byte(static_cast<std::uint8_t>(value >> (8 * i)));
  return *this;
}

StableHasher& StableHasher::add(std::int64_t value) { return add(static_cast<std::uint64_t>(value)); }

StableHasher& StableHasher::add(double value) { return add(std::bit_cast<std::uint64_t>(value)); }

std::uint64_t StableHasher::digest() const {
  std::uint64_t z = state_ + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct Sha256::Impl {
  EVP_MD_CTX* ctx = nullptr;
};

Sha256::Sha256() : impl_(new Impl) {
  impl_->ctx = EVP_MD_CTX_new();
  if (impl_->ctx == nullptr || EVP_DigestInit_ex(impl_->ctx, EVP_sha256(), nullptr) != 1) {
    EVP_MD_CTX_free(impl_->ctx);
    delete impl_;
    throw std::runtime_error("sha256: cannot initialise digest context");
  }
}

Sha256::~Sha256() {
  EVP_MD_CTX_free(impl_->ctx);
  delete impl_;
}

void Sha256::update(std::span<const std::uint8_t> bytes) {
  if (EVP_DigestUpdate(impl_->ctx, bytes.data(), bytes.size()) != 1)
    throw std::runtime_error("sha256: update failed");
}

void Sha256::update(std::string_view text) {
  update(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::string Sha256::hex_digest() {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_DigestFinal_ex(impl_->ctx, digest.data(), &length) != 1)
    throw std::runtime_error("sha256: finalise failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

std::string sha256_hex(std::span<const std::uint8_t> bytes) {
  Sha256 sha;
  sha.update(bytes);
  return sha.hex_digest();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  Sha256 sha;
  std::array<char, 1 << 16> buffer{};
  while (in) {
    in.read(buffer.data(), buffer.size());
    const auto got = static_cast<std::size_t>(in.gcount());
    if (got > 0) sha.update(std::span(reinterpret_cast<const std::uint8_t*>(buffer.data()), got));
  }
  return sha.hex_digest();
}

}  // namespace facegen
