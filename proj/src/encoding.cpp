// Copyright 2026 The ltamp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ltamp/encoding.hpp"

#include <openssl/evp.h>

#include "ltamp/error.hpp"

namespace ltamp {

std::string base64_encode(std::span<const std::uint8_t> bytes) {
  std::string out(4 * ((bytes.size() + 2) / 3), '\0');
  const int n = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()),
                                bytes.data(), static_cast<int>(bytes.size()));
  out.resize(static_cast<std::size_t>(n));
  return out;
}

std::vector<std::uint8_t> base64_decode(const std::string& text) {
  if (text.size() % 4 != 0) throw Error(ErrorCode::kIo, "malformed base64");
  std::vector<std::uint8_t> out(3 * (text.size() / 4));
  const int n = EVP_DecodeBlock(out.data(),
                                reinterpret_cast<const unsigned char*>(text.data()),
                                static_cast<int>(text.size()));
  if (n < 0) throw Error(ErrorCode::kIo, "malformed base64");
  // EVP_DecodeBlock keeps the bytes encoded by padding.
  std::size_t pad = 0;
  if (!text.empty() && text.back() == '=') ++pad;
  if (text.size() > 1 && text[text.size() - 2] == '=') ++pad;
  out.resize(static_cast<std::size_t>(n) - pad);
  return out;
}

std::string bitset_to_base64(const boost::dynamic_bitset<>& bits) {
  std::vector<std::uint8_t> bytes((bits.size() + 7) / 8, 0);
  for (auto i = bits.find_first(); i != boost::dynamic_bitset<>::npos;
       i = bits.find_next(i)) {
    bytes[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
  }
  return base64_encode(bytes);
}

boost::dynamic_bitset<> bitset_from_base64(const std::string& text,
                                           std::size_t num_bits) {
  const std::vector<std::uint8_t> bytes = base64_decode(text);
  if (bytes.size() != (num_bits + 7) / 8) {
    throw Error(ErrorCode::kIo, "bitset length mismatch");
  }
  boost::dynamic_bitset<> bits(num_bits);
  for (std::size_t i = 0; i < num_bits; ++i) {
    if (bytes[i / 8] & (1u << (i % 8))) bits.set(i);
  }
  return bits;
}

}  // namespace ltamp
