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

#ifndef LTAMP_ENCODING_HPP_
#define LTAMP_ENCODING_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace ltamp {

std::string base64_encode(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> base64_decode(const std::string& text);

// Bit i is bit (i % 8) of byte i / 8.
std::string bitset_to_base64(const boost::dynamic_bitset<>& bits);
boost::dynamic_bitset<> bitset_from_base64(const std::string& text,
                                           std::size_t num_bits);

}  // namespace ltamp

#endif  // LTAMP_ENCODING_HPP_
