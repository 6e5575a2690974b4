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

// Binary cache for mode abstractions: magic, little-endian uint32 header
// length, JSON header, uint64 compressed length, zlib-compressed boxes.

#ifndef LTAMP_ABSTRACTION_CACHE_HPP_
#define LTAMP_ABSTRACTION_CACHE_HPP_

#include <filesystem>
#include <memory>

#include "ltamp/abstraction.hpp"

namespace ltamp {

void save_abstraction(const std::filesystem::path& path,
                      const ModeAbstraction& abs);
ModeAbstraction load_abstraction(const std::filesystem::path& path);

// Loads `path` when its header matches grid and spec, otherwise builds the
// abstraction and writes the cache.
std::shared_ptr<const ModeAbstraction> cached_abstraction(
    const std::filesystem::path& path, const UniformGrid& grid,
    const ModeAbstractionSpec& spec);

}  // namespace ltamp

#endif  // LTAMP_ABSTRACTION_CACHE_HPP_
