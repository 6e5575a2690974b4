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

// JSON documents for keys, problems and policies, plus policy directories
// with an index manifest.

#ifndef LTAMP_POLICY_IO_HPP_
#define LTAMP_POLICY_IO_HPP_

#include <filesystem>
#include <string>

#include <json.hpp>

#include "ltamp/policy_store.hpp"

namespace ltamp {

nlohmann::json params_to_json(const TemplateParams& p);
TemplateParams params_from_json(const nlohmann::json& j);
nlohmann::json grid_to_json(const UniformGrid& g);
UniformGrid grid_from_json(const nlohmann::json& j);
nlohmann::json problem_to_json(const OwsProblem& p);
OwsProblem problem_from_json(const nlohmann::json& j);
nlohmann::json key_to_json(const PolicyKey& k);
PolicyKey key_from_json(const nlohmann::json& j);

nlohmann::json policy_to_json(const OwsPolicy& p);
OwsPolicy policy_from_json(const nlohmann::json& j);

void save_policy(const std::filesystem::path& path, const OwsPolicy& p);
OwsPolicy load_policy(const std::filesystem::path& path);

// One file per entry named by its key id, plus index.json.
void save_store(const std::filesystem::path& dir, const PolicyStore& store);
PolicyStore load_store(const std::filesystem::path& dir);

}  // namespace ltamp

#endif  // LTAMP_POLICY_IO_HPP_
