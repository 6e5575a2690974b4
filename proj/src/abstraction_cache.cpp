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

#include "ltamp/abstraction_cache.hpp"

#include <zlib.h>

#include <cstdint>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "ltamp/error.hpp"
#include "ltamp/policy_io.hpp"

namespace ltamp {

using nlohmann::json;

namespace {

constexpr char kMagic[8] = {'L', 'T', 'A', 'M', 'P', 'A', 'B', '1'};

json header_of(const UniformGrid& grid, const ModeAbstractionSpec& spec) {
  return {{"grid", grid_to_json(grid)},
          {"params", params_to_json(spec.params)},
          {"controls", spec.controls},
          {"disturbance", {spec.r.dx, spec.r.dvx}},
          {"step", spec.step},
          {"lipschitz", spec.lipschitz},
          {"box_bytes", sizeof(SuccessorBox)}};
}

ModeAbstractionSpec spec_from(const json& h) {
  ModeAbstractionSpec s;
  s.params = params_from_json(h.at("params"));
  s.controls = h.at("controls").get<std::vector<double>>();
  s.r = {h.at("disturbance").at(0).get<double>(), h.at("disturbance").at(1).get<double>()};
  s.step = h.at("step").get<double>();
  s.lipschitz = h.at("lipschitz").get<double>();
  return s;
}

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_uint(std::istream& in, int bytes) {
  unsigned char b[8] = {};
  in.read(reinterpret_cast<char*>(b), bytes);
  if (!in) throw Error(ErrorCode::kIo, "truncated abstraction cache");
  std::uint64_t v = 0;
  for (int i = bytes - 1; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

// Boxes as little-endian int16 quadruples.
std::vector<unsigned char> pack(const std::vector<SuccessorBox>& boxes) {
  std::vector<unsigned char> raw(boxes.size() * 8);
  std::size_t k = 0;
  for (const SuccessorBox& b : boxes) {
    for (std::int16_t v : {b.x_lo, b.x_hi, b.v_lo, b.v_hi}) {
      const auto u = static_cast<std::uint16_t>(v);
      raw[k++] = static_cast<unsigned char>(u & 0xff);
      raw[k++] = static_cast<unsigned char>(u >> 8);
    }
  }
  return raw;
}

std::int16_t i16(const unsigned char* p) {
  return static_cast<std::int16_t>(static_cast<std::uint16_t>(p[0] | (p[1] << 8)));
}

std::vector<SuccessorBox> unpack(const std::vector<unsigned char>& raw) {
  std::vector<SuccessorBox> boxes(raw.size() / 8);
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    const unsigned char* p = raw.data() + 8 * i;
    boxes[i] = {i16(p), i16(p + 2), i16(p + 4), i16(p + 6)};
  }
  return boxes;
}

}  // namespace

void save_abstraction(const std::filesystem::path& path,
                      const ModeAbstraction& abs) {
  const std::string header = header_of(abs.grid(), abs.spec()).dump();
  const std::vector<unsigned char> raw = pack(abs.boxes());
  uLongf zlen = compressBound(raw.size());
  std::vector<unsigned char> z(zlen);
  if (compress2(z.data(), &zlen, raw.data(), raw.size(), Z_BEST_SPEED) != Z_OK) {
    throw Error(ErrorCode::kIo, "zlib compression failed");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(kMagic, sizeof kMagic);
  put_u32(out, static_cast<std::uint32_t>(header.size()));
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  put_u64(out, zlen);
  out.write(reinterpret_cast<const char*>(z.data()), static_cast<std::streamsize>(zlen));
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

namespace {

struct CacheFile {
  json header;
  std::vector<unsigned char> z;
};

CacheFile read_cache(const std::filesystem::path& path, bool with_body) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  char magic[sizeof kMagic];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof kMagic) != 0) {
    throw Error(ErrorCode::kIo, path.string() + " is not an abstraction cache");
  }
  const auto hlen = get_uint(in, 4);
  std::string h(hlen, '\0');
  in.read(h.data(), static_cast<std::streamsize>(hlen));
  if (!in) throw Error(ErrorCode::kIo, "truncated abstraction cache");
  CacheFile f;
  try {
    f.header = json::parse(h);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kIo, std::string("bad cache header: ") + e.what());
  }
  if (with_body) {
    f.z.resize(get_uint(in, 8));
    in.read(reinterpret_cast<char*>(f.z.data()), static_cast<std::streamsize>(f.z.size()));
    if (!in) throw Error(ErrorCode::kIo, "truncated abstraction cache");
  }
  return f;
}

}  // namespace

ModeAbstraction load_abstraction(const std::filesystem::path& path) {
  CacheFile f = read_cache(path, true);
  const UniformGrid grid = grid_from_json(f.header.at("grid"));
  ModeAbstractionSpec spec = spec_from(f.header);
  uLongf n = static_cast<uLongf>(grid.num_cells()) * spec.controls.size() * 8;
  std::vector<unsigned char> raw(n);
  if (uncompress(raw.data(), &n, f.z.data(), f.z.size()) != Z_OK || n != raw.size()) {
    throw Error(ErrorCode::kIo, "corrupt abstraction cache body");
  }
  return ModeAbstraction(grid, std::move(spec), unpack(raw));
}

std::shared_ptr<const ModeAbstraction> cached_abstraction(
    const std::filesystem::path& path, const UniformGrid& grid,
    const ModeAbstractionSpec& spec) {
  if (std::filesystem::exists(path)) {
    try {
      if (read_cache(path, false).header == header_of(grid, spec)) {
        return std::make_shared<const ModeAbstraction>(load_abstraction(path));
      }
    } catch (const Error&) {
      // Stale or broken cache; rebuild below.
    }
  }
  auto abs = std::make_shared<const ModeAbstraction>(grid, spec);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  save_abstraction(path, *abs);
  return abs;
}

}  // namespace ltamp
