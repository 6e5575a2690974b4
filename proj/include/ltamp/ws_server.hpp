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
// WebSocket transport for sessions: one client at a time, text frames
// carrying one JSON message each.

#ifndef LTAMP_WS_SERVER_HPP_
#define LTAMP_WS_SERVER_HPP_

#include <atomic>
#include <functional>
#include <string>

#include "ltamp/session.hpp"

namespace ltamp {

struct ServeOptions {
  std::string address = "127.0.0.1";
  // 0 picks a free port.
  unsigned short port = 8765;
  // Seconds without a connection or a message before giving up.
  double idle_timeout = 30.0;
  // Sessions served before returning; 0 means no limit.
  int max_sessions = 0;
  // Called with the bound port once listening.
  std::function<void(unsigned short)> on_listen;
  // Optional external stop request, checked between waits.
  const std::atomic<bool>* stop = nullptr;
};

struct ServeResult {
  int sessions = 0;
  int messages = 0;
  // "idle_timeout", "max_sessions" or "stopped".
  std::string ended;
};

using SessionFactory = std::function<Session()>;

// Fails with kIo when the port cannot be bound.
ServeResult serve(const SessionFactory& make_session, const ServeOptions& options);

}  // namespace ltamp

#endif  // LTAMP_WS_SERVER_HPP_
