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
#include "ltamp/ws_server.hpp"

#include <chrono>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include "ltamp/error.hpp"

namespace ltamp {
namespace {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;

constexpr auto kSlice = std::chrono::milliseconds(100);

bool stopped(const ServeOptions& o) {
  return o.stop != nullptr && o.stop->load();
}

// Runs the context until `done`, the idle timeout or a stop request.
// Returns false on timeout or stop.
bool wait(net::io_context& io, const bool& done, const ServeOptions& o) {
  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(o.idle_timeout));
  while (!done) {
    if (stopped(o) || std::chrono::steady_clock::now() >= deadline) return false;
    io.restart();
    io.run_for(kSlice);
  }
  return true;
}

}  // namespace

ServeResult serve(const SessionFactory& make_session, const ServeOptions& options) {
  net::io_context io;
  tcp::acceptor acceptor(io);
  beast::error_code ec;
  const tcp::endpoint ep(net::ip::make_address(options.address, ec), options.port);
  if (ec) throw Error(ErrorCode::kIo, "bad address " + options.address);
  acceptor.open(ep.protocol(), ec);
  if (!ec) acceptor.set_option(net::socket_base::reuse_address(true), ec);
  if (!ec) acceptor.bind(ep, ec);
  if (!ec) acceptor.listen(net::socket_base::max_listen_connections, ec);
  if (ec) {
    throw Error(ErrorCode::kIo, "cannot listen on port " + std::to_string(options.port) +
                                    ": " + ec.message());
  }
  if (options.on_listen) options.on_listen(acceptor.local_endpoint().port());

  ServeResult result;
  while (true) {
    if (options.max_sessions > 0 && result.sessions >= options.max_sessions) {
      result.ended = "max_sessions";
      break;
    }
    tcp::socket socket(io);
    bool accepted = false;
    beast::error_code aec;
    acceptor.async_accept(socket, [&](beast::error_code e) {
      aec = e;
      accepted = true;
    });
    if (!wait(io, accepted, options)) {
      acceptor.cancel();
      io.restart();
      io.poll();
      result.ended = stopped(options) ? "stopped" : "idle_timeout";
      break;
    }
    if (aec) continue;

    websocket::stream<tcp::socket> ws(std::move(socket));
    bool handshake = false;
    beast::error_code hec;
    ws.async_accept([&](beast::error_code e) {
      hec = e;
      handshake = true;
    });
    if (!wait(io, handshake, options) || hec) {
      beast::error_code ignore;
      ws.next_layer().close(ignore);
      ++result.sessions;
      continue;
    }
    ws.text(true);
    Session session = make_session();
    ++result.sessions;
    while (true) {
      beast::flat_buffer buf;
      bool got = false;
      beast::error_code rec;
      ws.async_read(buf, [&](beast::error_code e, std::size_t) {
        rec = e;
        got = true;
      });
      if (!wait(io, got, options)) {
        beast::error_code ignore;
        ws.next_layer().close(ignore);
        io.restart();
        io.poll();
        break;
      }
      if (rec) break;
      ++result.messages;
      const std::string text = beast::buffers_to_string(buf.data());
      std::vector<nlohmann::json> replies;
      try {
        replies = session.handle_text(text);
      } catch (const std::exception& e) {
        replies = {protocol_error(e.what())};
      }
      bool write_failed = false;
      for (const nlohmann::json& r : replies) {
        ws.write(net::buffer(r.dump()), rec);
        if (rec) {
          write_failed = true;
          break;
        }
      }
      if (write_failed) break;
    }
    if (stopped(options)) {
      result.ended = "stopped";
      break;
    }
  }
  return result;
}

}  // namespace ltamp
