#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

namespace patternlab {

inline constexpr std::uint16_t kDefaultServicePort = 8787;
inline constexpr std::size_t kMaxServiceGridCount = 10'000;
inline constexpr std::string_view kModelVersion = "patternlab-1.0.0";

struct HttpReply {
  int status = 200;
  std::string body;  ///< JSON
};

/// Transport-free request handling for the explorer JSON API:
///   GET  /api/presets
///   POST /api/curve        {scenario | preset, grid?, axis?, mc?}
///   POST /api/interpolate  {lambda, grid?, axis?}
/// Errors are {code, message, field?}. Holds no mutable state.
HttpReply handle_request(std::string_view method, std::string_view path, std::string_view body);

/// HTTP front end for handle_request with CORS enabled.
class ExplorerServer {
 public:
  ExplorerServer();
  ~ExplorerServer();
  ExplorerServer(const ExplorerServer&) = delete;
  ExplorerServer& operator=(const ExplorerServer&) = delete;

  /// Binds; port 0 picks a free port. Returns the bound port or throws
  /// std::runtime_error.
  std::uint16_t bind(const std::string& host, std::uint16_t port);
  /// Blocks until stop() is called.
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace patternlab
