#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "wavepalette/palette.hpp"

namespace wavepalette {

struct ServiceConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::filesystem::path cmf_path;
  std::optional<std::filesystem::path> static_dir;
  std::string cors_origin = "*";  // empty disables the CORS header
  bool log_requests = true;
};

struct HttpReply {
  int status = 200;
  std::string body;
  std::string etag;  // empty when not cacheable
};

/// Stateless JSON API over a shared, immutable PaletteEngine. Until an
/// engine is installed every API route answers 503.
class Service {
 public:
  explicit Service(ServiceConfig config);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  void set_engine(std::shared_ptr<const PaletteEngine> engine);
  bool ready() const;

  // Transport-free handlers; the HTTP routes forward to these.
  HttpReply healthz() const;
  HttpReply palette(const std::multimap<std::string, std::string>& params) const;
  HttpReply consonance(const std::multimap<std::string, std::string>& params) const;

  /// Binds the listening socket; returns the bound port or -1.
  int bind();
  /// Serves until stop(); call after bind().
  bool listen();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Binds, then loads the CMF table in the background so that /healthz
/// reports 503 until the engine is ready. Blocks until the server stops.
int run_service(const ServiceConfig& config, const CrossingParams& crossing);

}  // namespace wavepalette
