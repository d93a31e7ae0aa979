#include "wavepalette/service.hpp"

#include <array>
#include <charconv>
#include <cstdint>
#include <iostream>
#include <mutex>
#include <thread>

#include <httplib.h>

#include "wavepalette/error.hpp"
#include "wavepalette/serialize.hpp"

namespace wavepalette {

namespace {

using Params = std::multimap<std::string, std::string>;

std::optional<std::string> param(const Params& params, const std::string& key) {
  const auto it = params.find(key);
  if (it == params.end()) return std::nullopt;
  return it->second;
}

std::string strong_etag(std::string_view cmf_id, const Params& params) {
  std::string key(kEngineVersion);
  key += '|';
  key += cmf_id;
  for (const auto& [k, v] : params) key += "|" + k + "=" + v;
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : key) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::array<char, 17> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + 16, h, 16);
  return "\"" + std::string(buf.data(), ptr) + "\"";
}

HttpReply json_reply(int status, const Json& doc) { return {status, dump_json(doc), {}}; }

HttpReply error_reply(int status, const std::string& message, const std::string& field = {}) {
  Json doc;
  doc["error"] = message;
  if (!field.empty()) doc["field"] = field;
  return json_reply(status, doc);
}

// Maps library exceptions thrown while computing a response.
template <typename Fn>
HttpReply guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const RequestError& e) {
    return error_reply(400, e.what(), e.field());
  } catch (const DomainError& e) {
    return error_reply(400, e.what());
  } catch (const UnsupportedLevelError& e) {
    return error_reply(400, e.what(), "levels");
  } catch (const LadderExhaustedError& e) {
    return error_reply(400, e.what(), "levels");
  } catch (const std::exception&) {
    return error_reply(500, "internal error");
  }
}

}  // namespace

struct Service::Impl {
  ServiceConfig config;
  httplib::Server server;
  mutable std::mutex mutex;
  std::shared_ptr<const PaletteEngine> engine;

  std::shared_ptr<const PaletteEngine> current() const {
    std::lock_guard lock(mutex);
    return engine;
  }
};

Service::Service(ServiceConfig config) : impl_(std::make_unique<Impl>()) {
  impl_->config = std::move(config);
  auto& server = impl_->server;

  if (!impl_->config.cors_origin.empty()) {
    server.set_default_headers({{"Access-Control-Allow-Origin", impl_->config.cors_origin},
                                {"Access-Control-Allow-Methods", "GET, OPTIONS"},
                                {"Access-Control-Allow-Headers", "If-None-Match"}});
  }
  server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  auto write = [](const httplib::Request& req, httplib::Response& res, const HttpReply& reply) {
    if (!reply.etag.empty()) {
      res.set_header("ETag", reply.etag);
      res.set_header("Cache-Control", "public, max-age=3600");
      if (req.get_header_value("If-None-Match") == reply.etag) {
        res.status = 304;
        return;
      }
    }
    res.status = reply.status;
    res.set_content(reply.body, "application/json");
  };

  server.Get("/healthz", [this, write](const httplib::Request& req, httplib::Response& res) {
    write(req, res, healthz());
  });
  server.Get("/api/v1/palette", [this, write](const httplib::Request& req, httplib::Response& res) {
    write(req, res, palette(req.params));
  });
  server.Get("/api/v1/consonance",
             [this, write](const httplib::Request& req, httplib::Response& res) {
               write(req, res, consonance(req.params));
             });

  if (impl_->config.static_dir) server.set_mount_point("/", impl_->config.static_dir->string());

  if (impl_->config.log_requests) {
    server.set_logger([](const httplib::Request& req, const httplib::Response& res) {
      Json line;
      line["method"] = req.method;
      line["path"] = req.path;
      line["status"] = res.status;
      line["remote"] = req.remote_addr;
      std::cerr << line.dump() << "\n";
    });
  }
}

Service::~Service() = default;

void Service::set_engine(std::shared_ptr<const PaletteEngine> engine) {
  std::lock_guard lock(impl_->mutex);
  impl_->engine = std::move(engine);
}

bool Service::ready() const { return impl_->current() != nullptr; }

HttpReply Service::healthz() const {
  Json doc;
  const auto engine = impl_->current();
  doc["status"] = engine ? "ok" : "starting";
  doc["engine_version"] = kEngineVersion;
  if (engine) doc["cmf_dataset"] = engine->table().dataset_id();
  return json_reply(engine ? 200 : 503, doc);
}

HttpReply Service::palette(const Params& params) const {
  const auto engine = impl_->current();
  if (!engine) return error_reply(503, "engine is starting");
  return guarded([&] {
    PaletteQuery q;
    q.color = param(params, "color");
    q.wavelength = param(params, "wavelength");
    q.levels = param(params, "levels");
    q.count = param(params, "count");
    q.mode = param(params, "mode");
    q.space = param(params, "space");
    q.ratios = param(params, "ratios");
    HttpReply reply = json_reply(200, palette_response(*engine, parse_palette_query(q)));
    reply.etag = strong_etag(engine->table().dataset_id(), params);
    return reply;
  });
}

HttpReply Service::consonance(const Params& params) const {
  const auto engine = impl_->current();
  if (!engine) return error_reply(503, "engine is starting");
  return guarded([&] {
    ConsonanceQuery q;
    q.a = param(params, "a");
    q.b = param(params, "b");
    q.domain = param(params, "domain");
    q.step = param(params, "step");
    q.epsilon = param(params, "epsilon");
    HttpReply reply = json_reply(200, consonance_response(parse_consonance_query(q)));
    reply.etag = strong_etag(engine->table().dataset_id(), params);
    return reply;
  });
}

int Service::bind() {
  auto& server = impl_->server;
  if (impl_->config.port == 0) return server.bind_to_any_port(impl_->config.host);
  return server.bind_to_port(impl_->config.host, impl_->config.port) ? impl_->config.port : -1;
}

bool Service::listen() { return impl_->server.listen_after_bind(); }

void Service::stop() { impl_->server.stop(); }

void Service::wait_until_ready() const { impl_->server.wait_until_ready(); }

int run_service(const ServiceConfig& config, const CrossingParams& crossing) {
  Service service(config);
  const int port = service.bind();
  if (port < 0) {
    std::cerr << "cannot bind " << config.host << ":" << config.port << "\n";
    return 1;
  }
  std::cerr << "listening on " << config.host << ":" << port << "\n";

  std::thread loader([&] {
    try {
      service.set_engine(
          std::make_shared<const PaletteEngine>(load_cmf_file(config.cmf_path), crossing));
    } catch (const std::exception& e) {
      std::cerr << "failed to load CMF table: " << e.what() << "\n";
      service.stop();
    }
  });
  const bool ok = service.listen();
  loader.join();
  return ok && service.ready() ? 0 : 1;
}

}  // namespace wavepalette
