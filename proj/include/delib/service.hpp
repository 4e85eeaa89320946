#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

#include <json.hpp>

#include "delib/engine.hpp"
#include "delib/error.hpp"
#include "delib/store.hpp"

namespace httplib {
class Server;
}

namespace delib {

struct ApiRequest {
  std::string method;  // "GET" or "POST"
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
  std::optional<std::string> participant;  // X-Participant header
};

struct ApiResponse {
  int status = 200;
  nlohmann::json body;  // null for 204

  std::string text() const { return body.is_null() ? std::string() : body.dump(); }
};

/// HTTP status for an engine error code.
int http_status(ErrorCode code);
/// Code reported to clients; internal-only codes collapse into Invalid.
std::string_view api_code(ErrorCode code);

struct ServiceOptions {
  Clock clock = wall_clock();
  bool sync = true;     // fdatasync each appended record
  bool persist = true;  // false keeps everything in memory
  EngineConfig default_config;  // for deliberations created without a config
};

/// Deliberations served over HTTP-shaped requests. Mutations of one
/// deliberation are serialized by its writer lock and appended to its log
/// before they take effect; reads work on the last published state and do
/// not wait for writers.
class Service {
 public:
  explicit Service(std::filesystem::path data_dir, ServiceOptions options = {});
  ~Service();

  ApiResponse handle(const ApiRequest& request);

  /// Routes every request of `server` through handle().
  void mount(httplib::Server& server);

  /// Latest published state; throws NotFound.
  std::shared_ptr<const DeliberationState> state(const DeliberationId& id) const;

 private:
  struct Slot;

  Slot& slot(const DeliberationId& id) const;
  Slot& create_slot(const DeliberationId& id, const EngineConfig& config);

  ApiResponse route(const ApiRequest& request);

  template <class Fn>
  auto write(Slot& s, Fn&& fn);

  std::filesystem::path data_dir_;
  ServiceOptions options_;
  std::optional<Store> store_;
  mutable std::shared_mutex registry_mu_;
  std::map<DeliberationId, std::unique_ptr<Slot>> slots_;
  std::uint64_t next_auto_id_ = 1;
};

}  // namespace delib
