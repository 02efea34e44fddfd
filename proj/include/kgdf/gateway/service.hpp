#pragma once

#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include <json.hpp>

#include "kgdf/error.hpp"
#include "kgdf/eval/store.hpp"
#include "kgdf/gateway/config.hpp"

namespace httplib {
class Server;
}

namespace kgdf::gateway {

// HTTP status for an error code: 422 validation, 404 unknown ids, 409
// conflicts, 401/403 auth, 503 backend, 500 otherwise.
int http_status(Errc code) noexcept;
nlohmann::ordered_json error_body(Errc code, const std::string& message);

// JSON API over one campaign:
//   GET  /api/tasks/next?evaluator=ID   GET /api/tasks/{id}
//   POST /api/ratings {task_id, evaluator, s1, s2}
//   GET  /api/stats                      GET /api/progress?evaluator=ID
//   POST /api/generate {scenario_file}   (operator token)
//   GET  /api/annotations/{response_id}
// Every route needs `Authorization: Bearer <auth_token>` when a token is
// configured.
class Service {
 public:
  // Checks the data directory (DataDirUnwritable) and loads the campaign
  // (InvalidConfig when it does not exist, CorruptFile when it is damaged).
  explicit Service(ServiceConfig config, bool offline = false);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  // Binds the configured address (port 0 picks a free one). PortInUse when
  // that fails.
  void bind();
  // Serves on a background thread; bind() first.
  void start();
  // Serves on the calling thread until stop(); binds if needed.
  void run();
  void stop();

  int port() const noexcept { return bound_port_; }
  eval::CampaignStore& store() noexcept { return *store_; }

 private:
  void routes();

  ServiceConfig config_;
  bool offline_;
  std::unique_ptr<eval::CampaignStore> store_;
  std::unique_ptr<httplib::Server> server_;
  std::mutex generate_mutex_;
  std::jthread thread_;
  int bound_port_ = 0;
};

}  // namespace kgdf::gateway
