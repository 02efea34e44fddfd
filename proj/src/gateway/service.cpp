#include "kgdf/gateway/service.hpp"

#include <httplib.h>

#include "kgdf/eval/stats.hpp"
#include "kgdf/gateway/pipeline.hpp"

namespace kgdf::gateway {

int http_status(Errc code) noexcept {
  switch (code) {
    case Errc::UnknownTask:
    case Errc::NotFound:
      return 404;
    case Errc::DuplicateRating:
    case Errc::DuplicateTask:
    case Errc::NoRatings:
      return 409;
    case Errc::Unauthorized:
      return 401;
    case Errc::Forbidden:
      return 403;
    case Errc::BackendUnavailable:
      return 503;
    case Errc::IoError:
    case Errc::CorruptFile:
    case Errc::DataDirUnwritable:
    case Errc::PortInUse:
    case Errc::InvalidConfig:
      return 500;
    default:
      return 422;
  }
}

nlohmann::ordered_json error_body(Errc code, const std::string& message) {
  return {{"error", {{"code", to_string(code)}, {"message", message}}}};
}

namespace {

void send_json(httplib::Response& res, int status, const nlohmann::ordered_json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, Errc code, const std::string& message) {
  send_json(res, http_status(code), error_body(code, message));
}

template <typename Fn>
httplib::Server::Handler guarded(Fn fn) {
  return [fn](const httplib::Request& req, httplib::Response& res) {
    try {
      fn(req, res);
    } catch (const Error& e) {
      send_error(res, e.code(), e.detail());
    } catch (const std::exception& e) {
      res.status = 500;
      res.set_content(nlohmann::ordered_json{{"error", {{"code", "Internal"}, {"message", e.what()}}}}.dump(),
                      "application/json");
    }
  };
}

std::string bearer(const httplib::Request& req) {
  const auto h = req.get_header_value("Authorization");
  return h.rfind("Bearer ", 0) == 0 ? h.substr(7) : std::string();
}

std::string required_param(const httplib::Request& req, const char* name) {
  if (!req.has_param(name) || req.get_param_value(name).empty())
    throw Error(Errc::InvalidArgument, std::string("query parameter '") + name + "' is required");
  return req.get_param_value(name);
}

nlohmann::json parse_body(const httplib::Request& req) {
  auto j = nlohmann::json::parse(req.body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw Error(Errc::InvalidArgument, "request body must be a JSON object");
  return j;
}

template <typename T>
T field(const nlohmann::json& j, const char* name) {
  if (!j.contains(name)) throw Error(Errc::InvalidArgument, std::string("field '") + name + "' is required");
  const auto& v = j[name];
  if constexpr (std::is_same_v<T, double>) {
    if (!v.is_number()) throw Error(Errc::InvalidArgument, std::string("field '") + name + "' must be a number");
  } else {
    if (!v.is_string()) throw Error(Errc::InvalidArgument, std::string("field '") + name + "' must be a string");
  }
  return v.get<T>();
}

nlohmann::ordered_json progress_json(const std::string& evaluator, const eval::Progress& p) {
  return {{"evaluator", evaluator}, {"rated", p.rated}, {"total", p.total}};
}

void configure_socket(socket_t sock) {
  int yes = 1;
  setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
}

}  // namespace

Service::Service(ServiceConfig config, bool offline)
    : config_(std::move(config)), offline_(offline), server_(std::make_unique<httplib::Server>()) {
  ensure_writable_dir(config_.data_dir);
  if (config_.campaign.empty()) throw Error(Errc::InvalidConfig, "no campaign configured");
  const auto file = campaign_file(config_);
  if (!std::filesystem::exists(file))
    throw Error(Errc::InvalidConfig, "campaign file " + file.string() + " does not exist; run `kgdf campaign create`");
  store_ = std::make_unique<eval::CampaignStore>(file);
  selected_backend(config_, offline_);
  server_->set_socket_options(configure_socket);
  routes();
}

Service::~Service() { stop(); }

void Service::bind() {
  if (bound_port_) return;
  if (config_.port == 0) {
    bound_port_ = server_->bind_to_any_port(config_.host);
    if (bound_port_ <= 0) {
      bound_port_ = 0;
      throw Error(Errc::PortInUse, config_.host + ": no free port");
    }
    return;
  }
  if (!server_->bind_to_port(config_.host, config_.port))
    throw Error(Errc::PortInUse, config_.host + ":" + std::to_string(config_.port) + " is not available");
  bound_port_ = config_.port;
}

void Service::start() {
  bind();
  thread_ = std::jthread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

void Service::run() {
  bind();
  server_->listen_after_bind();
}

void Service::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

void Service::routes() {
  auto& s = *server_;
  if (!config_.cors_origin.empty())
    s.set_default_headers({{"Access-Control-Allow-Origin", config_.cors_origin},
                           {"Access-Control-Allow-Headers", "Authorization, Content-Type"},
                           {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                           {"Vary", "Origin"}});

  s.set_pre_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
    if (req.method == "OPTIONS" || config_.auth_token.empty()) return httplib::Server::HandlerResponse::Unhandled;
    const auto token = bearer(req);
    if (token == config_.auth_token || (!config_.operator_token.empty() && token == config_.operator_token))
      return httplib::Server::HandlerResponse::Unhandled;
    send_error(res, Errc::Unauthorized, "missing or wrong bearer token");
    return httplib::Server::HandlerResponse::Handled;
  });

  s.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  s.Get("/api/tasks/next", guarded([this](const httplib::Request& req, httplib::Response& res) {
          const auto evaluator = required_param(req, "evaluator");
          const auto task = store_->next(evaluator);
          nlohmann::ordered_json body;
          body["done"] = !task;
          body["task"] = task ? eval::to_json(*task) : nlohmann::ordered_json(nullptr);
          body["progress"] = progress_json(evaluator, store_->progress(evaluator));
          send_json(res, 200, body);
        }));

  s.Get(R"(/api/tasks/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
          const auto task = store_->task(req.matches[1]);
          if (!task) throw Error(Errc::UnknownTask, "no task '" + std::string(req.matches[1]) + "'");
          send_json(res, 200, eval::to_json(*task));
        }));

  s.Post("/api/ratings", guarded([this](const httplib::Request& req, httplib::Response& res) {
           const auto j = parse_body(req);
           const auto stored = store_->submit(field<std::string>(j, "task_id"), field<std::string>(j, "evaluator"),
                                              field<double>(j, "s1"), field<double>(j, "s2"));
           send_json(res, 201, {{"rating", eval::to_json(stored)}});
         }));

  s.Get("/api/stats", guarded([this](const httplib::Request&, httplib::Response& res) {
          send_json(res, 200, eval::to_json(eval::compute_stats(store_->snapshot())));
        }));

  s.Get("/api/progress", guarded([this](const httplib::Request& req, httplib::Response& res) {
          const auto evaluator = required_param(req, "evaluator");
          send_json(res, 200, progress_json(evaluator, store_->progress(evaluator)));
        }));

  s.Post("/api/generate", guarded([this](const httplib::Request& req, httplib::Response& res) {
           if (config_.operator_token.empty()) throw Error(Errc::Forbidden, "generation is disabled");
           if (bearer(req) != config_.operator_token) throw Error(Errc::Forbidden, "operator token required");
           const auto j = parse_body(req);
           std::filesystem::path file = field<std::string>(j, "scenario_file");
           if (file.is_relative()) file = config_.data_dir / file;
           if (!std::filesystem::is_regular_file(file))
             throw Error(Errc::NotFound, "scenario file " + file.string() + " not found");
           std::lock_guard lock(generate_mutex_);
           auto backend = gen::make_backend(selected_backend(config_, offline_));
           const auto run_id = file.stem().string();
           const auto report = run_pipeline(config_, file, run_id, *backend);
           send_json(res, 200, {{"run", run_id}, {"ok", report.ok()}, {"report", to_json(report)}});
         }));

  s.Get(R"(/api/annotations/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
          const std::string id = req.matches[1];
          auto found = find_annotation(runs_dir(config_), id);
          if (found.is_null()) throw Error(Errc::NotFound, "no annotation for response '" + id + "'");
          send_json(res, 200, found);
        }));
}

}  // namespace kgdf::gateway
