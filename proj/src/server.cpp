#include "badger/server.hpp"

#include <httplib.h>

#include <thread>

#include "badger/tools.hpp"

namespace badger {

namespace {

int http_status_for(const Json& response) {
  const std::string& status = response["status"].get_ref<const std::string&>();
  if (status == "ok") return 200;
  if (status == "accepted") return 202;
  const std::string code = response["error"]["code"].get<std::string>();
  if (code == "unknown_tool" || code == "unknown_session" || code == "unknown_job" ||
      code == "unknown_method" || code == "unresolved_point")
    return 404;
  if (code == "internal") return 500;
  return 400;
}

void write_json(httplib::Response& res, const Json& body, int status) {
  res.status = status;
  res.set_content(body.dump(2) + "\n", "application/json");
}

}  // namespace

struct ToolServer::Impl {
  explicit Impl(Config config) : manager(std::move(config)) {}

  SessionManager manager;
  httplib::Server server;
  std::thread thread;

  void install_routes() {
    server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
      write_json(res, Json{{"status", "ok"}}, 200);
    });

    server.Get("/tools", [](const httplib::Request&, httplib::Response& res) {
      write_json(res, manifest_json(), 200);
    });

    server.Post(R"(/tools/([A-Za-z0-9_\-]+))",
                [this](const httplib::Request& req, httplib::Response& res) {
                  std::string tool = req.matches[1];
                  Json request = Json::object();
                  if (!req.body.empty()) {
                    request = Json::parse(req.body, nullptr, /*allow_exceptions=*/false);
                    if (request.is_discarded()) {
                      write_json(res,
                                 error_response(ErrorCode::ValidationError,
                                                "request body is not valid JSON"),
                                 400);
                      return;
                    }
                  }
                  Json response = dispatch(manager, tool, request);
                  write_json(res, response, http_status_for(response));
                });

    server.Get(R"(/jobs/([A-Za-z0-9_\-]+))",
               [this](const httplib::Request& req, httplib::Response& res) {
                 Json request = Json{{"params", Json{{"job_id", std::string(req.matches[1])}}}};
                 Json response = dispatch(manager, "poll_job", request);
                 write_json(res, response, http_status_for(response));
               });

    server.set_exception_handler(
        [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
          std::string message = "unhandled exception";
          try {
            if (ep) std::rethrow_exception(ep);
          } catch (const std::exception& e) {
            message = e.what();
          } catch (...) {
          }
          write_json(res, error_response(ErrorCode::Internal, message), 500);
        });
  }
};

ToolServer::ToolServer(Config config) : impl_(std::make_unique<Impl>(std::move(config))) {
  impl_->install_routes();
}

ToolServer::~ToolServer() { stop(); }

bool ToolServer::start() {
  const Config& config = impl_->manager.config();
  if (config.port == 0) {
    port_ = impl_->server.bind_to_any_port(config.host);
    if (port_ <= 0) return false;
  } else {
    if (!impl_->server.bind_to_port(config.host, config.port)) return false;
    port_ = config.port;
  }
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return true;
}

void ToolServer::stop() {
  if (impl_ == nullptr) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

bool ToolServer::serve_forever() {
  if (!start()) return false;
  if (impl_->thread.joinable()) impl_->thread.join();
  return true;
}

}  // namespace badger
