#pragma once

#include <memory>
#include <string>

#include "badger/config.hpp"

namespace badger {

// HTTP+JSON tool server. Endpoints:
//   GET  /health        -> {"status": "ok"}
//   GET  /tools         -> tool manifest with per-tool parameter schemas
//   POST /tools/{name}  -> invoke a tool; body is the request envelope
//   GET  /jobs/{id}     -> poll an asynchronous job
class ToolServer {
 public:
  explicit ToolServer(Config config);
  ~ToolServer();

  // Binds host:port (any free port when port == 0) and serves in a
  // background thread. Returns false when the port cannot be bound.
  bool start();
  int port() const { return port_; }
  void stop();

  // Runs in the foreground until stopped; returns false on bind failure.
  bool serve_forever();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int port_ = 0;
};

}  // namespace badger
