#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "panosplat/gaussians.h"
#include "panosplat/sphere_geom.h"

namespace panosplat {

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 8080;
  int workers = 4;                      // concurrent renders; excess requests queue
  std::filesystem::path static_dir;     // viewer assets mounted at "/", optional
  double near = 0.1;
  double far = 10.0;
  Pose suggested_pose;
  Vec3 background = Vec3::Zero();
};

struct HttpReply {
  int status = 200;
  std::string content_type;
  std::string body;
};

/// Request handling over an immutable splat set, independent of the transport.
class RenderService {
 public:
  RenderService(SplatSet splats, ServeOptions options);

  /// GET /api/meta: {splat_count, near, far, suggested_pose: [16]}.
  HttpReply meta() const;
  /// POST /api/render: {"c2w": [16], "width": int, "mode": "erp"|"pinhole", "fov_deg": float?}.
  /// Replies image/png, or a JSON {"error"} body with a 4xx status.
  HttpReply render(const std::string& body) const;

  const ServeOptions& options() const { return options_; }

 private:
  SplatSet splats_;
  ServeOptions options_;
};

/// HTTP/1.1 front end. start() binds (throws std::runtime_error when the port is
/// busy) and serves on a background thread until stop().
class HttpServer {
 public:
  explicit HttpServer(std::shared_ptr<const RenderService> service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Returns the bound port (useful with port 0).
  int start();
  /// Blocks until stop() is called from another thread or a signal handler.
  void wait();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace panosplat
