#include "panosplat/server.h"

#include <cmath>
#include <stdexcept>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "panosplat/image_io.h"
#include "panosplat/renderer.h"

namespace panosplat {

using nlohmann::json;

namespace {

constexpr int kMaxErpWidth = 8192;
constexpr int kMaxPinholeWidth = 4096;

HttpReply error_reply(int status, const std::string& message) {
  return {status, "application/json", json{{"error", message}}.dump()};
}

std::string to_string(const std::vector<unsigned char>& bytes) {
  return std::string(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

const char* kPlaceholderPage =
    "<!doctype html><title>panosplat</title>"
    "<p>No viewer assets were mounted. Start the server with --static-dir to serve the viewer."
    " API: GET /api/meta, POST /api/render.</p>";

}  // namespace

RenderService::RenderService(SplatSet splats, ServeOptions options)
    : splats_(std::move(splats)), options_(std::move(options)) {}

HttpReply RenderService::meta() const {
  const auto pose = options_.suggested_pose.to_row_major();
  json j{{"splat_count", splats_.size()},
         {"near", options_.near},
         {"far", options_.far},
         {"suggested_pose", std::vector<double>(pose.begin(), pose.end())}};
  return {200, "application/json", j.dump()};
}

HttpReply RenderService::render(const std::string& body) const {
  json req;
  try {
    req = json::parse(body);
  } catch (const json::parse_error&) {
    return error_reply(400, "request body is not valid JSON");
  }
  if (!req.is_object()) return error_reply(400, "request body must be a JSON object");

  Pose pose;
  int width = 0;
  std::string mode = "erp";
  double fov = 90.0;
  try {
    const auto c2w = req.at("c2w").get<std::vector<double>>();
    if (c2w.size() != 16) return error_reply(400, "c2w must hold 16 numbers");
    std::array<double, 16> m{};
    std::copy(c2w.begin(), c2w.end(), m.begin());
    pose = Pose::from_row_major(m);
    width = req.at("width").get<int>();
    if (req.contains("mode")) mode = req["mode"].get<std::string>();
    if (req.contains("fov_deg") && !req["fov_deg"].is_null()) fov = req["fov_deg"].get<double>();
  } catch (const json::exception& e) {
    return error_reply(400, std::string("malformed request: ") + e.what());
  } catch (const std::invalid_argument& e) {
    return error_reply(400, e.what());
  }

  try {
    if (mode == "erp") {
      if (width < 8 || width % 4 != 0 || width > kMaxErpWidth) {
        return error_reply(400, "erp width must be a multiple of 4 in [8, 8192]");
      }
      const PanoramaRender r = render_panorama(splats_, pose, ErpGrid(width, width / 2), options_.background);
      return {200, "image/png", to_string(encode_png(r.image))};
    }
    if (mode == "pinhole") {
      if (width < 1 || width > kMaxPinholeWidth) return error_reply(400, "pinhole width must be in [1, 4096]");
      if (!(fov > 0.0 && fov < 180.0)) return error_reply(400, "fov_deg must be in (0, 180)");
      const RenderOutput r = render_pinhole(splats_, pose, width, fov, options_.background);
      return {200, "image/png", to_string(encode_png(r.color_raster()))};
    }
  } catch (const std::exception& e) {
    return error_reply(500, e.what());
  }
  return error_reply(400, "mode must be \"erp\" or \"pinhole\"");
}

struct HttpServer::Impl {
  std::shared_ptr<const RenderService> service;
  httplib::Server server;
  std::thread thread;
};

HttpServer::HttpServer(std::shared_ptr<const RenderService> service) : impl_(std::make_unique<Impl>()) {
  impl_->service = std::move(service);
  const auto& opts = impl_->service->options();
  const int workers = std::max(1, opts.workers);
  impl_->server.new_task_queue = [workers] { return new httplib::ThreadPool(static_cast<size_t>(workers)); };
  impl_->server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  auto svc = impl_->service;
  auto send = [](httplib::Response& res, const HttpReply& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  impl_->server.Get("/api/meta", [svc, send](const httplib::Request&, httplib::Response& res) {
    send(res, svc->meta());
  });
  impl_->server.Post("/api/render", [svc, send](const httplib::Request& req, httplib::Response& res) {
    send(res, svc->render(req.body));
  });
  if (!opts.static_dir.empty()) {
    if (!impl_->server.set_mount_point("/", opts.static_dir.string())) {
      throw std::runtime_error("static directory not found: " + opts.static_dir.string());
    }
  } else {
    impl_->server.Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(kPlaceholderPage, "text/html");
    });
  }
}

HttpServer::~HttpServer() {
  stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

int HttpServer::start() {
  const auto& opts = impl_->service->options();
  int port = opts.port;
  if (port == 0) {
    port = impl_->server.bind_to_any_port(opts.host);
    if (port < 0) throw std::runtime_error("cannot bind " + opts.host);
  } else if (!impl_->server.bind_to_port(opts.host, port)) {
    throw std::runtime_error("cannot bind " + opts.host + ":" + std::to_string(port) + " (port busy?)");
  }
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return port;
}

void HttpServer::wait() {
  if (impl_->thread.joinable()) impl_->thread.join();
}

void HttpServer::stop() { impl_->server.stop(); }

}  // namespace panosplat
