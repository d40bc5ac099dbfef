#include "panosplat/server.h"

#include <gtest/gtest.h>

#include "httplib.h"
#include "json.hpp"
#include "panosplat/image_io.h"
#include "panosplat/renderer.h"

namespace panosplat {
namespace {

using nlohmann::json;

SplatSet small_shell() {
  const ErpGrid g(32, 16);
  return decode_splats(ErpImage(g, 3, 0.7f), {DepthMap(g, 2.0f), ErpImage(g, 1, 1.0f)}, Pose());
}

ServeOptions options() {
  ServeOptions o;
  o.port = 0;
  o.workers = 2;
  o.near = 0.2;
  o.far = 7.0;
  o.suggested_pose = Pose::from_translation({0.1, 0.2, 0.3});
  return o;
}

std::string render_body(const std::string& mode, int width, double tx = 0.0) {
  json c2w = json::array({1, 0, 0, tx, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1});
  return json{{"c2w", c2w}, {"width", width}, {"mode", mode}, {"fov_deg", 70.0}}.dump();
}

std::string error_of(const HttpReply& r) { return json::parse(r.body).at("error").get<std::string>(); }

TEST(RenderService, Meta) {
  const RenderService svc(small_shell(), options());
  const HttpReply r = svc.meta();
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(r.content_type, "application/json");
  const json j = json::parse(r.body);
  EXPECT_EQ(j.at("splat_count").get<int>(), 512);
  EXPECT_EQ(j.at("near").get<double>(), 0.2);
  EXPECT_EQ(j.at("far").get<double>(), 7.0);
  const auto m = j.at("suggested_pose").get<std::vector<double>>();
  ASSERT_EQ(m.size(), 16u);
  EXPECT_EQ(m[3], 0.1);
  EXPECT_EQ(m[7], 0.2);
  EXPECT_EQ(m[11], 0.3);
  EXPECT_EQ(m[15], 1.0);
}

TEST(RenderService, RendersMatchLibraryOutput) {
  const SplatSet s = small_shell();
  const RenderService svc(s, options());
  const HttpReply erp = svc.render(render_body("erp", 64, 0.2));
  ASSERT_EQ(erp.status, 200);
  EXPECT_EQ(erp.content_type, "image/png");
  const auto expect = encode_png(render_panorama(s, Pose::from_translation({0.2, 0, 0}), ErpGrid(64, 32), Vec3::Zero()).image);
  EXPECT_EQ(erp.body, std::string(expect.begin(), expect.end()));

  const HttpReply pin = svc.render(render_body("pinhole", 40));
  ASSERT_EQ(pin.status, 200);
  const auto pexpect = encode_png(render_pinhole(s, Pose(), 40, 70.0, Vec3::Zero()).color_raster());
  EXPECT_EQ(pin.body, std::string(pexpect.begin(), pexpect.end()));
}

TEST(RenderService, BadRequestsAre400) {
  const RenderService svc(small_shell(), options());
  for (const std::string& body :
       {std::string("{"), std::string("[]"), std::string(R"({"width": 64, "mode": "erp"})"),
        std::string(R"({"c2w": [1,0,0], "width": 64, "mode": "erp"})"), render_body("erp", 30),
        render_body("erp", 0), render_body("pinhole", 5000), render_body("fisheye", 64)}) {
    const HttpReply r = svc.render(body);
    EXPECT_EQ(r.status, 400) << body;
    EXPECT_EQ(r.content_type, "application/json");
    EXPECT_FALSE(error_of(r).empty());
  }
  json bad = json::parse(render_body("erp", 64));
  bad["c2w"][0] = 2.0;
  const HttpReply r = svc.render(bad.dump());
  EXPECT_EQ(r.status, 400);
  EXPECT_NE(error_of(r).find("orthonormal"), std::string::npos);
  json fov = json::parse(render_body("pinhole", 64));
  fov["fov_deg"] = 180.0;
  EXPECT_EQ(svc.render(fov.dump()).status, 400);
}

TEST(HttpServer, ServesOverHttp) {
  auto svc = std::make_shared<const RenderService>(small_shell(), options());
  HttpServer server(svc);
  const int port = server.start();
  ASSERT_GT(port, 0);
  httplib::Client cli("127.0.0.1", port);
  const auto meta = cli.Get("/api/meta");
  ASSERT_TRUE(meta);
  EXPECT_EQ(meta->status, 200);
  EXPECT_EQ(json::parse(meta->body).at("splat_count").get<int>(), 512);
  const auto img = cli.Post("/api/render", render_body("erp", 32), "application/json");
  ASSERT_TRUE(img);
  EXPECT_EQ(img->status, 200);
  EXPECT_EQ(img->get_header_value("Content-Type"), "image/png");
  EXPECT_EQ(img->body, svc->render(render_body("erp", 32)).body);
  const auto bad = cli.Post("/api/render", "nope", "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
  const auto index = cli.Get("/");
  ASSERT_TRUE(index);
  EXPECT_EQ(index->status, 200);
  server.stop();
  server.wait();
}

TEST(HttpServer, BusyPortThrows) {
  auto svc = std::make_shared<const RenderService>(small_shell(), options());
  HttpServer first(svc);
  const int port = first.start();
  ServeOptions o = options();
  o.port = port;
  HttpServer second(std::make_shared<const RenderService>(small_shell(), o));
  try {
    second.start();
    FAIL() << "second bind succeeded";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("busy"), std::string::npos);
  }
  first.stop();
}

}  // namespace
}  // namespace panosplat
