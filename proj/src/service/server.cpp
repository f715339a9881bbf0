// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#include "service/server.hpp"

#include <algorithm>

#include <httplib.h>

#include "common/error.hpp"

namespace forge {

namespace {

std::string_view content_type_for(std::string_view name) {
  if (name.ends_with(".ply")) return "application/ply";
  if (name.ends_with(".obj")) return "model/obj";
  if (name.ends_with(".stl")) return "model/stl";
  return "application/octet-stream";
}

}  // namespace

HttpResponse error_response(int status, std::string_view code, const std::string& message, bool retriable) {
  const Json body = {{"error", code}, {"message", message}, {"retriable", retriable}};
  return {status, body.dump(), "application/json"};
}

Api::Api(ServiceConfig config, std::function<void(const std::string&)> log)
    : generator_(std::move(config)), log_(std::move(log)) {}

HttpResponse Api::generate(const std::string& body) {
  GenerateRequest request;
  try {
    request = GenerateRequest::from_json(Json::parse(body));
  } catch (const Json::exception& e) {
    return error_response(422, "InvalidRequest", std::string("request body is not valid JSON: ") + e.what());
  } catch (const Error& e) {
    return error_response(422, "InvalidRequest", e.what());
  }
  try {
    const GenerateResult result = generator_.generate(request);
    if (log_) log_("generated " + result.id + " (" + std::to_string(result.triangle_count) + " triangles)");
    return {200, result.to_json().dump(), "application/json"};
  } catch (const Error& e) {
    switch (e.code()) {
      case Errc::UnknownModel: return error_response(404, errc_name(e.code()), e.what());
      case Errc::InvalidArgument: return error_response(422, "InvalidRequest", e.what());
      case Errc::Timeout: return error_response(504, errc_name(e.code()), e.what(), true);
      case Errc::EmptyReconstruction:
        return error_response(500, errc_name(e.code()),
                              std::string(e.what()) + "; the sampled latent has no zero level set, try another seed");
      default:
        if (log_) log_(std::string("generate failed: ") + e.what());
        return error_response(500, errc_name(e.code()), e.what());
    }
  } catch (const std::exception& e) {
    if (log_) log_(std::string("generate failed: ") + e.what());
    return error_response(500, "Internal", e.what());
  }
}

HttpResponse Api::models() {
  std::vector<std::string> warnings;
  Json list = Json::array();
  for (const auto& m : generator_.models().list(&warnings)) list.push_back(m.to_json());
  if (log_)
    for (const auto& w : warnings) log_("skipping checkpoint " + w);
  return {200, list.dump(), "application/json"};
}

HttpResponse Api::generations() {
  Json list = Json::array();
  for (const auto& g : generator_.history()) list.push_back(g.to_json());
  return {200, list.dump(), "application/json"};
}

HttpResponse Api::file(const std::string& name) {
  const auto path = generator_.file_path(name);
  if (!path) return error_response(404, "NotFound", "no generated file '" + name + "'");
  try {
    return {200, read_file(*path), std::string(content_type_for(name))};
  } catch (const Error& e) {
    return error_response(404, "NotFound", e.what());
  }
}

HttpResponse Api::health() {
  const Json body = {{"status", "ok"}, {"version", kServiceVersion}, {"loaded_models", generator_.models().loaded()}};
  return {200, body.dump(), "application/json"};
}

std::string Api::allowed_origin(const std::string& origin) const {
  const auto& allowed = generator_.config().cors_origins;
  if (std::find(allowed.begin(), allowed.end(), "*") != allowed.end()) return "*";
  if (!origin.empty() && std::find(allowed.begin(), allowed.end(), origin) != allowed.end()) return origin;
  return {};
}

struct Server::Impl {
  httplib::Server http;
  ServiceConfig config;
};

Server::Server(ServiceConfig config, std::function<void(const std::string&)> log)
    : impl_(std::make_unique<Impl>()), api_(std::make_unique<Api>(config, std::move(log))) {
  impl_->config = std::move(config);
  auto& http = impl_->http;
  Api* api = api_.get();

  const auto send = [](httplib::Response& res, const HttpResponse& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
  };
  http.set_post_routing_handler([api](const httplib::Request& req, httplib::Response& res) {
    const std::string origin = api->allowed_origin(req.get_header_value("Origin"));
    if (origin.empty()) return;
    res.set_header("Access-Control-Allow-Origin", origin);
    if (origin != "*") res.set_header("Vary", "Origin");
  });
  http.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.set_header("Access-Control-Max-Age", "600");
  });
  http.Post("/api/generate", [api, send](const httplib::Request& req, httplib::Response& res) {
    send(res, api->generate(req.body));
  });
  http.Get("/api/models", [api, send](const httplib::Request&, httplib::Response& res) { send(res, api->models()); });
  http.Get("/api/generations",
           [api, send](const httplib::Request&, httplib::Response& res) { send(res, api->generations()); });
  http.Get("/api/health", [api, send](const httplib::Request&, httplib::Response& res) { send(res, api->health()); });
  http.Get(R"(/files/([^/]+))", [api, send](const httplib::Request& req, httplib::Response& res) {
    send(res, api->file(req.matches[1]));
  });
  http.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (!res.body.empty()) return;
    const HttpResponse r = error_response(res.status, res.status == 404 ? "NotFound" : "HttpError",
                                          "HTTP " + std::to_string(res.status));
    res.set_content(r.body, r.content_type);
  });
}

Server::~Server() { stop(); }

int Server::bind() {
  auto& cfg = impl_->config;
  const int port = cfg.port == 0 ? impl_->http.bind_to_any_port(cfg.host)
                                 : (impl_->http.bind_to_port(cfg.host, cfg.port) ? cfg.port : -1);
  if (port < 0) fail(Errc::Io, "cannot bind " + cfg.host + ":" + std::to_string(cfg.port));
  return port;
}

void Server::serve() { impl_->http.listen_after_bind(); }

void Server::stop() {
  if (impl_) impl_->http.stop();
}

}  // namespace forge
