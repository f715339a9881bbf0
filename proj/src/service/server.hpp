// Copyright 2026 The Forge Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <memory>
#include <string>

#include "service/generator.hpp"

namespace forge {

inline constexpr const char* kServiceVersion = "0.3.0";

struct HttpResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

// Transport-independent request handling, shared by the HTTP server and tests.
class Api {
 public:
  explicit Api(ServiceConfig config, std::function<void(const std::string&)> log = {});

  HttpResponse generate(const std::string& body);
  HttpResponse models();
  HttpResponse generations();
  HttpResponse file(const std::string& name);
  HttpResponse health();

  // Value for Access-Control-Allow-Origin, empty when the origin is not allowed.
  std::string allowed_origin(const std::string& origin) const;

  Generator& generator() { return generator_; }

 private:
  Generator generator_;
  std::function<void(const std::string&)> log_;
};

HttpResponse error_response(int status, std::string_view code, const std::string& message, bool retriable = false);

class Server {
 public:
  explicit Server(ServiceConfig config, std::function<void(const std::string&)> log = {});
  ~Server();

  // Binds config.host:config.port (0 picks a free port) and returns the port.
  int bind();
  // Blocks until stop().
  void serve();
  void stop();

  Api& api() { return *api_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::unique_ptr<Api> api_;
};

}  // namespace forge
