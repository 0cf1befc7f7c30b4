// Copyright 2026 The veintex Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "veintex/http_server.h"

#include "httplib.h"
#include "veintex/error.h"

namespace veintex {

namespace {

constexpr const char* kJson = "application/json";

void reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), kJson);
}

void reply_error(httplib::Response& res, const Error& e) {
  reply(res, http_status(e.code()),
        {{"error", std::string(error_code_name(e.code()))}, {"message", e.detail()}});
}

// Runs a handler, turning library errors and bad JSON into error replies.
template <typename F>
void guarded(httplib::Response& res, F&& f) {
  try {
    f();
  } catch (const Error& e) {
    reply_error(res, e);
  } catch (const Json::exception& e) {
    reply_error(res, Error(ErrorCode::kInvalidArgument, std::string("bad JSON: ") + e.what()));
  }
}

}  // namespace

HttpServer::HttpServer(AnnotationService& service)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
  httplib::Server& s = *server_;
  // The library default adds SO_REUSEPORT, which would let a second server
  // share a busy port instead of failing to bind.
  s.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
  });

  s.Get("/health", [](const httplib::Request&, httplib::Response& res) {
    reply(res, 200, {{"status", "ok"}});
  });

  s.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto session = service_.open_session(OpenRequest::from_json(Json::parse(req.body)));
      reply(res, 201, {{"sessionId", session->id()},
                       {"version", session->version()},
                       {"activeView", session->active_view()},
                       {"views", session->view_ids()}});
    });
  });

  s.Get(R"(/sessions/([^/]+)/view)", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto session = service_.session(req.matches[1]);
      std::optional<std::string> view;
      if (req.has_param("view")) view = req.get_param_value("view");
      // Version and text are read under one lock inside the session calls;
      // a concurrent edit can only make the version newer than the text.
      std::int64_t version = session->version();
      std::string text = session->view_text(view);
      reply(res, 200, {{"sessionId", session->id()},
                       {"version", version},
                       {"view", view.value_or(session->active_view())},
                       {"document", text}});
    });
  });

  s.Post(R"(/sessions/([^/]+)/edits)", [this](const httplib::Request& req,
                                               httplib::Response& res) {
    guarded(res, [&] {
      auto session = service_.session(req.matches[1]);
      Json body = Json::parse(req.body);
      if (!body.is_object() || !body.contains("version") || !body["version"].is_number_integer() ||
          !body.contains("edit")) {
        throw Error(ErrorCode::kInvalidArgument, "body must be {\"version\": n, \"edit\": {...}}");
      }
      EditResult r = session->apply_edit(body["version"].get<std::int64_t>(), body["edit"]);
      reply(res, 200, r.to_json());
    });
  });

  s.Get(R"(/sessions/([^/]+)/analysis)", [this](const httplib::Request& req,
                                                 httplib::Response& res) {
    guarded(res, [&] {
      auto session = service_.session(req.matches[1]);
      std::string name = req.has_param("kind") ? req.get_param_value("kind") : "veins";
      auto kind = analysis_kind_from_name(name);
      if (!kind) throw Error(ErrorCode::kInvalidArgument, "unknown analysis kind \"" + name + "\"");
      reply(res, 200, session->analysis(*kind));
    });
  });
}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    int chosen = server_->bind_to_any_port(host);
    if (chosen < 0) throw Error(ErrorCode::kBindFailure, "cannot bind " + host);
    return chosen;
  }
  if (!server_->bind_to_port(host, port)) {
    throw Error(ErrorCode::kBindFailure, "cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void HttpServer::listen() { server_->listen_after_bind(); }

void HttpServer::stop() { server_->stop(); }

}  // namespace veintex
