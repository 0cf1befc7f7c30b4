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

#ifndef VEINTEX_HTTP_SERVER_H_
#define VEINTEX_HTTP_SERVER_H_

#include <memory>
#include <string>

#include "veintex/service.h"

namespace httplib {
class Server;
}

namespace veintex {

// JSON routes:
//   POST /sessions                       open a session
//   GET  /sessions/{id}/view[?view=V]    effective document as VXD text
//   POST /sessions/{id}/edits            {"version": n, "edit": {...}}
//   GET  /sessions/{id}/analysis?kind=K  veins | centering | comparison
//   GET  /health
class HttpServer {
 public:
  explicit HttpServer(AnnotationService& service);
  ~HttpServer();

  // Port 0 picks a free port. Throws BindFailure.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void listen();
  void stop();

 private:
  AnnotationService& service_;
  std::unique_ptr<httplib::Server> server_;
};

}  // namespace veintex

#endif  // VEINTEX_HTTP_SERVER_H_
