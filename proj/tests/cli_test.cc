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

// Runs the command-line tool as a subprocess and checks exit codes and the
// files it writes.

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>

#include "doctest.h"
#include "support/fixtures.h"
#include "veintex/http_server.h"

namespace fs = std::filesystem;
using namespace veintex;
using veintex::testing::data_path;

namespace {

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

int run(const std::string& args) {
  std::string cmd = std::string("'") + VEINTEX_CLI + "' " + args + " >/dev/null 2>&1";
  int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("veintex-cli-" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path write(const std::string& name, const std::string& text) const {
    write_file(path / name, text);
    return path / name;
  }
};

std::string goriot_set() {
  std::string out;
  for (const char* n : {"bd", "u-view", "rs-view", "rl-view", "rel-view"}) {
    out += q(data_path(std::string("goriot/") + n + ".vxv")) + " ";
  }
  return out;
}

}  // namespace

TEST_CASE("validate accepts the fixtures") {
  CHECK(run("validate " + q(data_path("goriot.vxd")) + " " + q(data_path("demo4.vxd"))) == 0);
  CHECK(run("validate " + goriot_set()) == 0);
  // Payload files named next to their manifests are checked only once.
  CHECK(run("validate " + goriot_set() + q(data_path("goriot/u-view.vxd"))) == 0);
}

TEST_CASE("validate exit codes name the first failing stage") {
  TempDir t;
  CHECK(run("validate " + q(t.write("bad.vxd", "<body><seg type=\"unit\">x</body>"))) == 1);
  CHECK(run("validate " + q(t.path / "missing.vxd")) == 1);
  CHECK(run("validate " + q(t.write("dup.vxd", "<body><p><seg type=\"unit\" id=\"U1\">a</seg>"
                                               "<seg type=\"unit\" id=\"u1\">b</seg></p></body>"))) ==
        1);
  CHECK(run("validate " +
            q(t.write("ref.vxd",
                      "<body><p><seg type=\"unit\" id=\"U1\">x</seg></p>"
                      "<linkGrp type=\"coref\"><link targets=\"U1 NOPE\"/></linkGrp></body>"))) ==
        2);
  t.write("hub.vxd", "<body><p>a b</p></body>");
  t.write("a.vxd", "<body/>");
  t.write("hub.vxv", "view: BD\npayload: hub.vxd\n");
  t.write("a.vxv", "view: A\nparents: B\npayload: a.vxd\n");
  t.write("b.vxv", "view: B\nparents: A\npayload: a.vxd\n");
  CHECK(run("validate " + q(t.path / "hub.vxv") + " " + q(t.path / "a.vxv") + " " +
            q(t.path / "b.vxv")) == 3);
  CHECK(run("validate " +
            q(t.write("two.vxd",
                      "<body><p><seg type=\"unit\" id=\"U1\">a</seg><seg type=\"unit\" id=\"U2\">b"
                      "</seg><seg type=\"unit\" id=\"U3\">c</seg></p><linkGrp type=\"relation\">"
                      "<link id=\"L1\" targets=\"U1 U3\" nuclei=\"U1\"/></linkGrp></body>"))) ==
        4);
}

TEST_CASE("analyze writes views and reports") {
  TempDir t;
  fs::path out = t.path / "out";
  std::string views;
  for (const auto& p : testing::goriot_manifests()) views += q(p) + " ";
  REQUIRE(run("analyze --hub " + q(data_path("goriot/bd.vxv")) + " --views " + views +
              "--out " + q(out)) == 0);
  std::string report = read_file(out / "report.csv");
  CHECK(report.find("goriot,9,14,1.56,14,1.56\n") != std::string::npos);
  CHECK(report.find("Total") == std::string::npos);
  CHECK(read_file(out / "references.csv") ==
        "Source,Direct,Indirect,Inaccessible\ngoriot,15,0,0\n");
  for (const char* f : {"bd.vxv", "rel-view.vxd", "veins-view.vxv", "cf-view.vxd", "ct-view.vxd",
                        "vt-view.vxd", "rs-in-u-view.vxd", "transitions.csv", "references.csv"}) {
    CHECK_MESSAGE(fs::exists(out / "goriot" / f), f);
  }
  // The output is itself a valid view set.
  std::string all;
  for (const auto& e : fs::directory_iterator(out / "goriot")) {
    if (e.path().extension() == ".vxv") all += q(e.path()) + " ";
  }
  CHECK(run("validate " + all) == 0);

  SUBCASE("several documents add a total row") {
    fs::path out2 = t.path / "batch";
    CHECK(run("analyze --hub " + q(data_path("goriot.vxd")) + " " +
              q(data_path("goriot/bd.vxv")) + " --views " + views + "--out " + q(out2)) == 1);
    fs::path pere = t.write("pere.vxd", read_file(data_path("goriot.vxd")));
    REQUIRE(run("analyze --hub " + q(pere) + " " +
                q(data_path("goriot/bd.vxv")) + " --views " + views + "--out " + q(out2) +
                " --format text --weights no-cb=1") == 0);
    std::string text = read_file(out2 / "report.txt");
    CHECK(text.find("Total") != std::string::npos);
    CHECK(text.find("2.11") != std::string::npos);
  }
  SUBCASE("documents without references still get veins") {
    fs::path out3 = t.path / "demo";
    REQUIRE(run("analyze --hub " + q(data_path("demo4.vxd")) + " --out " + q(out3)) == 0);
    CHECK(fs::exists(out3 / "demo4" / "veins-view.vxd"));
    CHECK_FALSE(fs::exists(out3 / "demo4" / "ct-view.vxd"));
  }
  SUBCASE("repeated runs write identical files") {
    fs::path again = t.path / "again";
    REQUIRE(run("analyze --hub " + q(data_path("goriot/bd.vxv")) + " --views " + views +
                "--out " + q(again)) == 0);
    for (const auto& e : fs::recursive_directory_iterator(out)) {
      if (!e.is_regular_file()) continue;
      fs::path rel = fs::relative(e.path(), out);
      CAPTURE(rel.string());
      CHECK(read_file(e.path()) == read_file(again / rel));
    }
  }
  CHECK(run("analyze --hub " + q(data_path("goriot.vxd")) + " --out " + q(out) +
            " --weights retaining=-3") == 1);
}

TEST_CASE("serve reports a busy port") {
  AnnotationService svc;
  HttpServer holder(svc);
  int port = holder.bind("127.0.0.1", 0);
  CHECK(run("serve --hub " + q(data_path("goriot.vxd")) + " --port " + std::to_string(port)) ==
        5);
  CHECK(run("serve --hub " + q(data_path("missing.vxd")) + " --port 0") == 1);
}
