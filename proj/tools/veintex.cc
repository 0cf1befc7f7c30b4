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

// Command line front end.
//
//   veintex validate PATH...
//   veintex analyze --hub F... [--views F...] --out DIR [--format csv|text]
//                   [--weights continuation=4,no-cb=0]
//   veintex serve --hub F [--views F...] [--host H] --port N

#include <csignal>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "veintex/error.h"
#include "veintex/http_server.h"
#include "veintex/pipeline.h"
#include "veintex/service.h"
#include "veintex/text.h"

namespace fs = std::filesystem;
using namespace veintex;

namespace {

// Exit codes of `validate`, in the order checks run.
enum Exit { kOk = 0, kParse = 1, kReference = 2, kGraph = 3, kTree = 4 };

bool is_parse_error(ErrorCode c) {
  return c == ErrorCode::kMalformedInput || c == ErrorCode::kUnknownTag ||
         c == ErrorCode::kDuplicateId || c == ErrorCode::kIo;
}

bool is_tree_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::kMultipleRoots:
    case ErrorCode::kNoRoot:
    case ErrorCode::kTargetReuse:
    case ErrorCode::kNonBinaryLink:
    case ErrorCode::kEmptyNuclei:
    case ErrorCode::kNonContiguousSpan:
    case ErrorCode::kUnknownTarget:
      return true;
    default:
      return false;
  }
}

bool has_relation_links(const Document& doc) { return !collect_relation_links(doc).empty(); }

class Validator {
 public:
  int run(const std::vector<std::string>& paths) {
    std::vector<fs::path> manifests, documents;
    for (const std::string& p : paths) {
      (iequals(fs::path(p).extension().string(), ".vxv") ? manifests : documents).push_back(p);
    }
    std::set<fs::path> payloads;
    std::vector<ViewSource> views;
    std::optional<HubSource> hub;
    for (const fs::path& m : manifests) {
      try {
        ViewSource src = load_view(m);
        payloads.insert(fs::weakly_canonical(m.parent_path() / src.manifest.payload));
        if (src.manifest.parents.empty()) {
          if (hub) throw Error(ErrorCode::kDuplicateViewId, m.string() + ": a second hub manifest");
          hub = HubSource{src.payload, src.manifest.view};
        } else {
          views.push_back(std::move(src));
        }
      } catch (const Error& e) {
        fail(e, is_parse_error(e.code()) ? kParse : kGraph);
      }
    }
    for (const fs::path& d : documents) {
      if (payloads.count(fs::weakly_canonical(d))) continue;  // checked through its manifest
      try {
        ParseOptions opts;
        opts.source_name = d.string();
        check_document(d.string(), parse_document(read_file(d), opts));
      } catch (const Error& e) {
        fail(e, kParse);
      }
    }
    if (!manifests.empty() && code_ == kOk) check_graph(std::move(hub), std::move(views));
    return code_;
  }

 private:
  void fail(const Error& e, Exit code) {
    std::cerr << e.what() << "\n";
    if (code_ == kOk) code_ = code;
  }

  void check_document(const std::string& where, const Document& doc) {
    for (const Diagnostic& d : validate_references(doc)) {
      std::cerr << where << ": " << d.message() << "\n";
      if (code_ == kOk) code_ = kReference;
    }
    if (!has_relation_links(doc)) return;
    try {
      DiscourseTree tree = build_tree(collect_units(doc), collect_relation_links(doc));
      for (const TreeDiagnostic& d : validate_tree(tree)) {
        std::cerr << where << ": " << d.message() << "\n";
        if (code_ == kOk) code_ = kTree;
      }
    } catch (const Error& e) {
      fail(Error(e.code(), where + ": " + e.detail()), is_tree_error(e.code()) ? kTree : kGraph);
    }
  }

  void check_graph(std::optional<HubSource> hub, std::vector<ViewSource> views) {
    if (!hub) {
      fail(Error(ErrorCode::kUnknownParent, "no manifest without parents (the hub) was given"),
           kGraph);
      return;
    }
    try {
      ViewGraph graph = assemble_graph(std::move(hub->document), hub->view_id, std::move(views));
      for (const std::string& id : graph.view_ids()) {
        check_document("view " + id, graph.compose_effective(id));
      }
    } catch (const Error& e) {
      fail(e, is_parse_error(e.code()) ? kParse : kGraph);
    }
  }

  int code_ = kOk;
};

std::string lower(std::string s) { return fold_case(s); }

// Name used for a document's output directory and report rows.
std::string source_name(const fs::path& hub) {
  if (iequals(hub.extension().string(), ".vxv")) {
    fs::path dir = fs::absolute(hub).parent_path();
    if (!dir.filename().empty()) return dir.filename().string();
  }
  return hub.stem().string();
}

std::vector<fs::path> views_for(const fs::path& hub, const std::vector<std::string>& views,
                                std::size_t hub_count) {
  std::vector<fs::path> out;
  for (const std::string& v : views) {
    fs::path p(v);
    if (fs::weakly_canonical(p) == fs::weakly_canonical(hub)) continue;
    if (hub_count == 1 ||
        fs::weakly_canonical(p).parent_path() == fs::weakly_canonical(hub).parent_path()) {
      out.push_back(p);
    }
  }
  return out;
}

// Writes every view of the graph as a manifest plus payload.
void write_graph(const ViewGraph& graph, const fs::path& dir) {
  for (const std::string& id : graph.view_ids()) {
    const View& v = graph.view(id);
    std::string stem = lower(id);
    write_file(dir / (stem + ".vxd"), serialize_document(v.payload()));
    write_file(dir / (stem + ".vxv"), format_manifest({id, v.parents(), stem + ".vxd"}));
  }
}

std::string opt(const std::optional<std::string>& s) { return s.value_or(""); }

std::string transitions_csv(const Analysis& a) {
  std::ostringstream out;
  out << "Unit,CT context,CT cb,CT transition,CT score,VT context,VT cb,VT transition,VT score\n";
  for (std::size_t i = 0; i < a.ct->transitions.size(); ++i) {
    const TransitionRecord& c = a.ct->transitions[i];
    const TransitionRecord& v = a.vt->transitions[i];
    out << c.to_unit << ',' << opt(c.from_unit) << ',' << opt(c.cb) << ','
        << transition_name(c.kind) << ',' << c.score << ',' << opt(v.from_unit) << ','
        << opt(v.cb) << ',' << transition_name(v.kind) << ',' << v.score << '\n';
  }
  return out.str();
}

std::string reference_labels_csv(const Analysis& a) {
  std::ostringstream out;
  out << "Source,Target,Kind,Name,Class\n";
  for (std::size_t i = 0; i < a.references.links.size(); ++i) {
    const ReferenceLink& l = a.references.links[i];
    out << l.source << ',' << l.target << ','
        << (l.kind == ReferenceKind::kCoref ? "coref" : "bridge") << ',' << l.name << ','
        << reference_class_name(a.classification->labels[i]) << '\n';
  }
  return out.str();
}

struct AnalyzeOptions {
  std::vector<std::string> hubs;
  std::vector<std::string> views;
  std::string out;
  std::string format = "csv";
  std::string weights;
};

int cmd_analyze(const AnalyzeOptions& o) {
  ScoreTable table = parse_weights(o.weights);
  fs::path out(o.out);
  std::vector<ComparisonRow> rows;
  std::ostringstream refs;
  refs << "Source,Direct,Indirect,Inaccessible\n";
  std::set<std::string> names;
  for (const std::string& h : o.hubs) {
    fs::path hub(h);
    std::string name = source_name(hub);
    if (!names.insert(name).second) {
      throw Error(ErrorCode::kInvalidArgument, "two documents named " + name);
    }
    ViewGraph graph = load_graph(hub, views_for(hub, o.views, o.hubs.size()));
    PipelineResult result = run_pipeline(graph, table);
    for (const std::string& w : result.warnings) std::cerr << name << ": warning: " << w << "\n";
    fs::path dir = out / name;
    write_graph(graph, dir);
    const Analysis& a = result.analysis;
    if (a.ct && a.vt) {
      rows.push_back(comparison_report(*a.ct, *a.vt, name));
      write_file(dir / "transitions.csv", transitions_csv(a));
    }
    if (a.classification) {
      const ReferenceCounts& c = a.classification->counts;
      refs << name << ',' << c.direct << ',' << c.indirect << ',' << c.inaccessible << '\n';
      write_file(dir / "references.csv", reference_labels_csv(a));
    }
  }
  if (o.format == "text") {
    write_file(out / "report.txt", comparison_text(rows));
  } else {
    write_file(out / "report.csv", comparison_csv(rows));
  }
  write_file(out / "references.csv", refs.str());
  return 0;
}

HttpServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

int cmd_serve(const std::string& hub, const std::vector<std::string>& views,
              const std::string& host, int port) {
  AnnotationService service;
  std::vector<fs::path> view_paths(views.begin(), views.end());
  ViewGraph graph = load_graph(hub, view_paths);
  PipelineResult result = run_pipeline(graph);
  for (const std::string& w : result.warnings) std::cerr << "warning: " << w << "\n";
  auto session = service.adopt(std::move(graph));

  HttpServer server(service);
  int bound = server.bind(host, port);
  std::cout << "listening on " << host << ":" << bound << " session " << session->id()
            << std::endl;
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  server.listen();
  g_server = nullptr;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"veintex: multi-view discourse annotation and veins analysis"};
  app.require_subcommand(1);

  std::vector<std::string> validate_paths;
  CLI::App* validate = app.add_subcommand("validate", "Check documents and view manifests");
  validate->add_option("paths", validate_paths, ".vxd documents and .vxv manifests")->required();

  AnalyzeOptions ao;
  CLI::App* analyze = app.add_subcommand("analyze", "Compute veins, centering and reports");
  analyze->add_option("--hub", ao.hubs, "Hub document (.vxd) or hub manifest (.vxv)")
      ->required();
  analyze->add_option("--views", ao.views, "View manifests");
  analyze->add_option("--out", ao.out, "Output directory")->required();
  analyze->add_option("--format", ao.format, "Report format")
      ->check(CLI::IsMember({"csv", "text"}));
  analyze->add_option("--weights", ao.weights, "Transition weights, e.g. continuation=4,no-cb=0");

  std::string serve_hub, host = "127.0.0.1";
  std::vector<std::string> serve_views;
  int port = 8080;
  CLI::App* serve = app.add_subcommand("serve", "Serve the annotation API");
  serve->add_option("--hub", serve_hub, "Hub document or manifest")->required();
  serve->add_option("--views", serve_views, "View manifests");
  serve->add_option("--host", host, "Address to bind");
  serve->add_option("--port", port, "Port (0 picks a free one)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*validate) return Validator().run(validate_paths);
    if (*analyze) return cmd_analyze(ao);
    if (*serve) return cmd_serve(serve_hub, serve_views, host, port);
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return e.code() == ErrorCode::kBindFailure ? 5 : 1;
  }
  return 0;
}
