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

#include "veintex/markup.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>

#include "veintex/error.h"
#include "veintex/text.h"

namespace veintex {

namespace {

constexpr std::array<std::pair<Tag, std::string_view>, 8> kTagNames = {{
    {Tag::kBody, "body"},
    {Tag::kDiv, "div"},
    {Tag::kP, "p"},
    {Tag::kSeg, "seg"},
    {Tag::kRs, "rs"},
    {Tag::kName, "name"},
    {Tag::kLink, "link"},
    {Tag::kLinkGrp, "linkGrp"},
}};

// Attributes emitted first, in this order; the rest alphabetically.
constexpr std::array<std::string_view, 6> kLeadingAttributes = {
    "type", "id", "subtype", "targets", "nuclei", "key"};

// Containers whose whitespace-only text is layout, not content.
bool is_block(Tag tag) {
  return tag == Tag::kBody || tag == Tag::kDiv || tag == Tag::kLinkGrp;
}

void walk(const Element& e, std::vector<const Element*>& out, Tag tag) {
  if (e.tag == tag) out.push_back(&e);
  for (const Element& c : e.children) walk(c, out, tag);
}

void append_text(const Element& e, std::string& out) {
  if (e.is_text()) {
    out += e.text;
    return;
  }
  for (const Element& c : e.children) append_text(c, out);
}

// Recursive-descent parser for the VXD subset of XML.
class Parser {
 public:
  Parser(std::string_view in, const ParseOptions& options)
      : in_(in), options_(options) {}

  Element parse() {
    if (in_.substr(0, 3) == "\xEF\xBB\xBF") advance(3);
    skip_misc();
    if (at_end() || peek() != '<') fail("expected root element <body>");
    Element root = parse_element(nullptr);
    if (root.tag != Tag::kBody) fail("root element must be <body>");
    skip_misc();
    if (!at_end()) fail("content after the root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::kMalformedInput, where() + ": " + what);
  }

  std::string where() const {
    std::string name = options_.source_name.empty() ? "<input>" : options_.source_name;
    return name + ":" + std::to_string(line_) + ":" + std::to_string(col_);
  }

  bool at_end() const { return pos_ >= in_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < in_.size() ? in_[pos_ + ahead] : '\0';
  }
  bool starts_with(std::string_view s) const {
    return in_.substr(pos_).substr(0, s.size()) == s;
  }
  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < in_.size(); ++i, ++pos_) {
      if (in_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
    }
  }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }

  // Whitespace, comments, processing instructions, doctype.
  void skip_misc() {
    for (;;) {
      skip_ws();
      if (starts_with("<!--")) {
        skip_comment();
      } else if (starts_with("<?")) {
        skip_until("?>");
      } else if (starts_with("<!")) {
        skip_until(">");
      } else {
        return;
      }
    }
  }

  void skip_comment() { skip_until("-->"); }

  void skip_until(std::string_view end) {
    std::size_t found = in_.find(end, pos_);
    if (found == std::string_view::npos) fail("unterminated markup declaration");
    advance(found + end.size() - pos_);
  }

  std::string read_name() {
    std::size_t start = pos_;
    while (!at_end()) {
      char c = peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ||
          c == '.' || c == ':') {
        advance();
      } else {
        break;
      }
    }
    if (pos_ == start) fail("expected a name");
    return std::string(in_.substr(start, pos_ - start));
  }

  std::string decode(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] != '&') {
        out += raw[i];
        continue;
      }
      std::size_t semi = raw.find(';', i);
      if (semi == std::string_view::npos) fail("unterminated character reference");
      std::string_view ref = raw.substr(i + 1, semi - i - 1);
      if (ref == "amp") out += '&';
      else if (ref == "lt") out += '<';
      else if (ref == "gt") out += '>';
      else if (ref == "quot") out += '"';
      else if (ref == "apos") out += '\'';
      else if (!ref.empty() && ref[0] == '#') append_code_point(ref, out);
      else fail("unsupported entity &" + std::string(ref) + ";");
      i = semi;
    }
    return out;
  }

  void append_code_point(std::string_view ref, std::string& out) {
    unsigned long cp = 0;
    try {
      cp = ref.size() > 1 && (ref[1] == 'x' || ref[1] == 'X')
               ? std::stoul(std::string(ref.substr(2)), nullptr, 16)
               : std::stoul(std::string(ref.substr(1)), nullptr, 10);
    } catch (const std::exception&) {
      fail("bad character reference");
    }
    if (cp < 0x80) {
      out += static_cast<char>(cp);
    } else if (cp < 0x800) {
      out += static_cast<char>(0xC0 | (cp >> 6));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
      out += static_cast<char>(0xE0 | (cp >> 12));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x110000) {
      out += static_cast<char>(0xF0 | (cp >> 18));
      out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
      fail("character reference out of range");
    }
  }

  void check_child_allowed(const Element& parent, Tag child) {
    bool ok = true;
    switch (parent.tag) {
      case Tag::kLink:
        ok = false;
        break;
      case Tag::kLinkGrp:
        ok = child == Tag::kLink;
        break;
      case Tag::kSeg:
        if (parent.is_unit()) ok = child == Tag::kRs || child == Tag::kName;
        break;
      case Tag::kRs:
      case Tag::kName:
        ok = child == Tag::kRs || child == Tag::kName;
        break;
      default:
        break;
    }
    if (child == Tag::kBody) ok = false;
    if (!ok) {
      fail("<" + std::string(tag_name(child)) + "> is not allowed inside <" +
           std::string(tag_name(parent.tag)) + ">");
    }
  }

  Element parse_element(const Element* parent) {
    std::string open_where = where();
    advance();  // '<'
    std::string name = read_name();
    std::optional<Tag> tag = tag_from_name(name);
    if (!tag) {
      throw Error(ErrorCode::kUnknownTag, open_where + ": <" + name + ">");
    }
    if (parent) check_child_allowed(*parent, *tag);
    Element e = Element::make(*tag);
    bool self_closed = false;
    for (;;) {
      skip_ws();
      if (at_end()) fail("unclosed start tag <" + name + ">");
      if (peek() == '/' && peek(1) == '>') {
        advance(2);
        self_closed = true;
        break;
      }
      if (peek() == '>') {
        advance();
        break;
      }
      std::string attr = fold_case(read_name());
      skip_ws();
      if (peek() != '=') fail("attribute " + attr + " has no value");
      advance();
      skip_ws();
      char quote = peek();
      if (quote != '"' && quote != '\'') fail("attribute " + attr + " value must be quoted");
      advance();
      std::size_t end = in_.find(quote, pos_);
      if (end == std::string_view::npos) fail("unterminated attribute value");
      std::string value = decode(in_.substr(pos_, end - pos_));
      advance(end - pos_ + 1);
      if (e.attributes.count(attr)) fail("duplicate attribute " + attr);
      e.attributes.emplace(std::move(attr), std::move(value));
    }
    check_attributes(e, open_where);
    if (self_closed) return e;
    if (e.tag == Tag::kLink) {
      // Open-form <link ...>: void unless an explicit </link> follows.
      std::size_t save_pos = pos_, save_line = line_, save_col = col_;
      skip_ws();
      if (starts_with("</")) {
        std::size_t p = pos_;
        advance(2);
        std::string close = read_name();
        skip_ws();
        if (iequals(close, "link") && peek() == '>') {
          advance();
          return e;
        }
        (void)p;
      }
      pos_ = save_pos;
      line_ = save_line;
      col_ = save_col;
      return e;
    }
    parse_content(e, name);
    return e;
  }

  void check_attributes(const Element& e, const std::string& at) {
    if (const std::string* id = e.attr("id")) {
      if (!is_valid_node_id(*id)) fail("invalid id \"" + *id + "\"");
      std::string key = fold_case(*id);
      auto [it, inserted] = id_locations_.emplace(key, at);
      if (!inserted) {
        throw Error(ErrorCode::kDuplicateId,
                    "id " + *id + " at " + it->second + " and " + at);
      }
    }
    if (e.tag != Tag::kLink && e.attr("targets")) {
      fail("segmental element <" + std::string(tag_name(e.tag)) + "> carries targets");
    }
  }

  void parse_content(Element& e, const std::string& open_name) {
    std::string text;
    auto flush = [&] {
      if (text.empty()) return;
      std::string decoded = decode(text);
      text.clear();
      if (e.tag == Tag::kLinkGrp) {
        keep_comment_lines(decoded);
        return;
      }
      if (is_block(e.tag) && is_blank(decoded)) return;
      if (!e.children.empty() && e.children.back().is_text()) {
        e.children.back().text += decoded;
      } else {
        e.children.push_back(Element::make_text(std::move(decoded)));
      }
    };
    for (;;) {
      if (at_end()) fail("unclosed element <" + open_name + ">");
      char c = peek();
      if (c != '<') {
        text += c;
        advance();
        continue;
      }
      if (starts_with("<!--")) {
        skip_comment();
        continue;
      }
      if (starts_with("</")) {
        flush();
        advance(2);
        std::string close = read_name();
        skip_ws();
        if (peek() != '>') fail("malformed end tag </" + close);
        advance();
        if (!iequals(close, tag_name(e.tag)) && !iequals(close, open_name)) {
          fail("end tag </" + close + "> does not match <" + open_name + ">");
        }
        return;
      }
      flush();
      e.children.push_back(parse_element(&e));
    }
  }

  // Text inside a linkGrp: only ";;" comment lines, which are dropped.
  void keep_comment_lines(const std::string& decoded) {
    std::istringstream lines(decoded);
    std::string line;
    while (std::getline(lines, line)) {
      std::string_view t = trim(line);
      if (t.empty()) continue;
      if (t.substr(0, 2) != ";;") fail("text is not allowed inside <linkGrp>");
      if (options_.warnings) {
        options_.warnings->push_back(where() + ": discarded comment \"" +
                                     std::string(t) + "\"");
      }
    }
  }

  std::string_view in_;
  const ParseOptions& options_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  std::unordered_map<std::string, std::string> id_locations_;
};

std::string escape(std::string_view s, bool attribute) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += attribute ? ">" : "&gt;"; break;
      case '"': out += attribute ? "&quot;" : "\""; break;
      default: out += c;
    }
  }
  return out;
}

void write_element(const Element& e, std::string& out) {
  if (e.is_text()) {
    out += escape(e.text, false);
    return;
  }
  out += '<';
  out += tag_name(e.tag);
  auto write_attr = [&](const std::string& name, const std::string& value) {
    out += ' ';
    out += name;
    out += "=\"";
    out += escape(value, true);
    out += '"';
  };
  for (std::string_view lead : kLeadingAttributes) {
    auto it = e.attributes.find(std::string(lead));
    if (it != e.attributes.end()) write_attr(it->first, it->second);
  }
  for (const auto& [name, value] : e.attributes) {
    if (std::find(kLeadingAttributes.begin(), kLeadingAttributes.end(), name) ==
        kLeadingAttributes.end()) {
      write_attr(name, value);
    }
  }
  if (e.tag == Tag::kLink) {
    out += "/>";
    return;
  }
  out += '>';
  bool layout = is_block(e.tag) && !e.children.empty() &&
                std::none_of(e.children.begin(), e.children.end(),
                             [](const Element& c) { return c.is_text(); });
  if (layout) out += '\n';
  for (const Element& c : e.children) {
    write_element(c, out);
    if (layout) out += '\n';
  }
  out += "</";
  out += tag_name(e.tag);
  out += '>';
}

void index_tree(const Element& e, std::vector<const Element*>& ordered,
                std::unordered_map<std::string, const Element*>& index) {
  if (auto id = e.id()) {
    auto [it, inserted] = index.emplace(fold_case(*id), &e);
    if (!inserted) {
      throw Error(ErrorCode::kDuplicateId, "id " + *id + " appears twice");
    }
    ordered.push_back(&e);
  }
  for (const Element& c : e.children) index_tree(c, ordered, index);
}

void check_links(const Element& e, bool in_relation, const Document& doc,
                 std::vector<Diagnostic>& out) {
  if (e.tag == Tag::kLink) {
    std::string id = e.id().value_or("");
    std::vector<std::string> targets;
    if (const std::string* t = e.attr("targets")) targets = split_ws(*t);
    for (const std::string& tok : targets) {
      if (!doc.find(tok)) {
        out.push_back({DiagnosticKind::kUnresolvedTarget, id, "targets", tok});
      }
    }
    if (const std::string* n = e.attr("nuclei")) {
      for (const std::string& tok : split_ws(*n)) {
        if (!doc.find(tok)) {
          out.push_back({DiagnosticKind::kUnresolvedTarget, id, "nuclei", tok});
        } else if (std::none_of(targets.begin(), targets.end(), [&](const std::string& t) {
                     return iequals(t, tok);
                   })) {
          out.push_back({DiagnosticKind::kNucleusNotInTargets, id, "nuclei", tok});
        }
      }
    }
    if (in_relation && targets.size() != 2) {
      out.push_back({DiagnosticKind::kRelationArity, id, "targets",
                     std::to_string(targets.size())});
    }
    return;
  }
  bool relation = in_relation ||
                  (e.tag == Tag::kLinkGrp && group_kind(e) == GroupKind::kRelation);
  for (const Element& c : e.children) check_links(c, relation, doc, out);
}

}  // namespace

std::string_view tag_name(Tag tag) {
  for (const auto& [t, name] : kTagNames) {
    if (t == tag) return name;
  }
  return "#text";
}

std::optional<Tag> tag_from_name(std::string_view name) {
  for (const auto& [t, n] : kTagNames) {
    if (iequals(n, name)) return t;
  }
  return std::nullopt;
}

bool is_valid_node_id(std::string_view id) {
  if (id.empty() || !std::isalpha(static_cast<unsigned char>(id[0]))) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.' ||
           c == '_';
  });
}

Element Element::make(Tag tag, std::map<std::string, std::string> attrs) {
  Element e;
  e.tag = tag;
  e.attributes = std::move(attrs);
  return e;
}

Element Element::make_text(std::string text) {
  Element e;
  e.tag = Tag::kText;
  e.text = std::move(text);
  return e;
}

const std::string* Element::attr(std::string_view name) const {
  auto it = attributes.find(std::string(name));
  return it == attributes.end() ? nullptr : &it->second;
}

void Element::set_attr(std::string_view name, std::string value) {
  attributes[fold_case(name)] = std::move(value);
}

std::optional<std::string> Element::id() const {
  if (const std::string* v = attr("id")) return *v;
  return std::nullopt;
}

std::string Element::type_head() const {
  const std::string* t = attr("type");
  if (!t) return {};
  auto parts = split_ws(*t);
  return parts.empty() ? std::string() : fold_case(parts.front());
}

bool Element::is_unit() const { return tag == Tag::kSeg && type_head() == "unit"; }
bool Element::is_open() const { return tag == Tag::kSeg && type_head() == "open"; }

std::string Element::text_content() const {
  std::string out;
  append_text(*this, out);
  return out;
}

GroupKind group_kind(const Element& link_grp) {
  std::string head = link_grp.type_head();
  if (head == "relation") return GroupKind::kRelation;
  if (head == "coref") return GroupKind::kCoref;
  if (head == "bridge") return GroupKind::kBridge;
  return GroupKind::kOther;
}

Document::Document() : root_(std::make_shared<const Element>(Element::make(Tag::kBody))) {}

Document Document::from_root(Element root, std::string source_name) {
  if (root.tag != Tag::kBody) {
    throw Error(ErrorCode::kMalformedInput, "root element must be <body>");
  }
  Document doc;
  doc.root_ = std::make_shared<const Element>(std::move(root));
  doc.source_name_ = std::move(source_name);
  index_tree(*doc.root_, doc.ordered_, doc.index_);
  return doc;
}

const Element* Document::find(std::string_view id) const {
  auto it = index_.find(fold_case(id));
  return it == index_.end() ? nullptr : it->second;
}

Document parse_document(std::string_view bytes, const ParseOptions& options) {
  Parser parser(bytes, options);
  return Document::from_root(parser.parse(), options.source_name);
}

std::string serialize_element(const Element& element) {
  std::string out;
  write_element(element, out);
  return out;
}

std::string serialize_document(const Document& doc) {
  std::string out = serialize_element(doc.root());
  out += '\n';
  return out;
}

const Element* find_by_id(const Document& doc, std::string_view id) {
  return doc.find(id);
}

std::string_view diagnostic_kind_name(DiagnosticKind kind) {
  switch (kind) {
    case DiagnosticKind::kUnresolvedTarget: return "UnresolvedTarget";
    case DiagnosticKind::kNucleusNotInTargets: return "NucleusNotInTargets";
    case DiagnosticKind::kRelationArity: return "RelationArity";
  }
  return "Unknown";
}

std::string Diagnostic::message() const {
  std::string who = id.empty() ? std::string("link") : "link " + id;
  return std::string(diagnostic_kind_name(kind)) + ": " + who + " " + attribute +
         " \"" + token + "\"";
}

std::vector<Diagnostic> validate_references(const Document& doc) {
  std::vector<Diagnostic> out;
  check_links(doc.root(), false, doc, out);
  return out;
}

std::vector<const Element*> collect(const Element& root, Tag tag) {
  std::vector<const Element*> out;
  walk(root, out, tag);
  return out;
}

}  // namespace veintex
