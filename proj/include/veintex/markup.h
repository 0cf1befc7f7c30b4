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

// The VXD document model: a closed eight-tag vocabulary for discourse units
// (seg), reference strings (rs, name) and relational links (link, linkGrp),
// with an id index and case-insensitive id lookup.

#ifndef VEINTEX_MARKUP_H_
#define VEINTEX_MARKUP_H_

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace veintex {

// kText is not part of the vocabulary; it marks a text span child.
enum class Tag { kBody, kDiv, kP, kSeg, kRs, kName, kLink, kLinkGrp, kText };

std::string_view tag_name(Tag tag);
std::optional<Tag> tag_from_name(std::string_view name);

// Segmental elements delimit text; relational ones (link, linkGrp) only point.
inline bool is_relational(Tag tag) {
  return tag == Tag::kLink || tag == Tag::kLinkGrp;
}

// Letters, digits, '-', '.', '_', starting with a letter.
bool is_valid_node_id(std::string_view id);

// A vocabulary element or, when tag == kText, a text span. Attribute names
// are stored lower-case; values verbatim.
struct Element {
  Tag tag = Tag::kBody;
  std::map<std::string, std::string> attributes;
  std::vector<Element> children;
  std::string text;  // kText only

  static Element make(Tag tag, std::map<std::string, std::string> attrs = {});
  static Element make_text(std::string text);

  bool is_text() const { return tag == Tag::kText; }
  const std::string* attr(std::string_view name) const;
  void set_attr(std::string_view name, std::string value);
  std::optional<std::string> id() const;
  // First whitespace-separated token of `type`, case-folded ("coref" for
  // type="COREF PERSON ").
  std::string type_head() const;
  bool is_unit() const;  // seg type="unit"
  bool is_open() const;  // seg type="open"
  // Concatenated text of all descendant text spans.
  std::string text_content() const;

  friend bool operator==(const Element&, const Element&) = default;
};

// Kind of a linkGrp by its type head.
enum class GroupKind { kRelation, kCoref, kBridge, kOther };
GroupKind group_kind(const Element& link_grp);

// An immutable parsed document. Copies share the element tree.
class Document {
 public:
  Document();

  // Builds the id index; throws DuplicateId when two elements share a
  // case-folded id.
  static Document from_root(Element root, std::string source_name = {});

  const Element& root() const { return *root_; }
  const std::string& source_name() const { return source_name_; }

  // Case-insensitive lookup.
  const Element* find(std::string_view id) const;
  // Elements bearing an id, in document order.
  std::span<const Element* const> identified() const { return ordered_; }

  friend bool operator==(const Document& a, const Document& b) {
    return a.root() == b.root();
  }

 private:
  std::shared_ptr<const Element> root_;
  std::vector<const Element*> ordered_;
  std::unordered_map<std::string, const Element*> index_;
  std::string source_name_;
};

struct ParseOptions {
  std::string source_name;
  // Receives non-fatal notes such as discarded ";;" comments.
  std::vector<std::string>* warnings = nullptr;
};

Document parse_document(std::string_view bytes, const ParseOptions& options = {});
std::string serialize_document(const Document& doc);
// Serializes a single element (and subtree) with the same rules.
std::string serialize_element(const Element& element);

const Element* find_by_id(const Document& doc, std::string_view id);

enum class DiagnosticKind { kUnresolvedTarget, kNucleusNotInTargets, kRelationArity };
std::string_view diagnostic_kind_name(DiagnosticKind kind);

struct Diagnostic {
  DiagnosticKind kind;
  std::string id;         // id of the offending link (may be empty)
  std::string attribute;  // "targets" or "nuclei"
  std::string token;      // offending token or count
  std::string message() const;
};

std::vector<Diagnostic> validate_references(const Document& doc);

// Every element of `tag` in document order (depth-first, pre-order).
std::vector<const Element*> collect(const Element& root, Tag tag);

}  // namespace veintex

#endif  // VEINTEX_MARKUP_H_
