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

#include "veintex/view_graph.h"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_map>

#include "veintex/error.h"
#include "veintex/text.h"

namespace veintex {

namespace detail {

// Working tree used while materializing: elements keep their composition key
// and hub-text range.
struct WNode {
  std::string key;
  Element el;  // no children; text spans carry their text
  std::size_t start = 0;
  std::size_t end = 0;
  std::vector<WNode> kids;
};

struct Hub {
  std::string view_id;
  Document doc;
  std::string text;
  WNode tree;
};

struct Item {
  enum class Origin { kHub, kRange, kParent, kRoot };
  std::string key;
  Element element;
  Origin origin = Origin::kHub;
  std::size_t start = 0;
  std::size_t end = 0;
  std::string parent;  // kParent: key of the parent element

  bool same_anchor(const Item& o) const {
    return origin == o.origin && start == o.start && end == o.end && parent == o.parent;
  }
};

struct State {
  std::shared_ptr<const Hub> hub;
  std::vector<Item> items;
  std::unordered_map<std::string, std::size_t> index;

  const Item* find(const std::string& key) const {
    auto it = index.find(key);
    return it == index.end() ? nullptr : &items[it->second];
  }
  Item* find(const std::string& key) {
    auto it = index.find(key);
    return it == index.end() ? nullptr : &items[it->second];
  }
  void upsert(Item item) {
    if (Item* existing = find(item.key)) {
      *existing = std::move(item);
      return;
    }
    index.emplace(item.key, items.size());
    items.push_back(std::move(item));
  }
  void erase(const std::string& key) {
    auto it = index.find(key);
    if (it == index.end()) return;
    items.erase(items.begin() + static_cast<std::ptrdiff_t>(it->second));
    reindex();
  }
  void reindex() {
    index.clear();
    for (std::size_t i = 0; i < items.size(); ++i) index.emplace(items[i].key, i);
  }
};

}  // namespace detail

namespace {

using detail::Hub;
using detail::Item;
using detail::State;
using detail::WNode;

Element shallow(const Element& e) {
  Element out = Element::make(e.tag, e.attributes);
  out.text = e.text;
  return out;
}

std::string display(const Item& item) {
  if (auto id = item.element.id()) return *id;
  return item.key;
}

WNode build_hub_tree(const Element& e, std::size_t& pos, std::size_t& counter,
                     const std::string& hub_id, std::vector<Item>& items) {
  WNode node;
  node.el = shallow(e);
  node.start = pos;
  if (e.is_text()) {
    pos += utf8::length(e.text);
    node.end = pos;
    return node;
  }
  auto id = e.id();
  node.key = id ? fold_case(*id) : "#" + hub_id + "/" + std::to_string(counter++);
  std::size_t slot = items.size();
  items.push_back(Item{node.key, shallow(e), Item::Origin::kHub, pos, pos, {}});
  for (const Element& c : e.children) {
    node.kids.push_back(build_hub_tree(c, pos, counter, hub_id, items));
  }
  node.end = pos;
  items[slot].end = pos;
  return node;
}

// Outer-to-inner nesting rank used to break ties between equal ranges.
int nesting_rank(const Element& e) {
  switch (e.tag) {
    case Tag::kBody: return 0;
    case Tag::kDiv: return 1;
    case Tag::kP: return 2;
    case Tag::kSeg: return e.is_unit() ? 5 : e.is_open() ? 4 : 3;
    case Tag::kRs: return 6;
    case Tag::kName: return 7;
    default: return 8;
  }
}

std::vector<WNode> copy_hub(const WNode& h, const State& st) {
  if (h.el.is_text()) return {h};
  std::vector<WNode> kids;
  for (const WNode& k : h.kids) {
    for (WNode& c : copy_hub(k, st)) kids.push_back(std::move(c));
  }
  const Item* item = st.find(h.key);
  // A key re-used by a local addition no longer names the hub element.
  if (!item || item->origin != Item::Origin::kHub) {
    if (is_relational(h.el.tag)) return {};
    return kids;  // unwrap
  }
  WNode node{h.key, item->element, h.start, h.end, std::move(kids)};
  return {std::move(node)};
}

void split_text_at(std::vector<WNode>& kids, std::size_t at) {
  for (std::size_t i = 0; i < kids.size(); ++i) {
    WNode& k = kids[i];
    if (!k.el.is_text() || k.start >= at || at >= k.end) continue;
    std::size_t head = at - k.start;
    WNode tail = k;
    tail.el.text = utf8::substr(k.el.text, head, k.end - at);
    tail.start = at;
    k.el.text = utf8::substr(k.el.text, 0, head);
    k.end = at;
    kids.insert(kids.begin() + static_cast<std::ptrdiff_t>(i) + 1, std::move(tail));
    return;
  }
}

void insert_range(WNode& node, const Item& item) {
  const std::size_t s = item.start, e = item.end;
  for (WNode& c : node.kids) {
    if (c.el.is_text() || is_relational(c.el.tag) || c.start == c.end) continue;
    if (c.start <= s && e <= c.end) {
      bool same = c.start == s && c.end == e;
      if (same && nesting_rank(item.element) < nesting_rank(c.el)) break;
      insert_range(c, item);
      return;
    }
  }
  split_text_at(node.kids, s);
  split_text_at(node.kids, e);
  auto inside = [&](const WNode& k) {
    if (k.start == k.end) return s < k.start && k.start < e;
    return s <= k.start && k.end <= e;
  };
  std::ptrdiff_t first = -1, last = -1;
  for (std::size_t i = 0; i < node.kids.size(); ++i) {
    const WNode& k = node.kids[i];
    if (k.start < k.end && ((k.start < s && s < k.end) || (k.start < e && e < k.end))) {
      throw Error(ErrorCode::kInvalidAnchor,
                  "range " + std::to_string(s) + ".." + std::to_string(e) +
                      " partially overlaps " +
                      (k.key.empty() || k.key[0] == '#' ? std::string(tag_name(k.el.tag))
                                                        : k.key));
    }
    if (inside(k)) {
      if (first < 0) first = static_cast<std::ptrdiff_t>(i);
      last = static_cast<std::ptrdiff_t>(i);
    }
  }
  WNode wrapper{item.key, item.element, s, e, {}};
  if (first < 0) {
    throw Error(ErrorCode::kInvalidAnchor, "range " + std::to_string(s) + ".." +
                                               std::to_string(e) + " covers no text");
  }
  for (std::ptrdiff_t i = first; i <= last; ++i) {
    if (!inside(node.kids[static_cast<std::size_t>(i)])) {
      throw Error(ErrorCode::kInvalidAnchor, "range crosses element boundaries");
    }
  }
  wrapper.kids.assign(std::make_move_iterator(node.kids.begin() + first),
                      std::make_move_iterator(node.kids.begin() + last + 1));
  node.kids.erase(node.kids.begin() + first, node.kids.begin() + last + 1);
  node.kids.insert(node.kids.begin() + first, std::move(wrapper));
}

using ChildMap = std::map<std::string, std::vector<const Item*>>;

WNode build_relational(const Item& item, const ChildMap& by_parent, int depth) {
  if (depth > 64) throw Error(ErrorCode::kInvalidAnchor, "anchor chain too deep");
  WNode node{item.key, item.element, 0, 0, {}};
  if (auto it = by_parent.find(item.key); it != by_parent.end()) {
    for (const Item* c : it->second) {
      node.kids.push_back(build_relational(*c, by_parent, depth + 1));
    }
  }
  return node;
}

void attach_relational(WNode& node, const ChildMap& by_parent) {
  for (WNode& k : node.kids) {
    if (!k.el.is_text()) attach_relational(k, by_parent);
  }
  if (node.key.empty()) return;
  if (auto it = by_parent.find(node.key); it != by_parent.end()) {
    for (const Item* c : it->second) node.kids.push_back(build_relational(*c, by_parent, 0));
  }
}

Element to_element(WNode&& node) {
  Element e = std::move(node.el);
  for (WNode& k : node.kids) {
    Element c = to_element(std::move(k));
    if (c.is_text()) {
      if (c.text.empty()) continue;
      if (!e.children.empty() && e.children.back().is_text()) {
        e.children.back().text += c.text;
        continue;
      }
    }
    e.children.push_back(std::move(c));
  }
  return e;
}

Document materialize(const State& st) {
  std::vector<WNode> roots = copy_hub(st.hub->tree, st);
  if (roots.size() != 1) throw Error(ErrorCode::kCannotDeleteRoot, "body was removed");
  WNode root = std::move(roots.front());
  ChildMap by_parent;
  for (const Item& item : st.items) {
    switch (item.origin) {
      case Item::Origin::kRange:
        insert_range(root, item);
        break;
      case Item::Origin::kParent:
        by_parent[item.parent].push_back(&item);
        break;
      case Item::Origin::kRoot:
        by_parent[""].push_back(&item);
        break;
      case Item::Origin::kHub:
        break;
    }
  }
  attach_relational(root, by_parent);
  if (auto it = by_parent.find(""); it != by_parent.end()) {
    for (const Item* c : it->second) root.kids.push_back(build_relational(*c, by_parent, 0));
  }
  return Document::from_root(to_element(std::move(root)));
}

Item to_item(const Addition& a) {
  Item item;
  item.key = a.key;
  item.element = a.element;
  switch (a.anchor.kind()) {
    case Anchor::Kind::kByCharRange:
      item.origin = Item::Origin::kRange;
      item.start = a.anchor.start();
      item.end = a.anchor.end();
      break;
    case Anchor::Kind::kById:
      item.origin = Item::Origin::kParent;
      item.parent = a.anchor.id().starts_with("#") ? a.anchor.id() : fold_case(a.anchor.id());
      break;
    case Anchor::Kind::kAtRoot:
      item.origin = Item::Origin::kRoot;
      break;
  }
  return item;
}

State unify(const std::vector<const State*>& parents, UnifyPolicy policy) {
  State out;
  out.hub = parents.front()->hub;
  for (const State* p : parents) {
    for (const Item& item : p->items) {
      Item* existing = out.find(item.key);
      if (!existing) {
        out.upsert(item);
        continue;
      }
      if (existing->element.tag != item.element.tag || !existing->same_anchor(item)) {
        throw Error(ErrorCode::kUnifyConflict,
                    display(item) + " differs in element or anchor across parents");
      }
      for (const auto& [name, value] : item.element.attributes) {
        auto it = existing->element.attributes.find(name);
        if (it == existing->element.attributes.end()) {
          existing->element.attributes.emplace(name, value);
        } else if (it->second != value && policy == UnifyPolicy::kStrict) {
          throw Error(ErrorCode::kUnifyConflict, display(item) + " attribute " + name +
                                                     " is \"" + it->second +
                                                     "\" and \"" + value + "\"");
        }
      }
    }
  }
  return out;
}

std::string range_text(const Hub& hub, std::size_t s, std::size_t e) {
  return utf8::substr(hub.text, s, e - s);
}

}  // namespace

// ---------------------------------------------------------------------------
// Anchor

Anchor Anchor::by_id(std::string id) {
  Anchor a;
  a.kind_ = Kind::kById;
  a.id_ = std::move(id);
  return a;
}

Anchor Anchor::by_char_range(std::size_t start, std::size_t end) {
  Anchor a;
  a.kind_ = Kind::kByCharRange;
  a.start_ = start;
  a.end_ = end;
  return a;
}

Anchor Anchor::at_root() { return Anchor(); }

// ---------------------------------------------------------------------------
// View

State View::local_state() const {
  State st = *base_;
  for (const Addition& a : additions_) st.upsert(to_item(a));
  for (const Patch& p : patches_) {
    Item* item = st.find(fold_case(p.id));
    if (!item) throw Error(ErrorCode::kDanglingPatch, "patch on missing element " + p.id);
    if (p.value) {
      item->element.attributes[p.name] = *p.value;
    } else {
      item->element.attributes.erase(p.name);
    }
  }
  for (const std::string& t : tombstones_) {
    std::string key = fold_case(t);
    if (!st.find(key)) throw Error(ErrorCode::kDanglingPatch, "tombstone on missing element " + t);
    st.erase(key);
  }
  return st;
}

Document View::effective() const {
  if (is_hub()) return base_->hub->doc;
  return materialize(local_state());
}

Document View::base() const {
  if (is_hub()) return base_->hub->doc;
  return materialize(*base_);
}

const std::string& View::hub_text() const { return base_->hub->text; }

void View::check_editable() const {
  if (is_hub()) throw Error(ErrorCode::kHubImmutable, "the hub view " + id_ + " cannot be edited");
}

std::string View::next_key() { return "#" + id_ + "/" + std::to_string(key_counter_++); }

void View::set_attribute(std::string_view id, std::string_view name,
                         std::optional<std::string> value) {
  check_editable();
  State st = local_state();
  if (!st.find(fold_case(id))) {
    throw Error(ErrorCode::kDanglingPatch, "no element " + std::string(id) + " in view " + id_);
  }
  std::string attr = fold_case(name);
  if (attr.empty() || attr == "id") {
    throw Error(ErrorCode::kInvalidArgument, "attribute \"" + attr + "\" cannot be patched");
  }
  patches_.push_back(Patch{std::string(id), attr, std::move(value)});
}

void View::add_flattened(const Element& element, const Anchor& anchor,
                         std::vector<Addition>& out) {
  Addition a;
  a.key = element.id() ? fold_case(*element.id()) : next_key();
  a.element = shallow(element);
  a.anchor = anchor;
  out.push_back(a);
  if (element.tag != Tag::kLinkGrp) return;
  for (const Element& c : element.children) {
    if (c.tag != Tag::kLink) {
      throw Error(ErrorCode::kMalformedInput, "linkGrp may only contain links");
    }
    add_flattened(c, Anchor::by_id(a.key), out);
  }
}

void View::add_element(Element element, Anchor anchor) {
  check_editable();
  if (element.is_text() || element.tag == Tag::kBody) {
    throw Error(ErrorCode::kInvalidAnchor, "only vocabulary elements below body can be added");
  }
  const Hub& hub = *base_->hub;
  State st = local_state();
  if (is_relational(element.tag)) {
    if (anchor.kind() == Anchor::Kind::kByCharRange) {
      throw Error(ErrorCode::kInvalidAnchor, "relational elements anchor by id");
    }
    if (anchor.kind() == Anchor::Kind::kById) {
      const Item* parent = st.find(fold_case(anchor.id()));
      if (!parent) throw Error(ErrorCode::kInvalidAnchor, "no anchor element " + anchor.id());
      bool ok = element.tag == Tag::kLink ? parent->element.tag == Tag::kLinkGrp
                                          : !is_relational(parent->element.tag) &&
                                                !parent->element.is_unit();
      if (!ok) {
        throw Error(ErrorCode::kInvalidAnchor,
                    std::string(tag_name(element.tag)) + " cannot be placed in " + anchor.id());
      }
    }
  } else {
    if (anchor.kind() != Anchor::Kind::kByCharRange) {
      throw Error(ErrorCode::kInvalidAnchor, "segmental elements anchor by character range");
    }
    std::size_t len = utf8::length(hub.text);
    if (anchor.start() >= anchor.end() || anchor.end() > len) {
      throw Error(ErrorCode::kInvalidAnchor,
                  "range " + std::to_string(anchor.start()) + ".." +
                      std::to_string(anchor.end()) + " outside hub text of length " +
                      std::to_string(len));
    }
    for (const Element& c : element.children) {
      if (!c.is_text()) {
        throw Error(ErrorCode::kInvalidAnchor, "nested elements must be added separately");
      }
    }
    std::string content = element.text_content();
    if (!content.empty() && content != range_text(hub, anchor.start(), anchor.end())) {
      throw Error(ErrorCode::kInvalidAnchor, "element text does not match the hub range");
    }
  }

  std::size_t saved_counter = key_counter_;
  std::vector<Addition> fresh;
  add_flattened(element, anchor, fresh);
  std::set<std::string> seen;
  for (const Addition& a : fresh) {
    if (a.key.starts_with("#")) continue;
    bool tombstoned = std::any_of(tombstones_.begin(), tombstones_.end(),
                                  [&](const std::string& t) { return fold_case(t) == a.key; });
    if ((st.find(a.key) && !tombstoned) || !seen.insert(a.key).second) {
      key_counter_ = saved_counter;
      throw Error(ErrorCode::kDuplicateId, "id " + *a.element.id() + " already exists");
    }
  }

  auto saved_additions = additions_;
  auto saved_tombstones = tombstones_;
  for (const Addition& a : fresh) {
    std::erase_if(tombstones_, [&](const std::string& t) { return fold_case(t) == a.key; });
    additions_.push_back(a);
  }
  try {
    materialize(local_state());
  } catch (...) {
    additions_ = std::move(saved_additions);
    tombstones_ = std::move(saved_tombstones);
    key_counter_ = saved_counter;
    throw;
  }
}

void View::delete_element(std::string_view id) {
  check_editable();
  std::string key = fold_case(id);
  State st = local_state();
  const Item* item = st.find(key);
  if (!item) {
    throw Error(ErrorCode::kDanglingPatch, "no element " + std::string(id) + " in view " + id_);
  }
  if (item->element.tag == Tag::kBody) {
    throw Error(ErrorCode::kCannotDeleteRoot, "body cannot be deleted");
  }
  std::set<std::string> removed{key};
  bool local = std::any_of(additions_.begin(), additions_.end(),
                           [&](const Addition& a) { return a.key == key; });
  if (local) {
    // Drop the addition and anything anchored beneath it.
    bool grew = true;
    while (grew) {
      grew = false;
      for (const Addition& a : additions_) {
        if (a.anchor.kind() != Anchor::Kind::kById) continue;
        std::string parent = a.anchor.id().starts_with("#") ? a.anchor.id()
                                                            : fold_case(a.anchor.id());
        if (removed.count(parent) && removed.insert(a.key).second) grew = true;
      }
    }
    std::erase_if(additions_, [&](const Addition& a) { return removed.count(a.key) > 0; });
  } else {
    tombstones_.emplace_back(id);
  }
  std::erase_if(patches_, [&](const Patch& p) { return removed.count(fold_case(p.id)) > 0; });
}

Document View::payload() const {
  if (is_hub()) return base_->hub->doc;
  const Hub& hub = *base_->hub;
  std::set<std::string> local_groups;
  for (const Addition& a : additions_) {
    if (a.element.tag == Tag::kLinkGrp) local_groups.insert(a.key);
  }
  auto nested_parent = [&](const Addition& a) -> std::string {
    if (a.anchor.kind() != Anchor::Kind::kById) return {};
    std::string parent =
        a.anchor.id().starts_with("#") ? a.anchor.id() : fold_case(a.anchor.id());
    return local_groups.count(parent) ? parent : std::string();
  };

  Element body = Element::make(Tag::kBody);
  for (const Addition& a : additions_) {
    if (!nested_parent(a).empty()) continue;
    Element e = a.element;
    switch (a.anchor.kind()) {
      case Anchor::Kind::kByCharRange:
        e.set_attr("span", std::to_string(a.anchor.start()) + " " + std::to_string(a.anchor.end()));
        e.children.push_back(
            Element::make_text(range_text(hub, a.anchor.start(), a.anchor.end())));
        break;
      case Anchor::Kind::kById:
        e.set_attr("parent", a.anchor.id());
        break;
      case Anchor::Kind::kAtRoot:
        break;
    }
    if (e.tag == Tag::kLinkGrp) {
      for (const Addition& c : additions_) {
        if (nested_parent(c) == a.key) e.children.push_back(c.element);
      }
    }
    body.children.push_back(std::move(e));
  }
  for (const Patch& p : patches_) {
    Element link = Element::make(Tag::kLink, {{"type", "patch"}, {"targets", p.id}, {"subtype", p.name}});
    if (p.value) link.set_attr("key", *p.value);
    body.children.push_back(std::move(link));
  }
  for (const std::string& t : tombstones_) {
    body.children.push_back(Element::make(Tag::kLink, {{"type", "tombstone"}, {"targets", t}}));
  }
  // Ids of additions may repeat tombstoned ids only across views, never here.
  return Document::from_root(std::move(body), id_);
}

void View::restore(Snapshot s) {
  check_editable();
  additions_ = std::move(s.additions);
  patches_ = std::move(s.patches);
  tombstones_ = std::move(s.tombstones);
  key_counter_ = s.key_counter;
}

void View::load_payload(const Document& payload) {
  check_editable();
  auto saved_additions = additions_;
  auto saved_patches = patches_;
  auto saved_tombstones = tombstones_;
  auto saved_counter = key_counter_;
  additions_.clear();
  patches_.clear();
  tombstones_.clear();
  const Hub& hub = *base_->hub;
  std::size_t len = utf8::length(hub.text);

  std::function<void(const Element&)> add_segmental = [&](const Element& e) {
    const std::string* span = e.attr("span");
    if (!span) {
      throw Error(ErrorCode::kInvalidAnchor,
                  "segmental payload element <" + std::string(tag_name(e.tag)) + "> has no span");
    }
    auto parts = split_ws(*span);
    std::size_t s = 0, end = 0;
    try {
      if (parts.size() != 2) throw std::invalid_argument("span");
      s = std::stoul(parts[0]);
      end = std::stoul(parts[1]);
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidAnchor, "bad span \"" + *span + "\"");
    }
    if (s >= end || end > len) throw Error(ErrorCode::kInvalidAnchor, "span outside hub text");
    if (e.text_content() != range_text(hub, s, end)) {
      throw Error(ErrorCode::kInvalidAnchor, "payload text does not match span " + *span);
    }
    Element copy = shallow(e);
    copy.attributes.erase("span");
    Addition a{copy.id() ? fold_case(*copy.id()) : next_key(), copy,
               Anchor::by_char_range(s, end)};
    additions_.push_back(std::move(a));
    for (const Element& c : e.children) {
      if (!c.is_text()) add_segmental(c);
    }
  };

  try {
    for (const Element& e : payload.root().children) {
      if (e.is_text()) continue;
      std::string type = e.attr("type") ? fold_case(trim(*e.attr("type"))) : std::string();
      if (e.tag == Tag::kLink && (type == "patch" || type == "tombstone")) {
        const std::string* target = e.attr("targets");
        if (!target || split_ws(*target).size() != 1) {
          throw Error(ErrorCode::kMalformedInput, type + " link needs exactly one target");
        }
        std::string id = split_ws(*target).front();
        if (type == "tombstone") {
          tombstones_.push_back(id);
          continue;
        }
        const std::string* name = e.attr("subtype");
        if (!name) throw Error(ErrorCode::kMalformedInput, "patch link needs subtype");
        std::optional<std::string> value;
        if (const std::string* v = e.attr("key")) value = *v;
        patches_.push_back(Patch{id, fold_case(*name), value});
        continue;
      }
      if (is_relational(e.tag)) {
        Element copy = e;
        Anchor anchor = Anchor::at_root();
        if (const std::string* parent = copy.attr("parent")) {
          anchor = Anchor::by_id(*parent);
          copy.attributes.erase("parent");
        }
        add_flattened(copy, anchor, additions_);
      } else {
        add_segmental(e);
      }
    }
    materialize(local_state());
  } catch (...) {
    additions_ = std::move(saved_additions);
    patches_ = std::move(saved_patches);
    tombstones_ = std::move(saved_tombstones);
    key_counter_ = saved_counter;
    throw;
  }
}

// ---------------------------------------------------------------------------
// ViewGraph

ViewGraph::ViewGraph(Document hub_doc, std::string hub_id) : hub_id_(std::move(hub_id)) {
  auto hub = std::make_shared<Hub>();
  hub->view_id = hub_id_;
  hub->doc = hub_doc;
  std::vector<Item> items;
  std::size_t pos = 0, counter = 0;
  hub->tree = build_hub_tree(hub_doc.root(), pos, counter, hub_id_, items);
  hub->text = hub_doc.root().text_content();
  auto state = std::make_shared<State>();
  state->hub = hub;
  state->items = std::move(items);
  state->reindex();

  auto view = std::unique_ptr<View>(new View());
  view->id_ = hub_id_;
  view->base_ = std::move(state);
  views_.emplace(hub_id_, std::move(view));
  order_.push_back(hub_id_);
}

View& ViewGraph::add_view(const std::string& id, const std::vector<std::string>& parents,
                          UnifyPolicy policy) {
  if (std::find(parents.begin(), parents.end(), id) != parents.end()) {
    throw Error(ErrorCode::kCycleDetected, "[" + id + "," + id + "]");
  }
  if (views_.count(id)) throw Error(ErrorCode::kDuplicateViewId, id);
  if (id.empty()) throw Error(ErrorCode::kInvalidArgument, "empty view id");
  if (parents.empty()) {
    throw Error(ErrorCode::kUnknownParent, "view " + id + " needs at least one parent");
  }
  std::vector<std::string> unique;
  for (const std::string& p : parents) {
    if (!views_.count(p)) throw Error(ErrorCode::kUnknownParent, p + " (parent of " + id + ")");
    if (std::find(unique.begin(), unique.end(), p) == unique.end()) unique.push_back(p);
  }
  std::vector<State> states;
  states.reserve(unique.size());
  for (const std::string& p : unique) states.push_back(view(p).local_state());
  std::vector<const State*> ptrs;
  for (const State& s : states) ptrs.push_back(&s);

  auto view = std::unique_ptr<View>(new View());
  view->id_ = id;
  view->parents_ = unique;
  view->base_ = std::make_shared<const State>(unify(ptrs, policy));
  materialize(*view->base_);  // surfaces structural conflicts now
  View& ref = *view;
  views_.emplace(id, std::move(view));
  order_.push_back(id);
  return ref;
}

bool ViewGraph::contains(std::string_view id) const { return views_.find(id) != views_.end(); }

View& ViewGraph::view(std::string_view id) {
  auto it = views_.find(id);
  if (it == views_.end()) throw Error(ErrorCode::kUnknownView, std::string(id));
  return *it->second;
}

const View& ViewGraph::view(std::string_view id) const {
  auto it = views_.find(id);
  if (it == views_.end()) throw Error(ErrorCode::kUnknownView, std::string(id));
  return *it->second;
}

const std::string& ViewGraph::hub_text() const { return view(hub_id_).hub_text(); }

std::map<std::string, std::vector<std::string>> ViewGraph::parent_map() const {
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& [id, v] : views_) out[id] = v->parents();
  return out;
}

void check_acyclic(const std::map<std::string, std::vector<std::string>>& parents_of,
                   const std::string& hub_id) {
  enum Color { kWhite, kGrey, kBlack };
  std::map<std::string, Color> color;
  std::vector<std::string> stack;

  std::function<void(const std::string&)> visit = [&](const std::string& v) {
    color[v] = kGrey;
    stack.push_back(v);
    auto it = parents_of.find(v);
    for (const std::string& p : it->second) {
      if (!parents_of.count(p)) throw Error(ErrorCode::kUnknownParent, p + " (parent of " + v + ")");
      if (color[p] == kGrey) {
        auto from = std::find(stack.begin(), stack.end(), p);
        std::vector<std::string> cycle(from, stack.end());
        cycle.push_back(p);
        throw Error(ErrorCode::kCycleDetected, "[" + join(cycle, ",") + "]");
      }
      if (color[p] == kWhite) visit(p);
    }
    stack.pop_back();
    color[v] = kBlack;
  };

  for (const auto& [id, parents] : parents_of) {
    if (parents.empty() && id != hub_id) {
      throw Error(ErrorCode::kUnknownParent, "view " + id + " does not reach the hub " + hub_id);
    }
  }
  for (const auto& [id, parents] : parents_of) {
    if (color[id] == kWhite) visit(id);
  }
}

void check_acyclic(const ViewGraph& graph) { check_acyclic(graph.parent_map(), graph.hub_id()); }

ViewManifest parse_manifest(std::string_view text) {
  ViewManifest m;
  bool has_view = false, has_payload = false;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto colon = t.find(':');
    if (colon == std::string_view::npos) {
      throw Error(ErrorCode::kMalformedInput, "manifest line without ':' \"" + std::string(t) + "\"");
    }
    std::string key = fold_case(trim(t.substr(0, colon)));
    std::string_view value = trim(t.substr(colon + 1));
    if (key == "view") {
      m.view = std::string(value);
      has_view = !m.view.empty();
    } else if (key == "parents") {
      m.parents = split_ws(value);
    } else if (key == "payload") {
      m.payload = std::string(value);
      has_payload = !m.payload.empty();
    } else {
      throw Error(ErrorCode::kMalformedInput, "unknown manifest field \"" + key + "\"");
    }
  }
  if (!has_view || !has_payload) {
    throw Error(ErrorCode::kMalformedInput, "manifest needs view: and payload: fields");
  }
  return m;
}

std::string format_manifest(const ViewManifest& m) {
  return "view: " + m.view + "\nparents: " + join(m.parents, " ") + "\npayload: " + m.payload + "\n";
}

}  // namespace veintex
