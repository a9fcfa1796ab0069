#include "mpk/tool.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "mpk/errors.hpp"
#include "mpk/snapshot.hpp"

namespace mpk::tool {

namespace {

// Suppresses daemon echo while the tool writes back to the model.
struct SuppressGuard {
  explicit SuppressGuard(bool& flag) : flag_(flag) { flag_ = true; }
  ~SuppressGuard() { flag_ = false; }
  bool& flag_;
};

std::vector<ElementId> refsOf(const Value& v) {
  std::vector<ElementId> out;
  if (v.isRef()) out.push_back(v.asRef());
  if (v.isCollection())
    for (const Value& item : v.items())
      if (item.isRef()) out.push_back(item.asRef());
  return out;
}

std::vector<ElementId> addedRefs(const Value& before, const Value& after) {
  std::vector<ElementId> out;
  for (ElementId e : refsOf(after))
    if (!before.contains(Value::ref(e))) out.push_back(e);
  return out;
}

std::string typeText(const Store& store, ElementId attr) {
  const Value& type = store.getSlot(attr, "type");
  return type.isRef() ? store.name(type.asRef()) : "";
}

}  // namespace

Display Display::textOf(std::string s) {
  Display d;
  d.kind = Kind::Text;
  d.text = std::move(s);
  return d;
}

Display Display::box(std::vector<Display> children) {
  Display d;
  d.kind = Kind::Box;
  d.children = std::move(children);
  return d;
}

Display Display::nameBox(const std::string& name, const std::string& tag) {
  return box({textOf(name), textOf(tag)});
}

Display Display::attBox(const std::string& name, const std::string& type, const std::string& tag) {
  return box({textOf(name), textOf(type), textOf(tag)});
}

nlohmann::ordered_json Display::toJson() const {
  if (kind == Kind::Text) return nlohmann::ordered_json{{"text", text}};
  nlohmann::ordered_json kids = nlohmann::ordered_json::array();
  for (const Display& c : children) kids.push_back(c.toJson());
  return nlohmann::ordered_json{{"box", kids}};
}

Display& Node::nameBox() { return display.children.at(0); }
const Display& Node::nameBox() const { return display.children.at(0); }
int Node::attBoxCount() const { return static_cast<int>(display.children.size()) - 1; }
Display& Node::attBoxAt(int i) { return display.children.at(static_cast<std::size_t>(i) + 1); }
const Display& Node::attBoxAt(int i) const {
  return display.children.at(static_cast<std::size_t>(i) + 1);
}

Node* Diagram::findNode(int id) {
  for (Node& n : nodes)
    if (n.id == id) return &n;
  return nullptr;
}

const Node* Diagram::findNode(int id) const {
  for (const Node& n : nodes)
    if (n.id == id) return &n;
  return nullptr;
}

Edge* Diagram::findEdge(int id) {
  for (Edge& e : edges)
    if (e.id == id) return &e;
  return nullptr;
}

const Edge* Diagram::findEdge(int id) const {
  for (const Edge& e : edges)
    if (e.id == id) return &e;
  return nullptr;
}

std::vector<Violation> checkOneToOne(const std::string& family,
                                     const std::vector<std::pair<long long, long long>>& maplets) {
  std::vector<Violation> out;
  std::set<long long> lefts, rights;
  for (const auto& [l, r] : maplets) {
    if (!lefts.insert(l).second)
      out.push_back({family, "domain value " + std::to_string(l) + " is mapped twice"});
    if (!rights.insert(r).second)
      out.push_back({family, "range value " + std::to_string(r) + " is mapped twice"});
  }
  return out;
}

Tool::Tool(Store& store, ElementId pkg) : store_(store), pkg_(pkg) {
  if (!store_.isKindOf(pkg, builtin::Package))
    fail("NotAPackage", store_.name(pkg) + " is not a package");

  for (ElementId p : store_.allParents(store_.metaPackage(pkg_))) {
    if (!store_.isKindOf(p, builtin::Package)) continue;
    Group g;
    g.name = store_.name(p);
    g.pkg = p;
    for (ElementId c : store_.wideModellingElements(p)) g.buttons.push_back({store_.name(c), c});
    palette_.push_back(std::move(g));
  }

  mapping_.pkg = pkg_;
  for (ElementId cls : store_.modellingElements(pkg_)) addClassNode(cls);

  daemonId_ = store_.addDaemon([this](Store&, const ChangeEvent& ev) {
    ++daemonFires_;
    if (!suppress_) onModelEvent(ev);
  });
}

Tool::~Tool() { store_.removeDaemon(daemonId_); }

ClassBoxMaplet* Tool::mapletForNode(int node) {
  for (ClassBoxMaplet& m : mapping_.classBoxXClasses)
    if (m.node == node) return &m;
  return nullptr;
}

ClassBoxMaplet* Tool::mapletForClass(ElementId cls) {
  for (ClassBoxMaplet& m : mapping_.classBoxXClasses)
    if (m.cls == cls) return &m;
  return nullptr;
}

ElementId Tool::classForButton(const std::string& name) const {
  for (const Group& g : palette_)
    for (const Button& b : g.buttons)
      if (b.name == name) return b.cls;
  fail("UnknownButton", "no palette button named '" + name + "'");
}

ElementId Tool::resolveTypeName(const std::string& name) const {
  for (ElementId e : store_.packageElements(pkg_))
    if (store_.name(e) == name && store_.isKindOf(e, builtin::Class)) return e;
  for (const Group& g : palette_)
    for (ElementId e : store_.packageElements(g.pkg))
      if (store_.name(e) == name && store_.isKindOf(e, builtin::Class)) return e;
  return kNoElement;
}

bool Tool::isClass(int nodeId, ElementId cls) const {
  for (const ClassBoxMaplet& m : mapping_.classBoxXClasses)
    if (m.node == nodeId) return m.cls == cls;
  const Node* n = diagram_.findNode(nodeId);
  return n && n->external && n->externalCls == cls;
}

void Tool::addClassNode(ElementId cls) {
  if (mapletForClass(cls)) return;
  Node n;
  n.id = diagram_.nextNodeId++;
  n.display = Display::box({Display::nameBox(store_.name(cls), store_.tag(cls, builtin::Class))});
  ClassBoxMaplet m;
  m.node = n.id;
  m.cls = cls;
  diagram_.nodes.push_back(std::move(n));
  mapping_.classBoxXClasses.push_back(std::move(m));
  for (ElementId a : store_.members(cls, "attributes")) addAttBoxFor(cls, a);
}

void Tool::removeClassNode(ElementId cls) {
  ClassBoxMaplet* m = mapletForClass(cls);
  if (!m) return;
  const int nodeId = m->node;
  // Drop every edge touching the node, along with its attribute maplet.
  for (auto it = diagram_.edges.begin(); it != diagram_.edges.end();) {
    if (it->source == nodeId || it->target == nodeId) {
      const int edgeId = it->id;
      std::erase_if(mapping_.attEdgeXAttributes,
                    [edgeId](const AttEdgeMaplet& am) { return am.edge == edgeId; });
      it = diagram_.edges.erase(it);
    } else {
      ++it;
    }
  }
  std::erase_if(diagram_.nodes, [nodeId](const Node& n) { return n.id == nodeId; });
  std::erase_if(mapping_.classBoxXClasses,
                [cls](const ClassBoxMaplet& cm) { return cm.cls == cls; });
}

void Tool::addAttBoxFor(ElementId cls, ElementId attr) {
  ClassBoxMaplet* m = mapletForClass(cls);
  if (!m) return;
  for (const AttBoxMaplet& am : m->attBoxes)
    if (am.attribute == attr) return;
  Node* n = diagram_.findNode(m->node);
  n->display.children.push_back(Display::attBox(store_.name(attr), typeText(store_, attr),
                                                store_.tag(attr, builtin::Attribute)));
  m->attBoxes.push_back({n->attBoxCount() - 1, attr});
}

void Tool::removeAttributeDisplay(ElementId attr) {
  for (ClassBoxMaplet& m : mapping_.classBoxXClasses) {
    for (std::size_t i = 0; i < m.attBoxes.size(); ++i) {
      if (m.attBoxes[i].attribute != attr) continue;
      const int index = m.attBoxes[i].attBoxIndex;
      Node* n = diagram_.findNode(m.node);
      n->display.children.erase(n->display.children.begin() + index + 1);
      m.attBoxes.erase(m.attBoxes.begin() + static_cast<long>(i));
      for (AttBoxMaplet& am : m.attBoxes)
        if (am.attBoxIndex > index) --am.attBoxIndex;
      return;
    }
  }
  for (std::size_t i = 0; i < mapping_.attEdgeXAttributes.size(); ++i) {
    if (mapping_.attEdgeXAttributes[i].attribute != attr) continue;
    const int edgeId = mapping_.attEdgeXAttributes[i].edge;
    std::erase_if(diagram_.edges, [edgeId](const Edge& e) { return e.id == edgeId; });
    mapping_.attEdgeXAttributes.erase(mapping_.attEdgeXAttributes.begin() + static_cast<long>(i));
    return;
  }
}

void Tool::refreshTypeTexts(ElementId cls) {
  // A class rename shows up in every att box typed by it.
  for (ClassBoxMaplet& m : mapping_.classBoxXClasses)
    for (const AttBoxMaplet& am : m.attBoxes)
      if (store_.getSlot(am.attribute, "type") == Value::ref(cls))
        diagram_.findNode(m.node)->attBoxAt(am.attBoxIndex).children[1].text = store_.name(cls);
}

void Tool::refreshAttributeDisplay(ElementId attr) {
  for (ClassBoxMaplet& m : mapping_.classBoxXClasses) {
    for (const AttBoxMaplet& am : m.attBoxes) {
      if (am.attribute != attr) continue;
      Display& box = diagram_.findNode(m.node)->attBoxAt(am.attBoxIndex);
      box.children[0].text = store_.name(attr);
      box.children[1].text = typeText(store_, attr);
      return;
    }
  }
  for (const AttEdgeMaplet& am : mapping_.attEdgeXAttributes) {
    if (am.attribute != attr) continue;
    Edge* e = diagram_.findEdge(am.edge);
    for (EdgeLabel& l : e->labels)
      if (l.tag == "name") l.text = store_.name(attr);
    const Value& type = store_.getSlot(attr, "type");
    const ElementId t = type.isRef() ? type.asRef() : kNoElement;
    int targetNode = 0;
    if (ClassBoxMaplet* tm = mapletForClass(t)) {
      targetNode = tm->node;
    } else {
      for (const Node& n : diagram_.nodes)
        if (n.external && n.externalCls == t) targetNode = n.id;
    }
    if (targetNode != 0) {
      e->target = targetNode;
    } else {
      // The new type has no rendering: fall back to the boxed form.
      removeAttributeDisplay(attr);
      addAttBoxFor(store_.ownerOf(attr), attr);
    }
    return;
  }
}

void Tool::applyDiagramEvent(const ToolEvent& ev) {
  switch (ev.kind) {
    case ToolEvent::Kind::CreateNodeAt: {
      const ElementId cls = classForButton(ev.button);
      auto clsParents = store_.allParents(cls);
      if (!std::binary_search(clsParents.begin(), clsParents.end(), builtin::Class))
        fail("TagError", "button '" + ev.button + "' does not create classes");
      ElementId e = 0;
      {
        SuppressGuard guard(suppress_);
        e = store_.newInstance(cls);
        store_.setSlot(pkg_, "elements",
                       store_.getSlot(pkg_, "elements").withAdded(Value::ref(e)));
      }
      addClassNode(e);
      return;
    }
    case ToolEvent::Kind::DeleteNode: {
      ClassBoxMaplet* m = mapletForNode(ev.node);
      if (!m) fail("UnknownNode", "no node " + std::to_string(ev.node));
      const ElementId cls = m->cls;
      // Attributes elsewhere typed by this class go with it.
      std::vector<ElementId> dangling;
      for (const ClassBoxMaplet& other : mapping_.classBoxXClasses) {
        if (other.cls == cls) continue;
        for (ElementId a : store_.members(other.cls, "attributes"))
          if (store_.getSlot(a, "type") == Value::ref(cls)) dangling.push_back(a);
      }
      for (ElementId a : dangling) removeAttributeDisplay(a);
      removeClassNode(cls);
      {
        SuppressGuard guard(suppress_);
        for (ElementId a : dangling) store_.removeElement(a);
        for (ElementId a : store_.members(cls, "attributes")) store_.removeElement(a);
        store_.removeElement(cls);
      }
      return;
    }
    case ToolEvent::Kind::EditNodeName: {
      ClassBoxMaplet* m = mapletForNode(ev.node);
      if (!m) fail("UnknownNode", "no node " + std::to_string(ev.node));
      {
        SuppressGuard guard(suppress_);
        store_.setSlot(m->cls, "name", Value::str(ev.name));
      }
      diagram_.findNode(ev.node)->nameBox().children[0].text = ev.name;
      refreshTypeTexts(m->cls);
      return;
    }
    case ToolEvent::Kind::AddAttBox: {
      ClassBoxMaplet* m = mapletForNode(ev.node);
      if (!m) fail("UnknownNode", "no node " + std::to_string(ev.node));
      const ElementId attCls = classForButton(ev.button);
      auto attParents = store_.allParents(attCls);
      if (!std::binary_search(attParents.begin(), attParents.end(), builtin::Attribute))
        fail("TagError", "button '" + ev.button + "' does not create attributes");
      const ElementId type = resolveTypeName(ev.typeName);
      if (type == kNoElement) fail("UnknownType", "no type named '" + ev.typeName + "'");
      ElementId attr = 0;
      {
        SuppressGuard guard(suppress_);
        attr = store_.newInstance(attCls);
        store_.setSlot(attr, "name", Value::str(ev.name));
        store_.setSlot(attr, "type", Value::ref(type));
        store_.setSlot(m->cls, "attributes",
                       store_.getSlot(m->cls, "attributes").withAdded(Value::ref(attr)));
      }
      addAttBoxFor(m->cls, attr);
      return;
    }
    case ToolEvent::Kind::EditAttBox: {
      ClassBoxMaplet* m = mapletForNode(ev.node);
      if (!m) fail("UnknownNode", "no node " + std::to_string(ev.node));
      ElementId attr = kNoElement;
      for (const AttBoxMaplet& am : m->attBoxes)
        if (am.attBoxIndex == ev.attBoxIndex) attr = am.attribute;
      if (attr == kNoElement)
        fail("UnknownNode", "node " + std::to_string(ev.node) + " has no attribute box " +
                                std::to_string(ev.attBoxIndex));
      ElementId type = kNoElement;
      if (!ev.typeName.empty()) {
        type = resolveTypeName(ev.typeName);
        if (type == kNoElement) fail("UnknownType", "no type named '" + ev.typeName + "'");
      }
      {
        SuppressGuard guard(suppress_);
        if (!ev.name.empty()) store_.setSlot(attr, "name", Value::str(ev.name));
        if (type != kNoElement) store_.setSlot(attr, "type", Value::ref(type));
      }
      refreshAttributeDisplay(attr);
      return;
    }
    case ToolEvent::Kind::DrawEdge: {
      ClassBoxMaplet* src = mapletForNode(ev.source);
      if (!src) fail("UnknownNode", "no source node " + std::to_string(ev.source));
      if (ev.edgeKind == Edge::Kind::Inheritance) {
        ClassBoxMaplet* dst = mapletForNode(ev.target);
        if (!dst) fail("UnknownNode", "no target node " + std::to_string(ev.target));
        const auto parents = store_.allParents(dst->cls);
        if (std::binary_search(parents.begin(), parents.end(), src->cls))
          fail("CyclicInheritance", "inheritance edge would close a cycle");
        {
          SuppressGuard guard(suppress_);
          store_.setSlot(src->cls, "parents",
                         store_.getSlot(src->cls, "parents").withAdded(Value::ref(dst->cls)));
        }
        Edge e;
        e.id = diagram_.nextEdgeId++;
        e.kind = Edge::Kind::Inheritance;
        e.source = ev.source;
        e.target = ev.target;
        diagram_.edges.push_back(std::move(e));
        return;
      }
      ElementId targetCls = kNoElement;
      if (ClassBoxMaplet* dst = mapletForNode(ev.target)) {
        targetCls = dst->cls;
      } else if (const Node* n = diagram_.findNode(ev.target); n && n->external) {
        targetCls = n->externalCls;
      } else {
        fail("UnknownNode", "no target node " + std::to_string(ev.target));
      }
      const ElementId attCls = classForButton(ev.button);
      auto attParents = store_.allParents(attCls);
      if (!std::binary_search(attParents.begin(), attParents.end(), builtin::Attribute))
        fail("TagError", "button '" + ev.button + "' does not create attributes");
      ElementId attr = 0;
      {
        SuppressGuard guard(suppress_);
        attr = store_.newInstance(attCls);
        store_.setSlot(attr, "name", Value::str(ev.name));
        store_.setSlot(attr, "type", Value::ref(targetCls));
        store_.setSlot(src->cls, "attributes",
                       store_.getSlot(src->cls, "attributes").withAdded(Value::ref(attr)));
      }
      Edge e;
      e.id = diagram_.nextEdgeId++;
      e.kind = Edge::Kind::Attribute;
      e.source = ev.source;
      e.target = ev.target;
      e.labels = {{"name", ev.name}, {"tag", store_.tag(attr, builtin::Attribute)}};
      const int edgeId = e.id;
      diagram_.edges.push_back(std::move(e));
      mapping_.attEdgeXAttributes.push_back({edgeId, attr});
      return;
    }
    case ToolEvent::Kind::DeleteEdge: {
      Edge* e = diagram_.findEdge(ev.edge);
      if (!e) fail("UnknownEdge", "no edge " + std::to_string(ev.edge));
      if (e->kind == Edge::Kind::Inheritance) {
        ClassBoxMaplet* src = mapletForNode(e->source);
        ClassBoxMaplet* dst = mapletForNode(e->target);
        const int edgeId = e->id;
        if (src && dst) {
          SuppressGuard guard(suppress_);
          store_.setSlot(src->cls, "parents",
                         store_.getSlot(src->cls, "parents").withRemoved(Value::ref(dst->cls)));
        }
        std::erase_if(diagram_.edges, [edgeId](const Edge& x) { return x.id == edgeId; });
        return;
      }
      ElementId attr = kNoElement;
      for (const AttEdgeMaplet& am : mapping_.attEdgeXAttributes)
        if (am.edge == ev.edge) attr = am.attribute;
      removeAttributeDisplay(attr);
      if (attr != kNoElement) {
        SuppressGuard guard(suppress_);
        store_.removeElement(attr);
      }
      return;
    }
    case ToolEvent::Kind::ToggleAttribute: {
      ClassBoxMaplet* m = mapletForNode(ev.node);
      if (!m) fail("UnknownNode", "no node " + std::to_string(ev.node));
      for (ElementId a : store_.members(m->cls, "attributes"))
        if (store_.name(a) == ev.name) {
          toggleAttributeRepresentation(a);
          return;
        }
      fail("UnknownName",
           "class " + store_.name(m->cls) + " has no attribute named '" + ev.name + "'");
    }
    case ToolEvent::Kind::ImportType: {
      const ElementId cls = resolveTypeName(ev.typeName);
      if (cls == kNoElement) fail("UnknownType", "no type named '" + ev.typeName + "'");
      for (const Node& n : diagram_.nodes)
        if (n.external && n.externalCls == cls) return;
      Node n;
      n.id = diagram_.nextNodeId++;
      n.external = true;
      n.externalCls = cls;
      n.display = Display::box({Display::nameBox(store_.name(cls), store_.tag(cls, builtin::Class))});
      diagram_.nodes.push_back(std::move(n));
      return;
    }
  }
}

void Tool::toggleAttributeRepresentation(ElementId attribute) {
  const ElementId owner = store_.ownerOf(attribute);
  ClassBoxMaplet* m = mapletForClass(owner);
  if (!m) fail("UnknownNode", "the attribute's class is not on the diagram");

  for (const AttBoxMaplet& am : m->attBoxes) {
    if (am.attribute != attribute) continue;
    const Value& type = store_.getSlot(attribute, "type");
    const ElementId t = type.isRef() ? type.asRef() : kNoElement;
    int targetNode = 0;
    if (ClassBoxMaplet* tm = mapletForClass(t)) {
      targetNode = tm->node;
    } else {
      for (const Node& n : diagram_.nodes)
        if (n.external && n.externalCls == t) targetNode = n.id;
    }
    if (targetNode == 0)
      fail("TypeNotOnDiagram",
           "type of '" + store_.name(attribute) + "' has no node on the diagram");
    removeAttributeDisplay(attribute);
    Edge e;
    e.id = diagram_.nextEdgeId++;
    e.kind = Edge::Kind::Attribute;
    e.source = m->node;
    e.target = targetNode;
    e.labels = {{"name", store_.name(attribute)},
                {"tag", store_.tag(attribute, builtin::Attribute)}};
    const int edgeId = e.id;
    diagram_.edges.push_back(std::move(e));
    mapping_.attEdgeXAttributes.push_back({edgeId, attribute});
    return;
  }
  for (const AttEdgeMaplet& am : mapping_.attEdgeXAttributes) {
    if (am.attribute != attribute) continue;
    removeAttributeDisplay(attribute);
    addAttBoxFor(owner, attribute);
    return;
  }
  fail("UnknownElement", "attribute '" + store_.name(attribute) + "' is not on the diagram");
}

void Tool::onModelEvent(const ChangeEvent& ev) {
  switch (ev.kind) {
    case ChangeEvent::Kind::ElementAdded:
      return;  // only interesting once it joins the package
    case ChangeEvent::Kind::ElementRemoved:
      if (mapletForClass(ev.subject)) removeClassNode(ev.subject);
      else removeAttributeDisplay(ev.subject);
      return;
    case ChangeEvent::Kind::SlotChanged:
      break;
  }
  if (ev.subject == pkg_ && ev.slot == "elements") {
    for (ElementId e : addedRefs(ev.oldValue, ev.newValue))
      if (store_.isKindOf(e, builtin::Class)) addClassNode(e);
    for (ElementId e : addedRefs(ev.newValue, ev.oldValue))
      if (mapletForClass(e)) removeClassNode(e);
    return;
  }
  if (ClassBoxMaplet* m = mapletForClass(ev.subject)) {
    if (ev.slot == "name") {
      diagram_.findNode(m->node)->nameBox().children[0].text = store_.name(ev.subject);
      refreshTypeTexts(ev.subject);
    } else if (ev.slot == "attributes") {
      for (ElementId a : addedRefs(ev.oldValue, ev.newValue)) addAttBoxFor(ev.subject, a);
      for (ElementId a : addedRefs(ev.newValue, ev.oldValue)) removeAttributeDisplay(a);
    }
    return;
  }
  if (ev.slot == "name" || ev.slot == "type") refreshAttributeDisplay(ev.subject);
}

std::vector<Violation> Tool::syncCheck() const {
  std::vector<Violation> out;
  auto violate = [&out](const std::string& name, const std::string& detail) {
    out.push_back({name, detail});
  };
  auto names = [this](const std::vector<ElementId>& es) {
    std::set<std::string> s;
    for (ElementId e : es) s.insert(store_.name(e));
    return s;
  };

  // Palette against the meta-package chain.
  std::vector<ElementId> expectedGroups;
  for (ElementId p : store_.allParents(store_.metaPackage(pkg_)))
    if (store_.isKindOf(p, builtin::Package)) expectedGroups.push_back(p);
  std::set<std::string> groupNames;
  for (const Group& g : palette_) groupNames.insert(g.name);
  if (groupNames != names(expectedGroups))
    violate("PaletteGroups", "palette groups do not match the meta-package chain");
  for (const Group& g : palette_) {
    std::set<std::string> buttonNames;
    for (const Button& b : g.buttons) buttonNames.insert(b.name);
    if (buttonNames != names(store_.wideModellingElements(g.pkg)))
      violate("PaletteButtons",
              "group '" + g.name + "' buttons do not match its modelling elements");
  }

  const std::vector<ElementId> classes = store_.modellingElements(pkg_);
  std::size_t classBoxCount = 0;
  for (const Node& n : diagram_.nodes)
    if (n.isClassBox()) ++classBoxCount;
  if (classBoxCount != classes.size())
    violate("NodeCount", std::to_string(classBoxCount) + " class boxes for " +
                             std::to_string(classes.size()) + " classes");

  if (mapping_.pkg != pkg_) violate("MappingCommutes", "mapping is rooted at the wrong package");

  std::vector<std::pair<long long, long long>> classPairs;
  for (const ClassBoxMaplet& m : mapping_.classBoxXClasses) classPairs.push_back({m.node, m.cls});
  for (const Violation& v : checkOneToOne("OneToOne", classPairs)) out.push_back(v);
  std::vector<std::pair<long long, long long>> edgePairs;
  for (const AttEdgeMaplet& m : mapping_.attEdgeXAttributes) edgePairs.push_back({m.edge, m.attribute});
  for (const Violation& v : checkOneToOne("OneToOne", edgePairs)) out.push_back(v);

  // ClassBox maplets must be total on both package classes and class boxes.
  std::set<ElementId> mappedClasses;
  std::set<int> mappedNodes;
  for (const ClassBoxMaplet& m : mapping_.classBoxXClasses) {
    mappedClasses.insert(m.cls);
    mappedNodes.insert(m.node);
  }
  for (ElementId c : classes)
    if (!mappedClasses.count(c))
      violate("ClassBoxTotality", "class '" + store_.name(c) + "' has no class box");
  for (ElementId c : mappedClasses)
    if (std::find(classes.begin(), classes.end(), c) == classes.end())
      violate("ClassBoxTotality",
              "mapped class '" + store_.name(c) + "' is not in the package");
  for (const Node& n : diagram_.nodes)
    if (n.isClassBox() && !mappedNodes.count(n.id))
      violate("ClassBoxTotality", "node " + std::to_string(n.id) + " is unmapped");
  for (int n : mappedNodes) {
    const Node* node = diagram_.findNode(n);
    if (!node || !node->isClassBox())
      violate("ClassBoxTotality", "maplet points at missing node " + std::to_string(n));
  }

  for (const Edge& e : diagram_.edges) {
    if (!diagram_.findNode(e.source) || !diagram_.findNode(e.target))
      violate("EdgeEndpoints", "edge " + std::to_string(e.id) + " has a dangling endpoint");
  }

  // Attribute universe of the package, for subset/partition checks.
  std::set<ElementId> allAttributes;
  for (ElementId c : classes)
    for (ElementId a : store_.members(c, "attributes")) allAttributes.insert(a);

  std::set<int> attEdgeIds;
  for (const AttEdgeMaplet& m : mapping_.attEdgeXAttributes) {
    attEdgeIds.insert(m.edge);
    if (!allAttributes.count(m.attribute))
      violate("AttEdgeSubset", "edge " + std::to_string(m.edge) +
                                   " maps an attribute outside the package");
  }
  for (const Edge& e : diagram_.edges)
    if (e.kind == Edge::Kind::Attribute && !attEdgeIds.count(e.id))
      violate("AttEdgeTotality", "attribute edge " + std::to_string(e.id) + " is unmapped");
  for (const AttEdgeMaplet& m : mapping_.attEdgeXAttributes) {
    const Edge* e = diagram_.findEdge(m.edge);
    if (!e || e->kind != Edge::Kind::Attribute) {
      violate("AttEdgeTotality", "maplet points at missing edge " + std::to_string(m.edge));
      continue;
    }
    const ElementId owner = store_.ownerOf(m.attribute);
    if (!isClass(e->source, owner))
      violate("AttEdgeSource", "edge " + std::to_string(e->id) +
                                   " does not leave the class of '" + store_.name(m.attribute) + "'");
    const bool typed = store_.exists(m.attribute) && store_.hasSlot(m.attribute, "type");
    const Value type = typed ? store_.getSlot(m.attribute, "type") : Value();
    if (!type.isRef() || !isClass(e->target, type.asRef()))
      violate("AttEdgeTarget", "edge " + std::to_string(e->id) +
                                   " does not reach the type of '" + store_.name(m.attribute) + "'");
  }

  std::set<ElementId> displayed;
  for (const AttEdgeMaplet& m : mapping_.attEdgeXAttributes) {
    if (displayed.count(m.attribute))
      violate("AttributePartition", "attribute '" + store_.name(m.attribute) + "' shown twice");
    displayed.insert(m.attribute);
  }

  for (const ClassBoxMaplet& m : mapping_.classBoxXClasses) {
    const Node* n = diagram_.findNode(m.node);
    if (!n) continue;
    if (!store_.exists(m.cls)) continue;
    if (n->nameBox().children[0].text != store_.name(m.cls))
      violate("ClassBoxNameSync", "node " + std::to_string(m.node) + " shows '" +
                                      n->nameBox().children[0].text + "' for class '" +
                                      store_.name(m.cls) + "'");
    if (n->nameBox().children[1].text != store_.tag(m.cls, builtin::Class))
      violate("ClassBoxTagSync", "node " + std::to_string(m.node) + " shows the wrong tag");

    const std::vector<ElementId> ownAtts = store_.members(m.cls, "attributes");
    std::vector<std::pair<long long, long long>> boxPairs;
    std::set<int> usedIndices;
    for (const AttBoxMaplet& am : m.attBoxes) {
      boxPairs.push_back({am.attBoxIndex, am.attribute});
      usedIndices.insert(am.attBoxIndex);
      if (std::find(ownAtts.begin(), ownAtts.end(), am.attribute) == ownAtts.end())
        violate("AttBoxSubset", "node " + std::to_string(m.node) +
                                    " boxes an attribute not owned by '" + store_.name(m.cls) + "'");
      if (displayed.count(am.attribute))
        violate("AttributePartition",
                "attribute '" + store_.name(am.attribute) + "' shown twice");
      displayed.insert(am.attribute);
      if (am.attBoxIndex < 0 || am.attBoxIndex >= n->attBoxCount()) {
        violate("AttBoxTotality", "node " + std::to_string(m.node) + " maplet index " +
                                      std::to_string(am.attBoxIndex) + " is out of range");
        continue;
      }
      const Display& box = n->attBoxAt(am.attBoxIndex);
      if (box.children[0].text != store_.name(am.attribute))
        violate("AttBoxNameSync", "node " + std::to_string(m.node) + " box " +
                                      std::to_string(am.attBoxIndex) + " shows the wrong name");
      const bool typed = store_.exists(am.attribute) && store_.hasSlot(am.attribute, "type");
      if (!typed || box.children[1].text != typeText(store_, am.attribute))
        violate("AttBoxTypeSync", "node " + std::to_string(m.node) + " box " +
                                      std::to_string(am.attBoxIndex) + " shows the wrong type");
      if (box.children[2].text != store_.tag(am.attribute, builtin::Attribute))
        violate("AttBoxTagSync", "node " + std::to_string(m.node) + " box " +
                                     std::to_string(am.attBoxIndex) + " shows the wrong tag");
    }
    for (const Violation& v : checkOneToOne("OneToOne", boxPairs)) out.push_back(v);
    for (int i = 0; i < n->attBoxCount(); ++i)
      if (!usedIndices.count(i))
        violate("AttBoxTotality",
                "node " + std::to_string(m.node) + " box " + std::to_string(i) + " is unmapped");
  }

  for (ElementId a : allAttributes)
    if (!displayed.count(a))
      violate("AttributePartition",
              "attribute '" + store_.name(a) + "' has no rendering at all");

  return out;
}

nlohmann::ordered_json Tool::dumpDiagram() const {
  nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
  for (const Node& n : diagram_.nodes) {
    nlohmann::ordered_json jn{{"id", n.id}, {"display", n.display.toJson()}};
    if (n.external) jn["external"] = store_.name(n.externalCls);
    nodes.push_back(std::move(jn));
  }
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (const Edge& e : diagram_.edges) {
    nlohmann::ordered_json labels = nlohmann::ordered_json::array();
    for (const EdgeLabel& l : e.labels)
      labels.push_back({{"tag", l.tag}, {"text", l.text}});
    edges.push_back({{"id", e.id},
                     {"kind", e.kind == Edge::Kind::Attribute ? "attribute" : "inheritance"},
                     {"source", e.source},
                     {"target", e.target},
                     {"labels", std::move(labels)}});
  }
  return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

nlohmann::ordered_json Tool::paletteJson() const {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (const Group& g : palette_) {
    nlohmann::ordered_json buttons = nlohmann::ordered_json::array();
    for (const Button& b : g.buttons) buttons.push_back(b.name);
    out[g.name] = std::move(buttons);
  }
  return out;
}

void applyScriptEvent(Store& store, Tool& tool, const nlohmann::json& entry) {
  const std::string ev = entry.at("ev").get<std::string>();
  auto str = [&entry](const char* key, const std::string& dflt = "") {
    return entry.contains(key) ? entry.at(key).get<std::string>() : dflt;
  };
  auto num = [&entry](const char* key) { return entry.at(key).get<int>(); };

  ToolEvent e;
  if (ev == "createNode") {
    e.kind = ToolEvent::Kind::CreateNodeAt;
    e.button = str("button");
  } else if (ev == "deleteNode") {
    e.kind = ToolEvent::Kind::DeleteNode;
    e.node = num("node");
  } else if (ev == "editName") {
    e.kind = ToolEvent::Kind::EditNodeName;
    e.node = num("node");
    e.name = str("text");
  } else if (ev == "addAttBox") {
    e.kind = ToolEvent::Kind::AddAttBox;
    e.node = num("node");
    e.name = str("name");
    e.typeName = str("type");
    e.button = str("button", "Attribute");
  } else if (ev == "editAttBox") {
    e.kind = ToolEvent::Kind::EditAttBox;
    e.node = num("node");
    e.attBoxIndex = num("index");
    e.name = str("name");
    e.typeName = str("type");
  } else if (ev == "drawEdge") {
    e.kind = ToolEvent::Kind::DrawEdge;
    e.source = num("source");
    e.target = num("target");
    e.edgeKind = str("kind", "attribute") == "inheritance" ? Edge::Kind::Inheritance
                                                           : Edge::Kind::Attribute;
    e.name = str("name");
    e.button = str("button", "Attribute");
  } else if (ev == "deleteEdge") {
    e.kind = ToolEvent::Kind::DeleteEdge;
    e.edge = num("edge");
  } else if (ev == "toggleAtt") {
    e.kind = ToolEvent::Kind::ToggleAttribute;
    e.node = num("node");
    e.name = str("name");
  } else if (ev == "importType") {
    e.kind = ToolEvent::Kind::ImportType;
    e.typeName = str("type");
  } else if (ev == "model.setSlot") {
    store.setSlot(entry.at("element").get<ElementId>(), str("slot"),
                  valueFromJson(entry.at("value")));
    return;
  } else if (ev == "model.newClass") {
    ElementId metaclass = kNoElement;
    const std::string mcName = str("metaclass", "Class");
    for (const auto& [id, el] : store.elements())
      if (store.name(id) == mcName && store.isKindOf(id, builtin::Class)) {
        metaclass = id;
        break;
      }
    if (metaclass == kNoElement) fail("UnknownType", "no metaclass named '" + mcName + "'");
    const ElementId cls = store.newInstance(metaclass);
    store.setSlot(cls, "name", Value::str(str("name")));
    store.setSlot(tool.package(), "elements",
                  store.getSlot(tool.package(), "elements").withAdded(Value::ref(cls)));
    return;
  } else if (ev == "model.remove") {
    store.removeElement(entry.at("element").get<ElementId>());
    return;
  } else {
    fail("UnknownForm", "unknown event '" + ev + "'");
  }
  tool.applyDiagramEvent(e);
}

nlohmann::ordered_json violationsJson(const std::vector<Violation>& vs) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const Violation& v : vs)
    out.push_back({{"constraint", v.constraintName}, {"detail", v.detail}});
  return out;
}

}  // namespace mpk::tool
