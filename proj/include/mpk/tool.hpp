#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mpk/store.hpp"

namespace mpk::tool {

// Generic display tree: boxes and text. Class renderings are boxes with a
// recognized shape; nameBox/attBoxes are derived views over the children.
struct Display {
  enum class Kind { Box, Text };
  Kind kind = Kind::Box;
  std::string text;
  std::vector<Display> children;

  static Display textOf(std::string s);
  static Display box(std::vector<Display> children);
  // NameBox ::= Box[Text name, Text tag]
  static Display nameBox(const std::string& name, const std::string& tag);
  // AttBox ::= Box[Text name, Text type, Text tag]
  static Display attBox(const std::string& name, const std::string& type, const std::string& tag);

  nlohmann::ordered_json toJson() const;
};

struct Node {
  int id = 0;
  Display display;
  bool external = false;        // imported-type stand-in, rendered as a NameBox
  ElementId externalCls = kNoElement;

  bool isClassBox() const { return !external; }
  // Derived views: the name box is the first child, attribute boxes follow.
  Display& nameBox();
  const Display& nameBox() const;
  int attBoxCount() const;
  Display& attBoxAt(int i);
  const Display& attBoxAt(int i) const;
};

struct EdgeLabel {
  std::string tag;
  std::string text;
};

struct Edge {
  enum class Kind { Attribute, Inheritance };
  int id = 0;
  Kind kind = Kind::Attribute;
  int source = 0;
  int target = 0;
  std::vector<EdgeLabel> labels;
};

struct Diagram {
  std::vector<Node> nodes;
  std::vector<Edge> edges;
  int nextNodeId = 1;
  int nextEdgeId = 1;

  Node* findNode(int id);
  const Node* findNode(int id) const;
  Edge* findEdge(int id);
  const Edge* findEdge(int id) const;
};

struct Button {
  std::string name;
  ElementId cls = kNoElement;
};

struct Group {
  std::string name;
  ElementId pkg = kNoElement;
  std::vector<Button> buttons;
};

struct AttBoxMaplet {
  int attBoxIndex = 0;
  ElementId attribute = kNoElement;
};

struct ClassBoxMaplet {
  int node = 0;
  ElementId cls = kNoElement;
  std::vector<AttBoxMaplet> attBoxes;
};

struct AttEdgeMaplet {
  int edge = 0;
  ElementId attribute = kNoElement;
};

struct Mapping {
  ElementId pkg = kNoElement;
  std::vector<ClassBoxMaplet> classBoxXClasses;
  std::vector<AttEdgeMaplet> attEdgeXAttributes;
};

struct Violation {
  std::string constraintName;
  std::string detail;
};

struct ToolEvent {
  enum class Kind {
    CreateNodeAt,
    DeleteNode,
    EditNodeName,
    AddAttBox,
    EditAttBox,
    DrawEdge,
    DeleteEdge,
    ToggleAttribute,
    ImportType,
  };
  Kind kind = Kind::CreateNodeAt;
  std::string button;   // CreateNodeAt / AddAttBox / DrawEdge
  int node = 0;         // DeleteNode / EditNodeName / AddAttBox / EditAttBox / ToggleAttribute
  int edge = 0;         // DeleteEdge
  int source = 0;       // DrawEdge
  int target = 0;       // DrawEdge
  int attBoxIndex = 0;  // EditAttBox
  std::string name;     // EditNodeName text / attribute name
  std::string typeName; // AddAttBox / EditAttBox / ImportType
  Edge::Kind edgeKind = Edge::Kind::Attribute;  // DrawEdge
};

// Pure uniqueness check over one maplet family; syncCheck uses it for every
// OneToOne constraint (the acceptance oracle re-derives it pairwise).
std::vector<Violation> checkOneToOne(const std::string& family,
                                     const std::vector<std::pair<long long, long long>>& maplets);

// Headless modelling tool: package + palette + diagram + mapping, kept in
// sync through kernel daemons. Confined with its store; not copyable.
class Tool {
public:
  Tool(Store& store, ElementId pkg);
  ~Tool();
  Tool(const Tool&) = delete;
  Tool& operator=(const Tool&) = delete;

  void applyDiagramEvent(const ToolEvent& ev);
  void toggleAttributeRepresentation(ElementId attribute);
  std::vector<Violation> syncCheck() const;

  ElementId package() const { return pkg_; }
  const std::vector<Group>& palette() const { return palette_; }
  const Diagram& diagram() const { return diagram_; }
  const Mapping& mapping() const { return mapping_; }
  Mapping& mutableMapping() { return mapping_; }  // test back-door

  int daemonFireCount() const { return daemonFires_; }
  void resetDaemonFireCount() { daemonFires_ = 0; }

  nlohmann::ordered_json dumpDiagram() const;
  nlohmann::ordered_json paletteJson() const;

private:
  void onModelEvent(const ChangeEvent& ev);
  void addClassNode(ElementId cls);
  void removeClassNode(ElementId cls);
  void addAttBoxFor(ElementId cls, ElementId attr);
  void removeAttributeDisplay(ElementId attr);
  void refreshAttributeDisplay(ElementId attr);
  void refreshTypeTexts(ElementId cls);
  ClassBoxMaplet* mapletForNode(int node);
  ClassBoxMaplet* mapletForClass(ElementId cls);
  ElementId classForButton(const std::string& name) const;
  ElementId resolveTypeName(const std::string& name) const;
  bool isClass(int nodeId, ElementId cls) const;

  Store& store_;
  ElementId pkg_;
  std::vector<Group> palette_;
  Diagram diagram_;
  Mapping mapping_;
  std::optional<std::string> mode_;
  bool suppress_ = false;
  int daemonId_ = 0;
  int daemonFires_ = 0;
};

// Parses one JSON-lines event script entry; model.* entries are applied to
// the store directly (the tool reacts through its daemon).
void applyScriptEvent(Store& store, Tool& tool, const nlohmann::json& entry);

nlohmann::ordered_json violationsJson(const std::vector<Violation>& vs);

}  // namespace mpk::tool
