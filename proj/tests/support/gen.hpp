#pragma once

// Seeded random diagram-event generator for the synchronization property
// suite. Only emits events that are valid in the current tool state; the
// seed comes from MPK_SEED when set so failures reproduce exactly.

#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "mpk/errors.hpp"
#include "mpk/tool.hpp"

namespace mpktest {

inline std::uint64_t seedFromEnv(std::uint64_t fallback) {
  if (const char* s = std::getenv("MPK_SEED")) return std::strtoull(s, nullptr, 10);
  return fallback;
}

class EventGen {
public:
  EventGen(mpk::Store& store, mpk::tool::Tool& tool, std::uint64_t seed)
      : store_(store), tool_(tool), rng_(seed) {}

  // Applies one randomly chosen valid event; returns false when nothing
  // applicable was found this round.
  bool step() {
    using mpk::tool::ToolEvent;
    for (int attempt = 0; attempt < 8; ++attempt) {
      switch (rng_() % 10) {
        case 0: {
          ToolEvent e;
          e.kind = ToolEvent::Kind::CreateNodeAt;
          e.button = pick<std::string>({"Class", "EntityBean"});
          tool_.applyDiagramEvent(e);
          return true;
        }
        case 1: {
          int n = anyClassNode();
          if (!n) break;
          ToolEvent e;
          e.kind = ToolEvent::Kind::EditNodeName;
          e.node = n;
          e.name = freshName("N");
          tool_.applyDiagramEvent(e);
          return true;
        }
        case 2: {
          int n = anyClassNode();
          if (!n) break;
          ToolEvent e;
          e.kind = ToolEvent::Kind::AddAttBox;
          e.node = n;
          e.name = freshName("a");
          e.typeName = pick<std::string>({"String", "Integer", "Boolean"});
          e.button = "BeanAttribute";
          tool_.applyDiagramEvent(e);
          return true;
        }
        case 3: {
          int s = anyClassNode(), t = anyClassNode();
          if (!s || !t) break;
          ToolEvent e;
          e.kind = ToolEvent::Kind::DrawEdge;
          e.source = s;
          e.target = t;
          e.name = freshName("r");
          e.button = "BeanAttribute";
          tool_.applyDiagramEvent(e);
          return true;
        }
        case 4: {
          int n = anyClassNode();
          if (!n || tool_.diagram().nodes.size() < 2) break;
          ToolEvent e;
          e.kind = ToolEvent::Kind::DeleteNode;
          e.node = n;
          tool_.applyDiagramEvent(e);
          return true;
        }
        case 5: {
          const auto& edges = tool_.diagram().edges;
          if (edges.empty()) break;
          ToolEvent e;
          e.kind = ToolEvent::Kind::DeleteEdge;
          e.edge = edges[rng_() % edges.size()].id;
          tool_.applyDiagramEvent(e);
          return true;
        }
        case 6: {
          // Toggle an edge back to a box (always valid: the owner's box
          // exists while the edge does).
          const auto& ms = tool_.mapping().attEdgeXAttributes;
          if (ms.empty()) break;
          tool_.toggleAttributeRepresentation(ms[rng_() % ms.size()].attribute);
          return true;
        }
        case 7: {
          // Model-side rename: the daemon must carry it to the diagram.
          mpk::ElementId cls = anyMappedClass();
          if (!cls) break;
          store_.setSlot(cls, "name", mpk::Value::str(freshName("M")));
          return true;
        }
        case 8: {
          // Model-side attribute creation outside the tool.
          mpk::ElementId cls = anyMappedClass();
          if (!cls) break;
          mpk::ElementId a = store_.newInstance(mpk::builtin::BeanAttribute);
          store_.setSlot(a, "name", mpk::Value::str(freshName("b")));
          store_.setSlot(a, "type", mpk::Value::ref(mpk::builtin::String));
          store_.setSlot(cls, "attributes",
                         store_.getSlot(cls, "attributes").withAdded(mpk::Value::ref(a)));
          return true;
        }
        case 9: {
          // Toggle a class-typed boxed attribute out to an edge.
          std::vector<mpk::ElementId> candidates;
          for (const auto& m : tool_.mapping().classBoxXClasses)
            for (const auto& am : m.attBoxes) {
              const mpk::Value& t = store_.getSlot(am.attribute, "type");
              if (t.isRef() && mapped(t.asRef())) candidates.push_back(am.attribute);
            }
          if (candidates.empty()) break;
          tool_.toggleAttributeRepresentation(candidates[rng_() % candidates.size()]);
          return true;
        }
      }
    }
    return false;
  }

private:
  template <typename T>
  T pick(std::vector<T> xs) {
    return xs[rng_() % xs.size()];
  }

  std::string freshName(const char* prefix) { return prefix + std::to_string(++counter_); }

  int anyClassNode() {
    std::vector<int> ids;
    for (const auto& n : tool_.diagram().nodes)
      if (n.isClassBox()) ids.push_back(n.id);
    return ids.empty() ? 0 : ids[rng_() % ids.size()];
  }

  mpk::ElementId anyMappedClass() {
    const auto& ms = tool_.mapping().classBoxXClasses;
    return ms.empty() ? mpk::kNoElement : ms[rng_() % ms.size()].cls;
  }

  bool mapped(mpk::ElementId cls) const {
    for (const auto& m : tool_.mapping().classBoxXClasses)
      if (m.cls == cls) return true;
    return false;
  }

  mpk::Store& store_;
  mpk::tool::Tool& tool_;
  std::mt19937_64 rng_;
  int counter_ = 0;
};

}  // namespace mpktest
