#include <sstream>

#include "gubs/syntax.hpp"

namespace gubs {
namespace {

const char* arrow(DependenceKind k) {
  switch (k) {
    case DependenceKind::Normal: return "->";
    case DependenceKind::Persistent: return "=>";
    case DependenceKind::Remanent: return "~>";
  }
  return "?";
}

std::string render_rel(const AttrRel& r) {
  switch (r.kind) {
    case AttrRelKind::Prec: return r.left.text + " < " + r.right->text;
    case AttrRelKind::Napprox: return r.left.text + " >< " + r.right->text;
    case AttrRelKind::Bare: return r.left.text;
  }
  return "?";
}

template <typename T, typename F>
std::string join(const std::vector<T>& xs, const char* sep, F f) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += f(xs[i]);
  }
  return out;
}

std::string render_body(const std::vector<Behaviour>& body);

std::string render_behaviour(const Behaviour& b) {
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Dependence>) {
          return render_collection(n.cause) + " " + arrow(n.kind) + " " +
                 render_collection(n.effect);
        } else if constexpr (std::is_same_v<T, CompartmentB>) {
          return n.name.text + " " + render_body(n.body);
        } else if constexpr (std::is_same_v<T, ContextB>) {
          return "[" + join(n.contexts, ", ", [](const Ident& i) { return i.text; }) + "] " +
                 render_body(n.body);
        } else if constexpr (std::is_same_v<T, ObservationB>) {
          return n.label.text + " :: " + render_collection(n.states);
        } else {
          std::string rels = join(n.relations, ", ", render_rel);
          return join(n.agents, ", ", [](const Ident& i) { return i.text; }) + " :: {" +
                 (rels.empty() ? " " : rels) + "}";
        }
      },
      b.node);
}

std::string render_body(const std::vector<Behaviour>& body) {
  if (body.empty()) return "{ }";
  return "{ " + join(body, ", ", render_behaviour) + " }";
}

void dump(std::ostringstream& os, const std::vector<Behaviour>& body, int depth) {
  std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  for (const auto& b : body) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Dependence>) {
            const char* kind = n.kind == DependenceKind::Normal       ? "normal"
                               : n.kind == DependenceKind::Persistent ? "persistent"
                                                                      : "remanent";
            os << pad << "dependence " << kind << "\n";
            os << pad << "  cause  " << render_collection(n.cause) << "\n";
            os << pad << "  effect " << render_collection(n.effect) << "\n";
          } else if constexpr (std::is_same_v<T, CompartmentB>) {
            os << pad << "compartment " << n.name.text << "\n";
            dump(os, n.body, depth + 1);
          } else if constexpr (std::is_same_v<T, ContextB>) {
            os << pad << "context ["
               << join(n.contexts, ", ", [](const Ident& i) { return i.text; }) << "]\n";
            dump(os, n.body, depth + 1);
          } else if constexpr (std::is_same_v<T, ObservationB>) {
            os << pad << "observation " << n.label.text << " " << render_collection(n.states)
               << "\n";
          } else {
            os << pad << "attributes "
               << join(n.agents, ", ", [](const Ident& i) { return i.text; }) << "\n";
            for (const auto& r : n.relations) os << pad << "  " << render_rel(r) << "\n";
          }
        },
        b.node);
  }
}

}  // namespace

std::string render_state(const AgentState& s) {
  std::string out;
  bool neg = s.polarity == Polarity::Negative;
  if (neg && !s.attribute) out += "~";
  for (const auto& p : s.path) out += p.text + ".";
  out += s.agent.text;
  if (s.attribute) out += std::string("(") + (neg ? "~" : "") + s.attribute->text + ")";
  return out;
}

std::string render_collection(const StateCollection& c) {
  return join(c.states, " + ", render_state);
}

std::string render_program(const Program& p) { return render_body(p.behaviours); }

std::string dump_ast(const Program& p) {
  std::ostringstream os;
  os << "program\n";
  dump(os, p.behaviours, 1);
  return os.str();
}

}  // namespace gubs
