#include "gubs/syntax.hpp"

#include <cctype>
#include <sstream>

namespace gubs {

IdentKind Ident::kind() const {
  if (!text.empty() && std::isupper(static_cast<unsigned char>(text.front()))) {
    return IdentKind::Constant;
  }
  return IdentKind::Variable;
}

bool CompartmentB::operator==(const CompartmentB& o) const {
  return name == o.name && body == o.body;
}

bool ContextB::operator==(const ContextB& o) const {
  return contexts == o.contexts && body == o.body;
}

namespace {

std::string describe_expected(const std::set<std::string>& expected) {
  std::string out;
  for (const auto& e : expected) {
    if (!out.empty()) out += ", ";
    out += e;
  }
  return out;
}

}  // namespace

SyntaxError::SyntaxError(SourcePos pos, std::string found, std::set<std::string> expected)
    : std::runtime_error(std::to_string(pos.line) + ":" + std::to_string(pos.column) +
                         ": syntax error: unexpected " + found + ", expected one of: " +
                         describe_expected(expected)),
      pos_(pos),
      found_(std::move(found)),
      expected_(std::move(expected)) {}

DuplicateLabelError::DuplicateLabelError(const std::string& label)
    : std::runtime_error("duplicate observation label '" + label + "'"), label_(label) {}

StateCollection negate_each(const StateCollection& c) {
  StateCollection out = c;
  for (auto& s : out.states) {
    s.polarity = s.polarity == Polarity::Positive ? Polarity::Negative : Polarity::Positive;
  }
  return out;
}

Behaviour make_dependence(DependenceKind k, StateCollection cause, StateCollection effect) {
  return Behaviour{Dependence{k, std::move(cause), std::move(effect)}};
}

AgentState make_state(std::string agent, std::optional<std::string> attribute, Polarity pol) {
  AgentState s;
  s.agent = Ident(std::move(agent));
  if (attribute) s.attribute = Ident(*attribute);
  s.polarity = pol;
  return s;
}

namespace {

void collect_labels(const std::vector<Behaviour>& body, std::set<std::string>& seen) {
  for (const auto& b : body) {
    if (const auto* obs = std::get_if<ObservationB>(&b.node)) {
      if (!seen.insert(obs->label.text).second) throw DuplicateLabelError(obs->label.text);
    } else if (const auto* comp = std::get_if<CompartmentB>(&b.node)) {
      collect_labels(comp->body, seen);
    } else if (const auto* ctx = std::get_if<ContextB>(&b.node)) {
      collect_labels(ctx->body, seen);
    }
  }
}

void add_var(std::set<Ident>& out, const Ident& id) {
  if (id.is_variable()) out.insert(id);
}

void collect_state_vars(const StateCollection& c, std::set<Ident>& out) {
  for (const auto& s : c.states) {
    for (const auto& p : s.path) add_var(out, p);
    add_var(out, s.agent);
    if (s.attribute) add_var(out, *s.attribute);
  }
}

void collect_vars(const std::vector<Behaviour>& body, std::set<Ident>& out) {
  for (const auto& b : body) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, Dependence>) {
            collect_state_vars(n.cause, out);
            collect_state_vars(n.effect, out);
          } else if constexpr (std::is_same_v<T, CompartmentB>) {
            add_var(out, n.name);
            collect_vars(n.body, out);
          } else if constexpr (std::is_same_v<T, ContextB>) {
            for (const auto& k : n.contexts) add_var(out, k);
            collect_vars(n.body, out);
          } else if constexpr (std::is_same_v<T, ObservationB>) {
            add_var(out, n.label);
            collect_state_vars(n.states, out);
          } else {
            for (const auto& a : n.agents) add_var(out, a);
            for (const auto& r : n.relations) {
              add_var(out, r.left);
              if (r.right) add_var(out, *r.right);
            }
          }
        },
        b.node);
  }
}

}  // namespace

void check_unique_labels(const Program& p) {
  std::set<std::string> seen;
  collect_labels(p.behaviours, seen);
}

std::set<Ident> free_variables(const Program& p) {
  std::set<Ident> out;
  collect_vars(p.behaviours, out);
  return out;
}

}  // namespace gubs
