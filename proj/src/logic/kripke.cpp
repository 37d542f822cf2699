#include <sstream>

#include "gubs/logic.hpp"

namespace gubs::logic {

KripkeModel::KripkeModel(int worlds) : worlds_(worlds) {
  if (worlds < 0) throw InvalidModel("negative world count");
}

void KripkeModel::add_edge(const ContextSet& k, World from, World to) {
  if (!has_world(from)) throw UnknownWorld(from);
  if (!has_world(to)) throw UnknownWorld(to);
  relations_[k].insert({from, to});
}

void KripkeModel::set_prop(const Prop& p, World w, bool value) {
  if (!has_world(w)) throw UnknownWorld(w);
  if (value) {
    valuation_[p].insert(w);
  } else if (auto it = valuation_.find(p); it != valuation_.end()) {
    it->second.erase(w);
    if (it->second.empty()) valuation_.erase(it);
  }
}

void KripkeModel::set_nominal(const std::string& label, World w) {
  if (!has_world(w)) throw UnknownWorld(w);
  auto [it, fresh] = nominals_.emplace(label, w);
  if (!fresh && it->second != w) {
    throw InvalidModel("nominal " + label + " already names world " + std::to_string(it->second));
  }
}

bool KripkeModel::holds(const Prop& p, World w) const {
  auto it = valuation_.find(p);
  return it != valuation_.end() && it->second.count(w) > 0;
}

std::optional<World> KripkeModel::nominal(const std::string& label) const {
  auto it = nominals_.find(label);
  if (it == nominals_.end()) return std::nullopt;
  return it->second;
}

bool KripkeModel::related(const ContextSet& k, World from, World to) const {
  auto it = relations_.find(k);
  return it != relations_.end() && it->second.count({from, to}) > 0;
}

std::string KripkeModel::dump() const {
  std::ostringstream os;
  os << "worlds " << worlds_ << "\n";
  for (const auto& [k, pairs] : relations_) {
    os << "R<" << k.text() << ">";
    for (const auto& [a, b] : pairs) os << " " << a << "->" << b;
    os << "\n";
  }
  for (const auto& [p, ws] : valuation_) {
    os << p.name() << " @";
    for (World w : ws) os << " " << w;
    os << "\n";
  }
  for (const auto& [n, w] : nominals_) os << "nom " << n << " = " << w << "\n";
  return os.str();
}

namespace {

bool eval(const KripkeModel& m, World w, const Formula& f) {
  switch (f.op()) {
    case Op::Top: return true;
    case Op::Prop: return m.holds(f.prop(), w);
    case Op::Nom: return m.nominal(f.nominal()) == w;
    case Op::Not: return !eval(m, w, f.lhs());
    case Op::And: return eval(m, w, f.lhs()) && eval(m, w, f.rhs());
    case Op::Or: return eval(m, w, f.lhs()) || eval(m, w, f.rhs());
    case Op::Implies: return !eval(m, w, f.lhs()) || eval(m, w, f.rhs());
    case Op::At: {
      auto v = m.nominal(f.nominal());
      return v && eval(m, *v, f.lhs());
    }
    case Op::Diamond:
    case Op::Box:
    case Op::DiamondConv:
    case Op::BoxConv: {
      bool forward = f.op() == Op::Diamond || f.op() == Op::Box;
      bool universal = f.op() == Op::Box || f.op() == Op::BoxConv;
      auto it = m.relations().find(f.contexts());
      if (it == m.relations().end()) return universal;
      for (const auto& [a, b] : it->second) {
        World src = forward ? a : b;
        World dst = forward ? b : a;
        if (src != w) continue;
        bool v = eval(m, dst, f.lhs());
        if (universal && !v) return false;
        if (!universal && v) return true;
      }
      return universal;
    }
    case Op::Always:
      for (World v = 0; v < m.world_count(); ++v) {
        if (!eval(m, v, f.lhs())) return false;
      }
      return true;
    case Op::Exists:
      for (World v = 0; v < m.world_count(); ++v) {
        if (eval(m, v, f.lhs())) return true;
      }
      return false;
  }
  return false;
}

}  // namespace

bool evaluate(const KripkeModel& m, World w, const Formula& f) {
  if (!m.has_world(w)) throw UnknownWorld(w);
  return eval(m, w, f);
}

bool validates(const KripkeModel& m, const Formula& f) {
  for (World w = 0; w < m.world_count(); ++w) {
    if (!eval(m, w, f)) return false;
  }
  return true;
}

std::vector<Formula> modal_theory(const KripkeModel& m, const std::vector<Formula>& fs) {
  std::vector<Formula> out;
  for (const auto& f : fs) {
    if (validates(m, f)) out.push_back(f);
  }
  return out;
}

}  // namespace gubs::logic
