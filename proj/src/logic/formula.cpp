#include <algorithm>
#include <functional>

#include "gubs/logic.hpp"

namespace gubs::logic {

std::string Prop::name() const {
  std::string out;
  for (const auto& c : path) out += c + ".";
  out += agent;
  if (attribute) out += "_" + *attribute;
  return out;
}

std::string ContextSet::text() const {
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += ",";
    out += n;
  }
  return out;
}

struct Formula::Node {
  Op op = Op::Top;
  Prop prop;
  std::string nominal;
  ContextSet contexts;
  Formula lhs;
  Formula rhs;
  mutable std::string canonical;  // lazily filled
};

namespace {

const Formula& top_singleton();

}  // namespace

Formula::Formula() : node_(nullptr) {}

Formula Formula::top() { return Formula(); }
Formula Formula::bottom() { return negation(top()); }

Formula Formula::prop(Prop p) {
  auto n = std::make_shared<Node>();
  n->op = Op::Prop;
  n->prop = std::move(p);
  return Formula(std::move(n));
}

Formula Formula::nom(std::string label) {
  auto n = std::make_shared<Node>();
  n->op = Op::Nom;
  n->nominal = std::move(label);
  return Formula(std::move(n));
}

namespace {

template <typename Node>
std::shared_ptr<Node> unary(Op op, const Formula& f) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = f;
  return n;
}

}  // namespace

Formula Formula::negation(Formula f) { return Formula(unary<Node>(Op::Not, f)); }

Formula Formula::conj(Formula a, Formula b) {
  auto n = unary<Node>(Op::And, a);
  n->rhs = std::move(b);
  return Formula(std::move(n));
}

Formula Formula::disj(Formula a, Formula b) {
  auto n = unary<Node>(Op::Or, a);
  n->rhs = std::move(b);
  return Formula(std::move(n));
}

Formula Formula::implies(Formula a, Formula b) {
  auto n = unary<Node>(Op::Implies, a);
  n->rhs = std::move(b);
  return Formula(std::move(n));
}

Formula Formula::at(std::string label, Formula f) {
  auto n = unary<Node>(Op::At, f);
  n->nominal = std::move(label);
  return Formula(std::move(n));
}

#define GUBS_MODAL(fn, OPV)                             \
  Formula Formula::fn(ContextSet k, Formula f) {        \
    auto n = unary<Node>(OPV, f);                       \
    n->contexts = std::move(k);                         \
    return Formula(std::move(n));                       \
  }
GUBS_MODAL(diamond, Op::Diamond)
GUBS_MODAL(diamond_conv, Op::DiamondConv)
GUBS_MODAL(box, Op::Box)
GUBS_MODAL(box_conv, Op::BoxConv)
#undef GUBS_MODAL

Formula Formula::always(Formula f) { return Formula(unary<Node>(Op::Always, f)); }
Formula Formula::exists(Formula f) { return Formula(unary<Node>(Op::Exists, f)); }

Formula Formula::conj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return top();
  Formula acc = fs.back();
  for (std::size_t i = fs.size() - 1; i-- > 0;) acc = conj(fs[i], acc);
  return acc;
}

Op Formula::op() const { return node_ ? node_->op : Op::Top; }

namespace {
const Prop& empty_prop() {
  static const Prop p;
  return p;
}
const std::string& empty_string() {
  static const std::string s;
  return s;
}
const ContextSet& empty_contexts() {
  static const ContextSet k;
  return k;
}
const Formula& top_singleton() {
  static const Formula f;
  return f;
}
}  // namespace

const Prop& Formula::prop() const { return node_ ? node_->prop : empty_prop(); }
const std::string& Formula::nominal() const { return node_ ? node_->nominal : empty_string(); }
const ContextSet& Formula::contexts() const { return node_ ? node_->contexts : empty_contexts(); }
const Formula& Formula::lhs() const { return node_ ? node_->lhs : top_singleton(); }
const Formula& Formula::rhs() const { return node_ ? node_->rhs : top_singleton(); }

namespace {

void flatten(const Formula& f, Op op, std::vector<std::string>& out) {
  if (f.op() == op) {
    flatten(f.lhs(), op, out);
    flatten(f.rhs(), op, out);
  } else {
    out.push_back(f.canonical());
  }
}

std::string nary(const Formula& f, Op op, const char* sym) {
  std::vector<std::string> parts;
  flatten(f, op, parts);
  std::sort(parts.begin(), parts.end());
  std::string out = std::string(sym) + "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ", ";
    out += parts[i];
  }
  return out + ")";
}

std::string compute_canonical(const Formula& f) {
  switch (f.op()) {
    case Op::Top: return "T";
    case Op::Prop: return f.prop().name();
    case Op::Nom: return "nom(" + f.nominal() + ")";
    case Op::Not: return "~(" + f.lhs().canonical() + ")";
    case Op::And: return nary(f, Op::And, "&");
    case Op::Or: return nary(f, Op::Or, "|");
    case Op::Implies: return "->(" + f.lhs().canonical() + ", " + f.rhs().canonical() + ")";
    case Op::At: return "@" + f.nominal() + "(" + f.lhs().canonical() + ")";
    case Op::Diamond: return "<" + f.contexts().text() + ">(" + f.lhs().canonical() + ")";
    case Op::DiamondConv: return "<" + f.contexts().text() + ">-(" + f.lhs().canonical() + ")";
    case Op::Box: return "[" + f.contexts().text() + "](" + f.lhs().canonical() + ")";
    case Op::BoxConv: return "[" + f.contexts().text() + "]-(" + f.lhs().canonical() + ")";
    case Op::Always: return "A(" + f.lhs().canonical() + ")";
    case Op::Exists: return "E(" + f.lhs().canonical() + ")";
  }
  return "?";
}

}  // namespace

std::string Formula::canonical() const {
  if (!node_) return "T";
  if (node_->canonical.empty()) node_->canonical = compute_canonical(*this);
  return node_->canonical;
}

bool Formula::operator==(const Formula& o) const {
  if (node_ == o.node_) return true;
  return canonical() == o.canonical();
}

namespace {

void collect(const Formula& f, Vocabulary& v, int depth) {
  v.modal_depth = std::max(v.modal_depth, depth);
  switch (f.op()) {
    case Op::Top: return;
    case Op::Prop: v.props.insert(f.prop()); return;
    case Op::Nom: v.nominals.insert(f.nominal()); return;
    case Op::Not:
    case Op::Always:
    case Op::Exists: collect(f.lhs(), v, depth); return;
    case Op::And:
    case Op::Or:
    case Op::Implies:
      collect(f.lhs(), v, depth);
      collect(f.rhs(), v, depth);
      return;
    case Op::At:
      v.nominals.insert(f.nominal());
      collect(f.lhs(), v, depth);
      return;
    case Op::Diamond:
    case Op::DiamondConv:
    case Op::Box:
    case Op::BoxConv:
      v.keys.insert(f.contexts());
      collect(f.lhs(), v, depth + 1);
      return;
  }
}

}  // namespace

Vocabulary vocabulary(const Formula& f) {
  Vocabulary v;
  collect(f, v, 0);
  return v;
}

namespace {

Formula nnf_pos(const Formula& f);

Formula nnf_neg(const Formula& f) {
  using F = Formula;
  switch (f.op()) {
    case Op::Top:
    case Op::Prop:
    case Op::Nom: return F::negation(f);
    case Op::Not: return nnf_pos(f.lhs());
    case Op::And: return F::disj(nnf_neg(f.lhs()), nnf_neg(f.rhs()));
    case Op::Or: return F::conj(nnf_neg(f.lhs()), nnf_neg(f.rhs()));
    case Op::Implies: return F::conj(nnf_pos(f.lhs()), nnf_neg(f.rhs()));
    // ~@a p == @a ~p when a names a world; a nominal naming nothing makes
    // every @a false, so the negation is true there. Keep the exact dual:
    // ~@a p == ~E(a) | @a ~p.
    case Op::At:
      return F::disj(F::always(F::negation(F::nom(f.nominal()))),
                     F::at(f.nominal(), nnf_neg(f.lhs())));
    case Op::Diamond: return F::box(f.contexts(), nnf_neg(f.lhs()));
    case Op::DiamondConv: return F::box_conv(f.contexts(), nnf_neg(f.lhs()));
    case Op::Box: return F::diamond(f.contexts(), nnf_neg(f.lhs()));
    case Op::BoxConv: return F::diamond_conv(f.contexts(), nnf_neg(f.lhs()));
    case Op::Always: return F::exists(nnf_neg(f.lhs()));
    case Op::Exists: return F::always(nnf_neg(f.lhs()));
  }
  return f;
}

Formula nnf_pos(const Formula& f) {
  using F = Formula;
  switch (f.op()) {
    case Op::Top:
    case Op::Prop:
    case Op::Nom: return f;
    case Op::Not: return nnf_neg(f.lhs());
    case Op::And: return F::conj(nnf_pos(f.lhs()), nnf_pos(f.rhs()));
    case Op::Or: return F::disj(nnf_pos(f.lhs()), nnf_pos(f.rhs()));
    case Op::Implies: return F::disj(nnf_neg(f.lhs()), nnf_pos(f.rhs()));
    case Op::At: return F::at(f.nominal(), nnf_pos(f.lhs()));
    case Op::Diamond: return F::diamond(f.contexts(), nnf_pos(f.lhs()));
    case Op::DiamondConv: return F::diamond_conv(f.contexts(), nnf_pos(f.lhs()));
    case Op::Box: return F::box(f.contexts(), nnf_pos(f.lhs()));
    case Op::BoxConv: return F::box_conv(f.contexts(), nnf_pos(f.lhs()));
    case Op::Always: return F::always(nnf_pos(f.lhs()));
    case Op::Exists: return F::exists(nnf_pos(f.lhs()));
  }
  return f;
}

}  // namespace

Formula nnf(const Formula& f) { return nnf_pos(f); }

}  // namespace gubs::logic
