#include "imcv/dra.hpp"

#include <algorithm>

#include "imcv/errors.hpp"

namespace imcv {

Guard Guard::ap(int index) {
  Guard g;
  g.op_ = Op::ap;
  g.ap_ = index;
  return g;
}

Guard Guard::truth(bool value) {
  Guard g;
  g.op_ = value ? Op::tt : Op::ff;
  return g;
}

Guard Guard::negate(Guard g) {
  Guard out;
  out.op_ = Op::neg;
  out.kids_.push_back(std::move(g));
  return out;
}

Guard Guard::conj(Guard a, Guard b) {
  Guard out;
  out.op_ = Op::conj;
  out.kids_.push_back(std::move(a));
  out.kids_.push_back(std::move(b));
  return out;
}

Guard Guard::disj(Guard a, Guard b) {
  Guard out;
  out.op_ = Op::disj;
  out.kids_.push_back(std::move(a));
  out.kids_.push_back(std::move(b));
  return out;
}

bool Guard::eval(std::uint32_t valuation) const {
  switch (op_) {
    case Op::ap: return (valuation >> ap_) & 1u;
    case Op::tt: return true;
    case Op::ff: return false;
    case Op::neg: return !kids_[0].eval(valuation);
    case Op::conj: return kids_[0].eval(valuation) && kids_[1].eval(valuation);
    case Op::disj: return kids_[0].eval(valuation) || kids_[1].eval(valuation);
  }
  return false;
}

std::string Guard::to_string() const {
  switch (op_) {
    case Op::ap: return std::to_string(ap_);
    case Op::tt: return "t";
    case Op::ff: return "f";
    case Op::neg: return "!" + kids_[0].to_string();
    case Op::conj: return "(" + kids_[0].to_string() + " & " + kids_[1].to_string() + ")";
    case Op::disj: return "(" + kids_[0].to_string() + " | " + kids_[1].to_string() + ")";
  }
  return "f";
}

namespace {

struct GuardParser {
  const std::string& s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw ParseError("guard '" + s + "': " + what);
  }

  Guard expr() {
    Guard g = term();
    while (eat('|')) g = Guard::disj(std::move(g), term());
    return g;
  }
  Guard term() {
    Guard g = factor();
    while (eat('&')) g = Guard::conj(std::move(g), factor());
    return g;
  }
  Guard factor() {
    skip_ws();
    if (pos >= s.size()) fail("unexpected end");
    char c = s[pos];
    if (c == '!') {
      ++pos;
      return Guard::negate(factor());
    }
    if (c == '(') {
      ++pos;
      Guard g = expr();
      if (!eat(')')) fail("missing ')'");
      return g;
    }
    if (c == 't' || c == 'f') {
      ++pos;
      return Guard::truth(c == 't');
    }
    if (c >= '0' && c <= '9') {
      int v = 0;
      while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9')
        v = v * 10 + (s[pos++] - '0');
      return Guard::ap(v);
    }
    fail(std::string("unexpected character '") + c + "'");
  }
};

}  // namespace

Guard Guard::parse(const std::string& text) {
  GuardParser p{text};
  Guard g = p.expr();
  p.skip_ws();
  if (p.pos != text.size()) p.fail("trailing input");
  return g;
}

std::uint32_t Dra::valuation_of(const PropSet& props) const {
  std::uint32_t v = 0;
  for (const auto& name : props) {
    auto it = std::find(ap_names.begin(), ap_names.end(), name);
    if (it == ap_names.end())
      throw ModelError("proposition '" + name + "' is not an AP of the automaton");
    v |= 1u << (it - ap_names.begin());
  }
  return v;
}

void finalize_dra(Dra& dra) {
  if (dra.ap_names.size() > 16)
    throw ParseError("automata with more than 16 APs are not supported");
  if (dra.edges.empty()) throw ParseError("automaton has no states");
  if (dra.initial >= dra.n_states()) throw ParseError("initial state out of range");
  if (dra.pairs.empty()) throw ParseError("automaton has no Rabin pairs");
  for (const auto& p : dra.pairs) {
    for (auto q : p.e_states)
      if (q >= dra.n_states()) throw ParseError("Rabin pair state out of range");
    for (auto q : p.f_states)
      if (q >= dra.n_states()) throw ParseError("Rabin pair state out of range");
  }

  const std::size_t n_val = dra.n_valuations();
  dra.table.assign(dra.n_states(), std::vector<std::uint32_t>(n_val, 0));
  for (std::size_t s = 0; s < dra.n_states(); ++s) {
    for (std::uint32_t v = 0; v < n_val; ++v) {
      bool found = false;
      for (const auto& e : dra.edges[s]) {
        if (e.target >= dra.n_states())
          throw ParseError("edge target out of range in state " + std::to_string(s));
        if (!e.guard.eval(v)) continue;
        if (found)
          throw ParseError("nondeterminism: two guards true in state " +
                           std::to_string(s) + " for valuation " + std::to_string(v));
        dra.table[s][v] = e.target;
        found = true;
      }
      if (!found)
        throw ParseError("incompleteness: no guard true in state " +
                         std::to_string(s) + " for valuation " + std::to_string(v));
    }
  }
}

bool same_automaton(const Dra& a, const Dra& b) {
  auto sorted = [](std::vector<std::uint32_t> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  };
  if (a.ap_names != b.ap_names || a.initial != b.initial || a.table != b.table)
    return false;
  if (a.pairs.size() != b.pairs.size()) return false;
  for (std::size_t i = 0; i < a.pairs.size(); ++i) {
    if (sorted(a.pairs[i].e_states) != sorted(b.pairs[i].e_states)) return false;
    if (sorted(a.pairs[i].f_states) != sorted(b.pairs[i].f_states)) return false;
  }
  return true;
}

}  // namespace imcv
