#include "imcv/hoa.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "imcv/errors.hpp"

namespace imcv {

namespace {

std::string strip_comments(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (i + 1 < text.size() && text[i] == '/' && text[i + 1] == '*') {
      std::size_t end = text.find("*/", i + 2);
      if (end == std::string::npos) throw ParseError("hoa: unterminated comment");
      i = end + 2;
    } else {
      out.push_back(text[i++]);
    }
  }
  return out;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// Acceptance condition mini-parser: Fin(k), Inf(k), &, |, parentheses.
struct AccNode {
  enum class Kind { fin, inf, conj, disj } kind;
  int set = -1;
  std::vector<AccNode> kids;
};

struct AccParser {
  const std::string& s;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  bool eat_word(const char* w) {
    skip_ws();
    std::size_t len = std::string(w).size();
    if (s.compare(pos, len, w) == 0) {
      pos += len;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& what) {
    throw ParseError("acceptance '" + s + "': " + what);
  }

  AccNode expr() {
    AccNode n = term();
    while (eat('|')) {
      AccNode d{AccNode::Kind::disj};
      d.kids.push_back(std::move(n));
      d.kids.push_back(term());
      n = std::move(d);
    }
    return n;
  }
  AccNode term() {
    AccNode n = factor();
    while (eat('&')) {
      AccNode c{AccNode::Kind::conj};
      c.kids.push_back(std::move(n));
      c.kids.push_back(factor());
      n = std::move(c);
    }
    return n;
  }
  AccNode factor() {
    skip_ws();
    if (eat('(')) {
      AccNode n = expr();
      if (!eat(')')) fail("missing ')'");
      return n;
    }
    bool is_fin = eat_word("Fin");
    bool is_inf = !is_fin && eat_word("Inf");
    if (!is_fin && !is_inf) fail("only Fin(k) and Inf(k) atoms are supported");
    if (!eat('(')) fail("expected '('");
    skip_ws();
    if (pos < s.size() && s[pos] == '!') fail("negated acceptance sets are not supported");
    int v = 0;
    bool any = false;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      v = v * 10 + (s[pos++] - '0');
      any = true;
    }
    if (!any) fail("expected set index");
    if (!eat(')')) fail("missing ')'");
    AccNode n{is_fin ? AccNode::Kind::fin : AccNode::Kind::inf};
    n.set = v;
    return n;
  }
};

void collect_disjuncts(const AccNode& n, std::vector<const AccNode*>& out) {
  if (n.kind == AccNode::Kind::disj) {
    collect_disjuncts(n.kids[0], out);
    collect_disjuncts(n.kids[1], out);
  } else {
    out.push_back(&n);
  }
}

void collect_conjuncts(const AccNode& n, std::vector<const AccNode*>& out) {
  if (n.kind == AccNode::Kind::conj) {
    collect_conjuncts(n.kids[0], out);
    collect_conjuncts(n.kids[1], out);
  } else {
    out.push_back(&n);
  }
}

/// Rabin pairs as (fin set index, inf set index); -1 fin for a bare Inf.
std::vector<std::pair<int, int>> rabin_shape(const std::string& formula) {
  AccParser p{formula};
  AccNode root = p.expr();
  p.skip_ws();
  if (p.pos != formula.size()) p.fail("trailing input");

  std::vector<const AccNode*> disjuncts;
  collect_disjuncts(root, disjuncts);
  std::vector<std::pair<int, int>> pairs;
  for (const AccNode* d : disjuncts) {
    std::vector<const AccNode*> conj;
    collect_conjuncts(*d, conj);
    int fin = -1, inf = -1;
    for (const AccNode* a : conj) {
      if (a->kind == AccNode::Kind::fin) {
        if (fin >= 0) throw ParseError("unsupported acceptance: two Fin in one disjunct");
        fin = a->set;
      } else if (a->kind == AccNode::Kind::inf) {
        if (inf >= 0) throw ParseError("unsupported acceptance: two Inf in one disjunct");
        inf = a->set;
      } else {
        throw ParseError("unsupported acceptance: nested disjunction");
      }
    }
    if (inf < 0)
      throw ParseError("unsupported acceptance: not a disjunction of Fin&Inf pairs");
    pairs.emplace_back(fin, inf);
  }
  if (pairs.empty()) throw ParseError("unsupported acceptance: no Rabin pairs");
  return pairs;
}

}  // namespace

Dra parse_hoa(const std::string& raw) {
  std::string text = strip_comments(raw);
  std::istringstream in(text);
  std::string line;

  std::optional<int> n_states;
  std::optional<std::uint32_t> start;
  std::optional<int> n_acc_sets;
  std::string acc_formula;
  std::vector<std::string> ap_names;
  bool saw_hoa = false, in_body = false, saw_end = false;

  struct StateData {
    bool seen = false;
    std::vector<int> acc_sets;
    std::vector<DraEdge> edges;
  };
  std::vector<StateData> states;
  int current_state = -1;

  auto ensure_state = [&](int idx) -> StateData& {
    if (idx < 0) throw ParseError("hoa: negative state index");
    if (static_cast<std::size_t>(idx) >= states.size()) states.resize(idx + 1);
    return states[idx];
  };

  auto parse_acc_sigs = [&](std::string s, int state_idx) {
    s = trim(s);
    if (s.empty()) return;
    if (s.front() != '{' || s.back() != '}')
      throw ParseError("hoa: malformed acceptance signature");
    std::istringstream sig(s.substr(1, s.size() - 2));
    int v;
    while (sig >> v) ensure_state(state_idx).acc_sets.push_back(v);
  };

  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line == "--BODY--") {
      if (!saw_hoa) throw ParseError("hoa: missing 'HOA: v1' header");
      in_body = true;
      continue;
    }
    if (line == "--END--") {
      saw_end = true;
      break;
    }
    if (line == "--ABORT--") throw ParseError("hoa: aborted stream");

    if (!in_body) {
      std::size_t colon = line.find(':');
      if (colon == std::string::npos) throw ParseError("hoa: malformed header line: " + line);
      std::string key = trim(line.substr(0, colon));
      std::string value = trim(line.substr(colon + 1));
      if (key == "HOA") {
        if (value != "v1") throw ParseError("hoa: unsupported version '" + value + "'");
        saw_hoa = true;
      } else if (key == "States") {
        n_states = std::stoi(value);
      } else if (key == "Start") {
        if (start.has_value()) throw ParseError("hoa: multiple Start headers");
        if (value.find('&') != std::string::npos || value.find(' ') != std::string::npos)
          throw ParseError("hoa: exactly one start state required");
        start = static_cast<std::uint32_t>(std::stoul(value));
      } else if (key == "AP") {
        std::istringstream ap(value);
        int count;
        ap >> count;
        std::string rest;
        std::getline(ap, rest);
        std::size_t i = 0;
        while (i < rest.size()) {
          if (rest[i] == '"') {
            std::size_t end = rest.find('"', i + 1);
            if (end == std::string::npos) throw ParseError("hoa: unterminated AP name");
            ap_names.push_back(rest.substr(i + 1, end - i - 1));
            i = end + 1;
          } else {
            ++i;
          }
        }
        if (static_cast<int>(ap_names.size()) != count)
          throw ParseError("hoa: AP count does not match names");
      } else if (key == "Acceptance") {
        std::istringstream acc(value);
        int count;
        acc >> count;
        n_acc_sets = count;
        std::getline(acc, acc_formula);
        acc_formula = trim(acc_formula);
      }
      // acc-name:, tool:, name:, properties: are informational; ignored.
      continue;
    }

    // Body.
    if (line.rfind("State:", 0) == 0) {
      std::string rest = trim(line.substr(6));
      if (!rest.empty() && rest.front() == '[')
        throw ParseError("hoa: state labels (implicit edges) are not supported");
      // State: INDEX ["name"] [{sigs}]
      std::istringstream st(rest);
      int idx;
      if (!(st >> idx)) throw ParseError("hoa: malformed State line: " + line);
      std::string tail;
      std::getline(st, tail);
      tail = trim(tail);
      if (!tail.empty() && tail.front() == '"') {
        std::size_t end = tail.find('"', 1);
        if (end == std::string::npos) throw ParseError("hoa: unterminated state name");
        tail = trim(tail.substr(end + 1));
      }
      StateData& sd = ensure_state(idx);
      if (sd.seen) throw ParseError("hoa: duplicate State " + std::to_string(idx));
      sd.seen = true;
      current_state = idx;
      parse_acc_sigs(tail, idx);
      continue;
    }
    if (current_state < 0) throw ParseError("hoa: edge before any State line");
    if (line.front() != '[')
      throw ParseError("hoa: implicit edges are not supported (missing guard): " + line);
    std::size_t close = line.find(']');
    if (close == std::string::npos) throw ParseError("hoa: unterminated guard: " + line);
    std::string guard_text = line.substr(1, close - 1);
    std::string rest = trim(line.substr(close + 1));
    if (rest.find('{') != std::string::npos)
      throw ParseError("hoa: transition-based acceptance marks are not supported");
    if (rest.find('&') != std::string::npos)
      throw ParseError("hoa: universal branching is not supported");
    std::istringstream tgt(rest);
    int target;
    if (!(tgt >> target)) throw ParseError("hoa: malformed edge target: " + line);
    states[current_state].edges.push_back(
        {Guard::parse(guard_text), static_cast<std::uint32_t>(target)});
  }

  if (!saw_hoa) throw ParseError("hoa: missing 'HOA: v1' header");
  if (!saw_end) throw ParseError("hoa: missing --END--");
  if (!start.has_value()) throw ParseError("hoa: missing Start header");
  if (acc_formula.empty()) throw ParseError("hoa: missing Acceptance header");
  if (n_states.has_value() && static_cast<std::size_t>(*n_states) < states.size())
    throw ParseError("hoa: more states in body than declared");
  if (n_states.has_value()) states.resize(*n_states);
  for (std::size_t i = 0; i < states.size(); ++i)
    if (!states[i].seen)
      throw ParseError("hoa: state " + std::to_string(i) + " missing from body");

  auto shape = rabin_shape(acc_formula);
  Dra dra;
  dra.ap_names = ap_names;
  dra.initial = *start;
  dra.edges.resize(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) dra.edges[i] = std::move(states[i].edges);
  for (auto [fin, inf] : shape) {
    if (n_acc_sets.has_value() && (fin >= *n_acc_sets || inf >= *n_acc_sets))
      throw ParseError("hoa: acceptance set index out of declared range");
    RabinPair pair;
    for (std::size_t q = 0; q < states.size(); ++q) {
      const auto& sets = states[q].acc_sets;
      if (fin >= 0 && std::find(sets.begin(), sets.end(), fin) != sets.end())
        pair.e_states.push_back(static_cast<std::uint32_t>(q));
      if (std::find(sets.begin(), sets.end(), inf) != sets.end())
        pair.f_states.push_back(static_cast<std::uint32_t>(q));
    }
    dra.pairs.push_back(std::move(pair));
  }
  finalize_dra(dra);
  return dra;
}

std::string print_hoa(const Dra& dra) {
  std::ostringstream out;
  out << "HOA: v1\n";
  out << "States: " << dra.n_states() << "\n";
  out << "Start: " << dra.initial << "\n";
  out << "AP: " << dra.ap_names.size();
  for (const auto& name : dra.ap_names) out << " \"" << name << "\"";
  out << "\n";
  out << "acc-name: Rabin " << dra.pairs.size() << "\n";
  out << "Acceptance: " << 2 * dra.pairs.size() << " ";
  for (std::size_t i = 0; i < dra.pairs.size(); ++i) {
    if (i) out << " | ";
    out << "Fin(" << 2 * i << ") & Inf(" << 2 * i + 1 << ")";
  }
  out << "\n--BODY--\n";
  for (std::size_t q = 0; q < dra.n_states(); ++q) {
    std::vector<int> sigs;
    for (std::size_t i = 0; i < dra.pairs.size(); ++i) {
      const auto& p = dra.pairs[i];
      if (std::find(p.e_states.begin(), p.e_states.end(), q) != p.e_states.end())
        sigs.push_back(static_cast<int>(2 * i));
      if (std::find(p.f_states.begin(), p.f_states.end(), q) != p.f_states.end())
        sigs.push_back(static_cast<int>(2 * i + 1));
    }
    out << "State: " << q;
    if (!sigs.empty()) {
      out << " {";
      for (std::size_t i = 0; i < sigs.size(); ++i) out << (i ? " " : "") << sigs[i];
      out << "}";
    }
    out << "\n";
    for (const auto& e : dra.edges[q])
      out << "[" << e.guard.to_string() << "] " << e.target << "\n";
  }
  out << "--END--\n";
  return out.str();
}

Dra parse_dra_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("dra json: ") + e.what());
  }
  try {
    Dra dra;
    for (const auto& name : j.at("ap")) dra.ap_names.push_back(name.get<std::string>());
    dra.initial = j.at("start").get<std::uint32_t>();
    for (const auto& st : j.at("states")) {
      std::vector<DraEdge> edges;
      for (const auto& e : st.at("edges"))
        edges.push_back({Guard::parse(e.at("guard").get<std::string>()),
                         e.at("to").get<std::uint32_t>()});
      dra.edges.push_back(std::move(edges));
    }
    for (const auto& p : j.at("pairs")) {
      RabinPair pair;
      for (const auto& q : p.at("fin")) pair.e_states.push_back(q.get<std::uint32_t>());
      for (const auto& q : p.at("inf")) pair.f_states.push_back(q.get<std::uint32_t>());
      dra.pairs.push_back(std::move(pair));
    }
    finalize_dra(dra);
    return dra;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("dra json: ") + e.what());
  }
}

Dra load_dra(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open automaton file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json")
    return parse_dra_json(buf.str());
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".hoa")
    return parse_hoa(buf.str());
  throw ConfigError("unknown automaton format (expected .hoa or .json): " + path);
}

}  // namespace imcv
