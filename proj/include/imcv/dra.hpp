#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "imcv/geometry.hpp"

namespace imcv {

/// Boolean formula over atomic-proposition indices, evaluated on valuation
/// bitmasks (bit i set = AP i holds).
class Guard {
 public:
  static Guard ap(int index);
  static Guard truth(bool value);
  static Guard negate(Guard g);
  static Guard conj(Guard a, Guard b);
  static Guard disj(Guard a, Guard b);
  /// Parse "!, &, |, t, f, (), AP indices" with ! > & > | precedence.
  static Guard parse(const std::string& text);

  bool eval(std::uint32_t valuation) const;
  std::string to_string() const;

 private:
  enum class Op { ap, tt, ff, neg, conj, disj };
  Op op_ = Op::tt;
  int ap_ = -1;
  std::vector<Guard> kids_;
};

struct DraEdge {
  Guard guard;
  std::uint32_t target;
};

struct RabinPair {
  std::vector<std::uint32_t> e_states;  // visit finitely often
  std::vector<std::uint32_t> f_states;  // visit infinitely often

  bool operator==(const RabinPair&) const = default;
};

/// Deterministic, complete Rabin automaton over valuations of named APs.
struct Dra {
  std::vector<std::string> ap_names;
  std::uint32_t initial = 0;
  std::vector<std::vector<DraEdge>> edges;  // per state
  std::vector<RabinPair> pairs;
  /// Compiled transition table: table[s][valuation] = target.
  std::vector<std::vector<std::uint32_t>> table;

  std::size_t n_states() const { return edges.size(); }
  std::size_t n_valuations() const { return std::size_t{1} << ap_names.size(); }
  std::uint32_t step(std::uint32_t s, std::uint32_t valuation) const {
    return table[s][valuation];
  }
  /// Valuation bitmask of a proposition set (unknown names -> error).
  std::uint32_t valuation_of(const PropSet& props) const;
};

/// Compiles the transition table and verifies determinism and completeness
/// over all valuations (AP count capped at 16). Throws ParseError.
void finalize_dra(Dra& dra);

/// Semantic equality: same APs, initial state, transition tables and pairs.
bool same_automaton(const Dra& a, const Dra& b);

}  // namespace imcv
