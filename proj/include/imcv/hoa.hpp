#pragma once

#include <string>

#include "imcv/dra.hpp"

namespace imcv {

/// Parse a HOA v1 automaton with state-based acceptance whose acceptance
/// condition is a disjunction of Fin(e) & Inf(f) terms (Rabin pairs; a bare
/// Inf(f) disjunct is accepted as a pair with empty E). Determinism and
/// completeness are verified over all valuations. Throws ParseError.
Dra parse_hoa(const std::string& text);

/// Canonical HOA v1 text for a DRA; parse(print(parse(x))) is the identity
/// on the automaton structure.
std::string print_hoa(const Dra& dra);

/// Native JSON DRA: {"ap": [names], "start": s, "states": [{"edges":
/// [{"guard": "...", "to": t}]}], "pairs": [{"fin": [..], "inf": [..]}]}.
Dra parse_dra_json(const std::string& text);

/// Load by extension: .hoa -> HOA v1, .json -> native JSON.
Dra load_dra(const std::string& path);

}  // namespace imcv
