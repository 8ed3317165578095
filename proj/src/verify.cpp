#include "imcv/verify.hpp"

#include <algorithm>
#include <cmath>

#include "imcv/errors.hpp"

namespace imcv {

Cmp parse_cmp(const std::string& text) {
  if (text == "<=") return Cmp::le;
  if (text == "<") return Cmp::lt;
  if (text == ">=") return Cmp::ge;
  if (text == ">") return Cmp::gt;
  throw ConfigError("unknown comparison operator: '" + text + "'");
}

const char* to_string(Cmp c) {
  switch (c) {
    case Cmp::le: return "<=";
    case Cmp::lt: return "<";
    case Cmp::ge: return ">=";
    default: return ">";
  }
}

StateClass classify(double p_min, double p_max, Cmp cmp, double p_sat) {
  bool strict = cmp == Cmp::lt || cmp == Cmp::gt;
  bool undecided = strict ? (p_min <= p_sat && p_sat <= p_max)
                          : (p_min < p_sat && p_sat < p_max);
  if (undecided) return StateClass::undecided;
  bool yes = false;
  switch (cmp) {
    case Cmp::le: yes = p_max <= p_sat; break;
    case Cmp::lt: yes = p_max < p_sat; break;
    case Cmp::ge: yes = p_min >= p_sat; break;
    case Cmp::gt: yes = p_min > p_sat; break;
  }
  return yes ? StateClass::yes : StateClass::no;
}

ProductImc make_product(const Imc& imc, const Dra& dra) { return build_product(imc, dra); }

VerificationResult verify(const Imc& imc, const Dra& dra, Cmp cmp, double p_sat,
                          double tol, std::size_t max_iters) {
  imc.trans.validate_feasibility();
  VerificationResult r;
  r.product = prune_unreachable(build_product(imc, dra));
  r.components = find_components(r.product, find_bsccs(r.product));
  r.extremal = extremal_product_mcs(r.product, r.components, tol, max_iters);

  const std::size_t m = imc.n_states();
  r.p_min.resize(m);
  r.p_max.resize(m);
  r.classes.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    std::uint32_t q0 = r.product.initial[j];
    double hi = r.extremal.upper.values.v[q0];
    double lo = 1.0 - r.extremal.lower.values.v[q0];
    if (hi < -1e-7 || hi > 1.0 + 1e-7 || lo < -1e-7 || lo > 1.0 + 1e-7)
      r.warnings.push_back("state " + std::to_string(j) +
                           ": bound clamped by more than 1e-7");
    hi = std::clamp(hi, 0.0, 1.0);
    lo = std::clamp(lo, 0.0, 1.0);
    if (lo > hi) {
      if (lo - hi > 1e-7)
        r.warnings.push_back("state " + std::to_string(j) +
                             ": p_min exceeded p_max by more than 1e-7");
      lo = hi;
    }
    r.p_min[j] = lo;
    r.p_max[j] = hi;
    r.classes[j] = classify(lo, hi, cmp, p_sat);
  }
  return r;
}

}  // namespace imcv
