#pragma once

#include <string>

#include "imcv/dra.hpp"
#include "imcv/reach.hpp"

namespace imcv {

enum class Cmp { le, lt, ge, gt };

Cmp parse_cmp(const std::string& text);  // "<=", "<", ">=", ">"
const char* to_string(Cmp c);

/// Probabilistic specification P_{cmp p_sat}[Psi] with Psi given as a DRA.
struct Spec {
  Cmp comparison = Cmp::ge;
  double p_sat = 0.0;
  Dra dra;
};

/// Decision rule on a satisfaction interval: undecided iff p_sat lies in the
/// open interval for {<=, >=} or in the closed interval for {<, >}; otherwise
/// yes iff the whole interval satisfies the comparison, else no.
StateClass classify(double p_min, double p_max, Cmp cmp, double p_sat);

struct VerificationResult {
  std::vector<double> p_min, p_max;      // per IMC state
  std::vector<StateClass> classes;       // per IMC state
  ProductImc product;                    // pruned to reachable states
  ComponentSets components;
  ExtremalMcs extremal;
  std::vector<std::string> warnings;
};

/// Full single-pass verification: product construction, reachable-state
/// pruning, component analysis, extremal bound assembly, classification.
VerificationResult verify(const Imc& imc, const Dra& dra, Cmp cmp, double p_sat,
                          double tol = 1e-9, std::size_t max_iters = 100000);

/// Synchronized product, unpruned (m*k states).
ProductImc make_product(const Imc& imc, const Dra& dra);

}  // namespace imcv
