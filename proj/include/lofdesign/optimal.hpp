#pragma once

#include <vector>

#include "lofdesign/measures.hpp"
#include "lofdesign/weight.hpp"

namespace lofd {

/// nu_i = 1/2 at the two endpoints, 1 at interior extremal points.
std::vector<double> nu_weights(int k);

/// Kiefer-Wolfowitz e_k-optimal design: mass nu_i / (k - 1) at each extremal
/// point of T_{k-1}.
DesignMeasure kw_design(int k);

/// q_i = nu_i / (2(k-1)) * sum_{j=0}^{2k-3} cos(j (k-1-i) pi / (k-1)) * int T_j v dx.
std::vector<double> q_vector(int k, const WeightFunction& v);

/// Largest efficiency for which the explicit construction keeps every atom
/// mass nonnegative: min over q_i > 1e-14 of nu_i / ((k-1) q_i), capped at 1.
double alpha0(int k, const WeightFunction& v);

struct ConstructionReport {
  int k = 0;
  double r = 0.0;
  std::vector<double> q;
  std::vector<double> p;  // absolute atom masses, one per extremal point, clamped at 0
  double alpha0 = 0.0;
  DesignMeasure design;
};

/// e_k-optimal design among designs with LOF efficiency at least r:
/// r v.uniform + sum p_i delta_{x_i}, p_i = nu_i/(k-1) - r q_i. Atoms with
/// p_i <= 1e-12 are left out of the design. Throws InfeasibleEfficiencyError
/// when r > alpha0 + 1e-12.
ConstructionReport construct(int k, double r, const WeightFunction& v);

}  // namespace lofd
