#pragma once

#include <string>
#include <vector>

#include "vacone/problem.hpp"
#include "vacone/stationarity.hpp"

namespace vacone {

struct PenaltyConfig {
  /// Strictly increasing penalty parameters.
  std::vector<double> ks{1, 1e1, 1e2, 1e3, 1e4, 1e5, 1e6};
  /// Inner tolerance τ_j = max(floor, min(base / k_j, cap)).
  double tol_base = 1e-2;
  double tol_cap = 1e-2;
  double tol_floor = 1e-9;
  std::size_t max_iter = 2000;
  /// Iterates are kept in the ball of this radius around the reference point.
  double trust_radius = 1.0;
  /// Extra starts x_ref ± 10⁻² e_i (first `multistart` of them) per k.
  std::size_t multistart = 4;
  /// Q(k): keep x ∈ C exactly (projected gradient) and penalize only G(x) ∈ K.
  bool decoupled = false;

  double inner_tol(double k) const;
  /// Schedule 10^0 .. kmax (powers of ten, kmax included when not a power).
  static std::vector<double> schedule_up_to(double kmax);
};

struct PenaltyEval {
  double value = 0;
  DVec gradient;
  DVec proj_K;
  DVec proj_C;
  std::size_t k_branch = 0;
  std::size_t c_branch = 0;
};

/// θ_k(x) = f(x) + (k/2)dist²(G(x),K) + (k/2)dist²(x,C) + ½‖x − x_ref‖² and its
/// almost-everywhere gradient. The C term is dropped when `include_C` is false.
PenaltyEval penalty_objective(const ProblemInstance& p, double k, const DVec& x_ref, const DVec& x,
                              bool include_C = true);

struct SubproblemResult {
  DVec x;
  double value = 0;
  /// ‖∇θ_k(x)‖ (or the projected-gradient step length in the decoupled case).
  double stationarity = 0;
  std::size_t iterations = 0;
  bool converged = false;
  std::string note;
};

/// BFGS with Armijo backtracking (10⁻⁴, halving) from x0 and the configured
/// extra starts; the best τ-stationary point by value is kept.
SubproblemResult solve_subproblem(const ProblemInstance& p, double k, const DVec& x_ref, const DVec& x0, double tau,
                                  const PenaltyConfig& cfg = {});

/// Penalty trace along the k schedule with warm starts. Each record holds
/// y_k = G(x_k) − Π_K(G(x_k)), λ_k = k y_k, ν_k = k(x_k − Π_C(x_k)) (decoupled:
/// the proximal normal of C), ε_k = x̄ − x_k and the residual
/// ‖ε_k − ∇f(x_k) − G'(x_k)ᵀλ_k − ν_k‖.
AMTrace am_trace(const ProblemInstance& p, const Vec& xbar, const PenaltyConfig& cfg = {});

/// Header k,x1..xn,y_norm,lambda_norm,eps_norm,branch; 17 significant digits.
std::string trace_csv(const AMTrace& t);

/// λ ∈ N(S, π) for the block `branch` of S, checked exactly after converting
/// λ and π to rationals: constraints active at π within 10⁻⁹ and an L1
/// residual of at most 10⁻⁸(1 + ‖λ‖₁).
bool verify_normal(const PolyUnion& s, std::size_t branch, const DVec& pi, const DVec& lambda);

}  // namespace vacone
