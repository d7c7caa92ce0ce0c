#pragma once
#include <cstdint>
#include <functional>
#include <vector>

#include "patkit/filter.hpp"
#include "patkit/forward.hpp"

namespace patkit {

// Matrix-free linear map with transpose; the solvers only see this, so tests
// can feed small dense matrices through the same code paths.
struct LinearMap {
  int rows = 0, cols = 0;
  std::function<void(const double*, double*)> mul;   // y = A x
  std::function<void(const double*, double*)> tmul;  // x = A' y
};

// The measurement model used by the pipelines: detector low-pass composed
// with the wave operator. Pass nullptr to skip the filter.
LinearMap make_system_map(const ForwardOperator& op, const FilterSpec* filter);

// Largest eigenvalue of A'A (the squared operator norm) by power iteration
// with a seeded start; the Rayleigh history is non-decreasing.
struct NormEstimate {
  double value = 0.0;
  std::vector<double> rayleigh_history;
};
NormEstimate estimate_operator_norm(const LinearMap& a, int iters, uint64_t seed);

struct TikhonovConfig {
  double lambda = 0.0;
  int max_iters = 500;
  double tol = 1e-8;  // on the normal-equation residual, relative to |A'g|
};

struct L1PosConfig {
  double mu = 0.0;
  int max_iters = 500;
  double step_size = 0.0;  // <= 0 requests 1/(1.05 L) from a norm estimate
  double tol = 1e-7;       // fixed-point residual, relative
  bool restart = true;
  int norm_iters = 60;
  uint64_t norm_seed = 977;
};

struct SolveLog {
  std::vector<double> residuals;   // per accepted iterate
  std::vector<double> objectives;  // l1pos only
  bool converged = false;
  int iterations = 0;
  double verified_residual = 0.0;  // recomputed from scratch after the solve
  double step_size = 0.0;          // l1pos only
};

// Normal equations (A'A + lambda I) x = A'g solved with the conjugate
// residual iteration, whose residual norms are non-increasing by
// construction (plain conjugate gradients does not guarantee that for the
// residual 2-norm, and the log is asserted monotone downstream).
std::vector<double> solve_tikhonov(const LinearMap& a, const std::vector<double>& g,
                                   const TikhonovConfig& cfg, SolveLog* log = nullptr);

// Accelerated proximal gradient for 1/2|Ax-g|^2 + mu|x|_1 + (x >= 0), with a
// monotone safeguard: whenever the accelerated candidate would raise the
// objective, the step is retaken from the previous iterate, which the descent
// lemma makes non-increasing.
std::vector<double> solve_l1pos(const LinearMap& a, const std::vector<double>& g,
                                const L1PosConfig& cfg, SolveLog* log = nullptr);

CoefficientImage reconstruct_tikhonov(const ForwardOperator& op, const FilterSpec* filter,
                                      const Sinogram& g, const TikhonovConfig& cfg,
                                      SolveLog* log = nullptr);
CoefficientImage reconstruct_l1pos(const ForwardOperator& op, const FilterSpec* filter,
                                   const Sinogram& g, const L1PosConfig& cfg,
                                   SolveLog* log = nullptr);

}  // namespace patkit
