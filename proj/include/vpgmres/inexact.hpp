#pragma once

#include "vpgmres/core.hpp"
#include "vpgmres/rng.hpp"

namespace vpgmres {

struct PerturbedDot {
  double value;  // binary64 dot plus eta
  double eta;    // perturbation actually added, bit-exactly value - dot
};

/// h = v^T w + eta with eta ~ U(-eta_bound, eta_bound). The returned eta
/// reproduces value - dot(v, w) exactly so records stay self-consistent.
PerturbedDot perturbed_dot(const Vector& v, const Vector& w, double eta_bound,
                           Rng& rng);

struct PerturbedMatvec {
  Vector w;             // (A + E) v
  double applied_norm;  // nominal ||E||_2 bound, i.e. eps_bound
  Vector perturbation;  // E v, recorded for rebuilding E_k columns
};

/// w = (A + E) v where E is a dense matrix of independent standard normals
/// scaled so ||E||_2 = eps_bound (spectral norm estimated by power
/// iteration, relative tolerance 1e-6). eps_bound = 0 short-circuits to the
/// exact matvec. With economy set, E is instead the rank-one
/// eps * g h^T / (||g|| ||h||), an O(n) stand-in for larger problems.
PerturbedMatvec perturbed_matvec(const Matrix& A, const Vector& v,
                                 double eps_bound, Rng& rng,
                                 bool economy = false);

}  // namespace vpgmres
