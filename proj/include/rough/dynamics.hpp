#ifndef ROUGH_DYNAMICS_HPP
#define ROUGH_DYNAMICS_HPP

#include <span>
#include <string>
#include <vector>

#include "rough/phasespace.hpp"
#include "rough/states.hpp"

namespace rough {

// Quartic (Kerr) oscillator H = omega n + lambda n^2, hbar = 1.
struct KerrParams {
  double omega = 0.0;
  double lambda = 1.0;  // must be > 0
};

struct TrajectoryRecord {
  double t = 0.0;
  double roughness = 0.0;
  double ddm = 0.0;
};

// Exact evolution in the Fock basis: every off-diagonal coefficient picks up
// the phase e^{i t (m-n)(omega + lambda (n+m))}; the diagonal is untouched.
FockDensityMatrix kerr_evolve(const FockDensityMatrix& rho0,
                              const KerrParams& params, double t);

// Closed-form Liouville flow of the initial coherent distribution: each
// phase-space point rotates at its own radius-dependent angular rate
// omega + lambda (q^2 + p^2).
PhaseSpaceField classical_liouville_field(complexd alpha0,
                                          const KerrParams& params, double t,
                                          const PhaseSpaceGrid& grid);

// Husimi function of the evolved coherent state from the truncated series
//   Q(beta) = e^{-|beta|^2 - |alpha0|^2}/(2 pi)
//             |sum_n (conj(beta) alpha0)^n e^{-i t (omega n + lambda n^2)}/n!|^2.
// n_terms must capture >= 1 - 1e-10 of the Poisson(|alpha0|^2) mass.
PhaseSpaceField kerr_husimi_field(complexd alpha0, const KerrParams& params,
                                  double t, const PhaseSpaceGrid& grid,
                                  int n_terms);

// Smallest series length whose neglected Poisson(|alpha0|^2) tail is at most
// 1e-13 (a safety factor beyond the 1e-10 precondition above).
int kerr_husimi_terms(complexd alpha0);

// sqrt(pi * integral |f - q|^2): distance between the classical distribution
// and the Husimi function on a shared grid holding >= 1 - 1e-10 of both.
double ddm(const PhaseSpaceField& f, const PhaseSpaceField& q);

// Joint R(t)/D(t) sweep for a coherent initial state; every time point is
// independent and evaluated in parallel.
std::vector<TrajectoryRecord> trajectory(complexd alpha0,
                                         const KerrParams& params,
                                         std::span<const double> times,
                                         const PhaseSpaceGrid& grid, int dim);

// CSV with columns t,R,D; metadata (when non-empty) becomes a '#' comment.
std::string trajectory_to_csv(const std::vector<TrajectoryRecord>& records,
                              const std::string& metadata);

}  // namespace rough

#endif
