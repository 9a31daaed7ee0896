#ifndef ROUGH_SPECTRAL_HPP
#define ROUGH_SPECTRAL_HPP

#include <complex>
#include <vector>

#include "rough/phasespace.hpp"

namespace rough {

// Symmetric-convention Fourier coefficients of a field,
//   F(u,v) = (1/2pi) * integral f(q,p) exp(-i(u q + v p)) dq dp,
// sampled on the conjugate frequency lattice of the zero-padded grid.
// The padding (at least twice each axis) keeps the Gaussian smoothing a
// convolution over the plane rather than over a torus.
struct SpectralField {
  PhaseSpaceGrid source_grid;
  FieldKind source_kind = FieldKind::wigner;
  int pq = 0;  // padded transform length along q
  int pp = 0;  // padded transform length along p
  std::vector<std::complex<double>> coeffs;  // row-major pq x pp

  // Signed angular frequencies of row k / column l.
  double u(int k) const;
  double v(int l) const;
};

SpectralField spectral_transform(const PhaseSpaceField& field);

// Inverse transform cropped back to the source grid; round-trips the input
// to better than 1e-10 relative L2 error.
PhaseSpaceField spectral_inverse(const SpectralField& sf);

// Gaussian smoothing W -> Q through the spectral multiplier
// exp(-(u^2+v^2)/4).  Requires kind Wigner and boundary mass below 1e-10
// (otherwise the grid is too small and wrap-around leakage would alias).
PhaseSpaceField smooth_to_husimi(const PhaseSpaceField& w);

// Frequency-domain route to the same number as
// roughness_numeric(w, smooth_to_husimi(w)):
//   sqrt(2*pi * sum (1 - exp(-(u^2+v^2)/4))^2 |What|^2 du dv).
double spectral_roughness(const PhaseSpaceField& w);

}  // namespace rough

#endif
