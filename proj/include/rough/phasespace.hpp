#ifndef ROUGH_PHASESPACE_HPP
#define ROUGH_PHASESPACE_HPP

#include <string>
#include <vector>

#include "rough/states.hpp"

namespace rough {

// Uniform rectangular phase-space grid with inclusive endpoints.
// Both axis counts must be even and at least 8 so every field built on the
// grid is usable by the FFT-based smoothing path.
struct PhaseSpaceGrid {
  double q_min = -6.0;
  double q_max = 6.0;
  double p_min = -6.0;
  double p_max = 6.0;
  int nq = 8;
  int np = 8;

  PhaseSpaceGrid() = default;
  PhaseSpaceGrid(double q_lo, double q_hi, double p_lo, double p_hi, int n_q, int n_p);

  double dq() const { return (q_max - q_min) / (nq - 1); }
  double dp() const { return (p_max - p_min) / (np - 1); }
  double q(int i) const { return q_min + i * dq(); }
  double p(int j) const { return p_min + j * dp(); }

  bool operator==(const PhaseSpaceGrid&) const = default;
};

// Symmetric square grid [-half_width, half_width]^2 with the given spacing
// ceiling; the point count is the smallest even integer that does not
// exceed the spacing.
PhaseSpaceGrid symmetric_grid(double half_width, double max_spacing);

// Grid sized from state scale: half-width max(6, 8*sqrt(2*nbar+1),
// 2*(sqrt(2)*|alpha| + 5)), covering > 1 - 1e-10 of the Gaussian envelopes
// involved.  Always re-validated downstream by boundary-mass checks.
PhaseSpaceGrid auto_grid(double nbar, double alpha_abs, double max_spacing = 0.05);
PhaseSpaceGrid auto_grid_for(const AnalyticStateSpec& spec, double max_spacing = 0.05);
PhaseSpaceGrid auto_grid_for(const FockDensityMatrix& rho, double max_spacing = 0.05);

enum class FieldKind { wigner, husimi, classical };

std::string field_kind_name(FieldKind kind);

// Real samples of a distribution over a PhaseSpaceGrid, tagged by kind.
// Values are stored row-major with the q index outermost.
class PhaseSpaceField {
 public:
  PhaseSpaceField(const PhaseSpaceGrid& grid, FieldKind kind);

  const PhaseSpaceGrid& grid() const { return grid_; }
  FieldKind kind() const { return kind_; }

  double operator()(int i, int j) const { return values_[static_cast<std::size_t>(i) * grid_.np + j]; }
  double& operator()(int i, int j) { return values_[static_cast<std::size_t>(i) * grid_.np + j]; }

  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

 private:
  PhaseSpaceGrid grid_;
  FieldKind kind_;
  std::vector<double> values_;
};

// Series evaluation of the Wigner function of a truncated density matrix,
// W(q,p) = sum_{n,m} A_{n,m} K_{m,n}((q+ip)/sqrt(2)).  Hermiticity of the
// input guarantees a real result; the input is validated (residue < 1e-10)
// and the pairing of conjugate terms keeps the evaluation exactly real.
PhaseSpaceField wigner_field(const FockDensityMatrix& rho, const PhaseSpaceGrid& grid);

// Series evaluation of the Husimi function Q(q,p) = <alpha|rho|alpha>/(2*pi).
// Values below the -1e-12 floor indicate a state-construction bug and throw.
PhaseSpaceField husimi_field(const FockDensityMatrix& rho, const PhaseSpaceGrid& grid);

// Closed-form fields for the analytic families.  `which` selects the Wigner
// or Husimi form; classical fields come from the dynamics module.
PhaseSpaceField analytic_field(const AnalyticStateSpec& spec, FieldKind which,
                               const PhaseSpaceGrid& grid);

// Product trapezoid rule over the full grid.
double trapezoid_integral(const PhaseSpaceField& field);

// Trapezoid-weighted mass carried by the perimeter nodes of |values|; the
// cheap proxy used to certify that a grid captures a field's support.
double boundary_mass(const PhaseSpaceField& field);

// Largest |value| over the perimeter nodes.
double max_boundary_abs(const PhaseSpaceField& field);

// Integrated negative volume, integral(|W|) - 1.  The negative-part integral
// uses per-line cubic crossing location with curvature-corrected interior
// sums, so the kink in |W| does not limit the quadrature order.  Requires
// the field to have decayed below 1e-12 at the grid boundary.
double negativity(const PhaseSpaceField& w);

// sqrt(2*pi*integral((W - Q)^2)): the brute-force quadrature route used as
// the oracle for every closed form.  Both fields must share one grid.
double roughness_numeric(const PhaseSpaceField& w, const PhaseSpaceField& q);

// Convenience: closed-form fields of an analytic family on its auto grid.
double roughness_numeric(const AnalyticStateSpec& spec);

// 2*pi*integral(W^2); equals Tr(rho^2) for consistent fields.
double wigner_purity(const PhaseSpaceField& w);

// integral((a-b)^2) by the shared trapezoid rule (grids must match).
double integral_of_squared_difference(const PhaseSpaceField& a, const PhaseSpaceField& b);

// CSV with one `#` metadata line, a `q,p,value` header, and one row per
// grid node (q index outermost); 12 significant digits.
std::string field_to_csv(const PhaseSpaceField& field);

// JSON object {"grid": {...}, "kind": ..., "values": [row-major]}.
std::string field_to_json(const PhaseSpaceField& field);

}  // namespace rough

#endif
