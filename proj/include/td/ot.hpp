#pragma once

#include <td/config.hpp>
#include <td/densities.hpp>
#include <td/geometry.hpp>

#include <string>
#include <vector>

namespace td {

// --- continuum certificates ---------------------------------------------

// Compactly supported C^2 test bump (1 - |x-c|^2/r^2)^3 on a disk strictly
// inside the triangle.
struct Bump {
    Point c;
    double r = 0.1;
};

// 12 disks spread over the foot, the interior and the corners, all with a
// positive margin to every edge.
std::vector<Bump> default_bump_battery();

// |int sigma grad(u) . grad(phi) - int phi (f+ - f-)| for each bump. The
// construction satisfies the weak equation exactly, so these are pure
// quadrature residuals; each must stay below 50 quad_tol |grad phi|_inf.
std::vector<double> weak_pde_residual(const DensityInstance& inst,
                                      const std::vector<Bump>& battery);

// Cost of the per-ray monotone rearrangement plan: on each ray the 1D
// optimal map between f+(X(.,a)) J and f-(X(.,a)) J (2048-node
// piecewise-linear CDFs composed by exact per-piece inversion), integrated
// over rays. Equals the L1 mass of |sigma| up to discretization.
double monotone_ray_plan_cost(const DensityInstance& inst);

// int_Delta u (f+ - f-): the Kantorovich dual objective of the ray potential.
double dual_objective(const DensityInstance& inst);

// monotone_ray_plan_cost - dual_objective. Where the deficit changes sign
// along rays the monotone plan runs against u on part of the ray, so the gap
// carries the structural floor 2 int sigma^- in addition to discretization.
double duality_gap(const DensityInstance& inst);

// --- discrete LP oracle ---------------------------------------------------

struct DiscreteMeasure {
    std::vector<Point> x;
    std::vector<double> w;
    double total() const;
};

struct Quantization {
    DiscreteMeasure plus;  // f+ atoms
    DiscreteMeasure minus; // f- atoms
    int side = 0;
};

// Midpoint atoms on a side x side grid over [-1,1] x [0,1]; weights are the
// exact cell-mass integrals (inner x2 integral in closed form through eta',
// outer x1 integral split at the hypotenuse crossings), with the last atom
// adjusted so each family sums exactly to the unit total mass.
Quantization quantize_density(const DensityInstance& inst, int side);

// Optimal transport plan between two small atom families.
struct TransportPlan {
    double cost = 0.0;
    std::vector<int> from;     // source index per positive flow
    std::vector<int> to;       // target index per positive flow
    std::vector<double> flow;
    std::vector<double> u;     // source potentials
    std::vector<double> v;     // target potentials
    double max_cs_violation = 0.0;  // worst negative reduced cost
    double max_infeasibility = 0.0; // worst marginal error of the reported plan
    int iterations = 0;
};

// Network simplex on the bipartite transportation graph with Euclidean
// costs. Bland's rule picks the entering arc; degeneracy is broken by an
// epsilon-perturbation of the target masses that is removed again when the
// flows are re-derived on the final basis tree. At most 4096 atoms per side.
TransportPlan solve_discrete_ot(const DiscreteMeasure& src,
                                const DiscreteMeasure& dst);

// --- potential audit -------------------------------------------------------

struct GradientAudit {
    double max_violation = 0.0;        // max of |grad u| - 1 (signed)
    double max_active_violation = 0.0; // max of ||grad u| - 1| where sigma > 1e-6
    double max_ray_derivative_error = 0.0; // |d/ds u along a ray + 1|
};

// Central finite differences of the potential at Halton samples; the ray
// check compares the along-ray derivative against the exact rate -1.
GradientAudit gradient_constraints_audit(const DensityInstance& inst,
                                         int samples);

// --- combined certificate --------------------------------------------------

struct DualityCertificate {
    double primal_cost = 0.0;
    double dual_value = 0.0;
    double gap = 0.0;
    double lp_cost = 0.0;
    int resolution = 0;
    std::vector<double> residuals; // bump battery
};

// Runs the duality pair, the LP oracle at the given quantization side and
// the bump battery.
DualityCertificate make_certificate(const DensityInstance& inst, int side);

std::string certificate_json(const DualityCertificate& cert,
                             const DensityInstance& inst);

} // namespace td
