#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nlrobin/mesh.hpp"
#include "nlrobin/types.hpp"

namespace nlrobin {

struct BoundaryAtom {
    int node = -1;
    double weight = 0.0;
};

// Nonnegative measure on the mesh boundary, in three components:
//  * segment_densities: constant density per boundary segment (2D only);
//  * nodal_masses: lumped point masses, one per boundary node, used to
//    represent kernel marginals exactly under nodal quadrature;
//  * atoms: point masses at named nodes.
struct BoundaryMeasure {
    std::vector<double> segment_densities; // size n_boundary_segments or empty
    std::vector<double> nodal_masses;      // size n_boundary_nodes or empty
    std::vector<BoundaryAtom> atoms;
    int n_boundary_nodes = 0;
    int n_boundary_segments = 0;

    static BoundaryMeasure zero(const Mesh& mesh);
    static BoundaryMeasure uniform_density(const Mesh& mesh, double value);
    static BoundaryMeasure from_atoms(const Mesh& mesh,
                                      std::vector<BoundaryAtom> atoms);

    void add_atom(int node, double weight);
    double total_mass(const Mesh& mesh) const;
    bool is_zero() const;
};

// Radially symmetric kernel part of a jump measure, evaluated at
// r = |x - y| > 0. The fractional family is capped flat below eps so all
// quadrature weights stay finite.
struct JumpKernel {
    enum class Kind { Zero, Constant, TruncatedFractional };
    Kind kind = Kind::Zero;
    double value = 0.0;     // Constant
    double s = 0.5;         // TruncatedFractional exponent parameter
    double eps = 0.0;       // TruncatedFractional cap distance
    double prefactor = 1.0; // multiplicative scaling

    static JumpKernel zero() { return {}; }
    static JumpKernel constant(double c);
    static JumpKernel truncated_fractional(double s, double eps);

    double evaluate(double r, int dim) const;
    bool is_zero() const;
};

// One symmetric off-diagonal atom: w * (delta_p (x) delta_q +
// delta_q (x) delta_p) / 2. The two nodes must differ (the diagonal is
// excluded from the product boundary).
struct AtomPair {
    int p = -1, q = -1;
    double weight = 0.0;
};

// Symmetric jump measure on (boundary x boundary) minus the diagonal:
// a radial kernel plus a list of symmetric atom pairs.
struct JumpMeasure {
    JumpKernel kernel;
    std::vector<AtomPair> pairs;

    static JumpMeasure zero() { return {}; }
    void add_pair(int p, int q, double weight);
    bool is_zero() const;
};

struct CapacityEvidence {
    int node = -1;
    std::vector<double> capacities; // one value per refinement level
};

struct AdmissibilityVerdict {
    bool admissible = true;
    std::vector<std::string> reasons;
    std::vector<CapacityEvidence> capacity_evidence;
};

/// Marginal measure theta_hat(dx) = theta(dx, boundary): atom pairs
/// contribute half their weight to each endpoint; the kernel part becomes
/// lumped nodal masses sum_{j != i} k(|x_i-x_j|) ds_i ds_j.
BoundaryMeasure marginal_measure(const JumpMeasure& theta, const Mesh& mesh);

/// kappa + 2 * theta_hat, componentwise; atoms at the same node merged.
BoundaryMeasure effective_local_measure(const BoundaryMeasure& kappa,
                                        const BoundaryMeasure& theta_hat);

/// Multiply all densities and weights by c >= 0.
std::pair<BoundaryMeasure, JumpMeasure> scale_pair(const BoundaryMeasure& kappa,
                                                   const JumpMeasure& theta,
                                                   double c);

/// Rule-based classification of kappa + theta_hat: density components are
/// admissible in any dimension; point atoms are admissible in 1D (endpoint
/// capacities stay bounded below) and non-admissible in 2D (single-point
/// capacities vanish under refinement). Optional refinement-study evidence
/// is echoed into the verdict.
AdmissibilityVerdict admissibility_verdict(
    const BoundaryMeasure& kappa, const JumpMeasure& theta, const Mesh& mesh,
    const std::vector<CapacityEvidence>& evidence = {});

/// Kernel-only coupling weights on the boundary nodes:
/// block(i,j) = k(|x_i - x_j|) ds_i ds_j, zero diagonal.
Matrix kernel_coupling_block(const JumpKernel& kernel, const Mesh& mesh);

// Mesh-independent measure specifications; positions are arc-length
// coordinates along the boundary chain and snap to the nearest boundary
// node (lowest index on ties) when instantiated, so the same spec is
// usable across refinement levels.
struct BoundaryMeasureSpec {
    double uniform_density = 0.0;
    std::vector<std::pair<double, double>> atoms; // (arc, weight)
};

struct JumpMeasureSpec {
    JumpKernel kernel;
    std::vector<std::array<double, 3>> pairs; // (arc_p, arc_q, weight)
};

BoundaryMeasure instantiate(const BoundaryMeasureSpec& spec, const Mesh& mesh);
JumpMeasure instantiate(const JumpMeasureSpec& spec, const Mesh& mesh);

} // namespace nlrobin
