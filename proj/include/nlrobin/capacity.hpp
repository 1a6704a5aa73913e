#pragma once

#include <vector>

#include "nlrobin/measures.hpp"
#include "nlrobin/mesh.hpp"
#include "nlrobin/types.hpp"

namespace nlrobin {

// Discrete relative capacity of a boundary node set, squared-H1-norm
// convention: value = min u^T (K + M) u over u == 1 on the node set.
// The minimizer (equilibrium potential) is stored alongside.
struct CapacityResult {
    double value = 0.0;
    Vector potential;
    std::vector<int> node_set;
    int level = 0;
    double h = 0.0;
};

CapacityResult relative_capacity(const Mesh& mesh,
                                 const std::vector<int>& node_set);

/// Capacity of the boundary node nearest to the given arc coordinate, on
/// `levels` successively refined meshes starting at `base`.
std::vector<CapacityResult> capacity_refinement_study(const Mesh& base,
                                                      double arc_position,
                                                      int levels);

struct ClosabilityLevel {
    int level = 0;
    double h = 0.0;
    double h1_energy = 0.0;          // u^T (K + M) u
    double gradient_energy = 0.0;    // u^T K u
    double boundary_form_value = 0.0; // u^T (B + J) u from the measures
};

struct ClosabilityReport {
    std::vector<ClosabilityLevel> levels;
    bool h1_strictly_decreasing = false;
    double h1_min = 0.0;
};

/// Refinement study of the obstruction sequence behind closability: at
/// each level the potential is pinned to 1 at the kappa-atom node z and to
/// 0 at the theta-pair partner z', and minimizes the H1 energy. A
/// non-closable configuration shows H1 energy draining to zero while the
/// boundary form value stays near the atom masses; a closable one keeps
/// the H1 energy bounded below.
ClosabilityReport closability_probe(const BoundaryMeasureSpec& kappa,
                                    const JumpMeasureSpec& theta,
                                    const Mesh& base, int levels);

} // namespace nlrobin
