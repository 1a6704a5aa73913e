#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nlrobin/forms.hpp"
#include "nlrobin/measures.hpp"
#include "nlrobin/mesh.hpp"
#include "nlrobin/spectral.hpp"

namespace nlrobin {

struct EntryWitness {
    double t = 0.0;
    int i = -1;
    int j = -1; // -1 marks a whole-row finding
};

struct CheckReport {
    std::string name;
    bool passed = false;
    double worst_violation = 0.0;
    std::optional<EntryWitness> witness;
    double tolerance = 0.0;
};

/// Entrywise nonnegativity of the propagator; the witness points at the
/// smallest entry.
CheckReport positivity_check(const Propagator& p, double tol);

/// Row sums of the propagator stay in [0, 1]: the discrete rendering of
/// L-infinity contractivity on a nodal basis.
CheckReport submarkov_check(const Propagator& p, double tol);

/// low <= high entrywise within tol. Both propagators must live on the
/// same node set at the same time.
CheckReport domination_check(const Propagator& low, const Propagator& high,
                             double tol);

/// Search over the time grid for entries where the (kappa, theta)
/// propagator exceeds the Neumann one. Reported as a violation of Neumann
/// domination; passed == no violation found. A nonzero jump measure must
/// produce a violation (at small t the gap at a pair entry grows like
/// t * w0 / M_pp), a vanishing one must not.
CheckReport neumann_violation_probe(const BoundaryMeasure& kappa,
                                    const JumpMeasure& theta, const Mesh& mesh,
                                    const std::vector<double>& t_grid,
                                    double tol);

/// Full certification bundle for one configuration: positivity,
/// sub-Markov, Dirichlet below, effective-local below, and the Neumann
/// probe, over the whole time grid.
std::vector<CheckReport> sandwich_report(const BoundaryMeasure& kappa,
                                         const JumpMeasure& theta,
                                         const Mesh& mesh,
                                         const std::vector<double>& t_grid,
                                         double tol);

} // namespace nlrobin
