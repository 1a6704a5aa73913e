#pragma once

#include <array>
#include <vector>

namespace nlrobin {

struct BoundarySegment {
    int a = -1, b = -1; // node ids, consecutive along the boundary chain
    double length = 0.0;
};

// Structured piecewise-linear mesh of an interval (dim 1) or of an
// axis-aligned rectangle split into right triangles (dim 2). Immutable
// after construction.
//
// Boundary conventions:
//  * 2D: boundary_nodes traverse the perimeter counterclockwise starting
//    at (0,0); boundary_segments form the closed chain. The nodal arc
//    weight ds_i is half the sum of the two adjacent segment lengths.
//  * 1D: the boundary is the two endpoints; there are no boundary
//    segments and every endpoint carries unit arc weight (the surface
//    measure of a point boundary is counting measure). All boundary
//    density integrals degenerate to sums over the two endpoint atoms.
struct Mesh {
    int dim = 0;
    std::vector<std::array<double, 2>> nodes; // y == 0 in 1D
    std::vector<std::array<int, 2>> segments;   // 1D elements
    std::vector<std::array<int, 3>> triangles;  // 2D elements
    std::vector<int> boundary_nodes;
    std::vector<BoundarySegment> boundary_segments; // empty in 1D
    double h = 0.0; // max element diameter

    // Construction parameters; refine() rebuilds from these so that parent
    // node coordinates are preserved bitwise.
    int nx = 0, ny = 0;
    double lx = 0.0, ly = 0.0;

    int node_count() const { return static_cast<int>(nodes.size()); }
    bool is_boundary_node(int node) const;
    std::vector<int> interior_nodes() const;

    /// Arc-length coordinate of each boundary node along the chain
    /// (2D: cumulative from (0,0); 1D: {0, lx}).
    std::vector<double> boundary_arc_positions() const;
    /// Nodal arc weights ds_i (1D: {1, 1}).
    std::vector<double> boundary_arc_weights() const;
    double perimeter() const;

    /// Boundary node closest to the given arc coordinate; ties broken by
    /// the lowest node index. In 2D the arc wraps around the perimeter.
    int nearest_boundary_node(double arc) const;

private:
    std::vector<char> boundary_flag_;
    friend Mesh build_interval_mesh(int, double);
    friend Mesh build_rectangle_mesh(int, int, double, double);
};

Mesh build_interval_mesh(int n_cells, double length);
Mesh build_rectangle_mesh(int nx, int ny, double lx, double ly);

/// Uniform refinement; halves h exactly and keeps parent node coordinates
/// bitwise.
Mesh refine(const Mesh& mesh);

} // namespace nlrobin
