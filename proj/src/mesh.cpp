#include "nlrobin/mesh.hpp"

#include <cmath>
#include <stdexcept>

namespace nlrobin {

namespace {

double segment_length(const Mesh& m, int a, int b) {
    const double dx = m.nodes[a][0] - m.nodes[b][0];
    const double dy = m.nodes[a][1] - m.nodes[b][1];
    return std::sqrt(dx * dx + dy * dy);
}

} // namespace

bool Mesh::is_boundary_node(int node) const {
    return node >= 0 && node < node_count() && boundary_flag_[node] != 0;
}

std::vector<int> Mesh::interior_nodes() const {
    std::vector<int> out;
    out.reserve(nodes.size());
    for (int i = 0; i < node_count(); ++i)
        if (!boundary_flag_[i]) out.push_back(i);
    return out;
}

std::vector<double> Mesh::boundary_arc_positions() const {
    if (dim == 1) return {0.0, lx};
    std::vector<double> arc(boundary_nodes.size(), 0.0);
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < boundary_nodes.size(); ++k) {
        s += boundary_segments[k].length;
        arc[k + 1] = s;
    }
    return arc;
}

std::vector<double> Mesh::boundary_arc_weights() const {
    if (dim == 1) return {1.0, 1.0};
    const std::size_t nb = boundary_nodes.size();
    std::vector<double> ds(nb, 0.0);
    // chain order: node k sits between segments k-1 and k
    for (std::size_t k = 0; k < nb; ++k) {
        ds[k] = 0.5 * (boundary_segments[(k + nb - 1) % nb].length +
                       boundary_segments[k].length);
    }
    return ds;
}

double Mesh::perimeter() const {
    double p = 0.0;
    for (const BoundarySegment& seg : boundary_segments) p += seg.length;
    return p;
}

int Mesh::nearest_boundary_node(double arc) const {
    const std::vector<double> pos = boundary_arc_positions();
    double per = perimeter();
    double s = arc;
    if (dim == 2 && per > 0.0) {
        s = std::fmod(s, per);
        if (s < 0.0) s += per;
    }
    int best_node = -1;
    double best_dist = 0.0;
    for (std::size_t k = 0; k < boundary_nodes.size(); ++k) {
        double d = std::abs(s - pos[k]);
        if (dim == 2) d = std::min(d, per - d);
        const int node = boundary_nodes[k];
        if (best_node < 0 || d < best_dist ||
            (d == best_dist && node < best_node)) {
            best_node = node;
            best_dist = d;
        }
    }
    return best_node;
}

Mesh build_interval_mesh(int n_cells, double length) {
    if (n_cells < 1)
        throw std::invalid_argument("build_interval_mesh: n_cells must be >= 1");
    if (!(length > 0.0))
        throw std::invalid_argument("build_interval_mesh: length must be positive");

    Mesh m;
    m.dim = 1;
    m.nx = n_cells;
    m.lx = length;
    m.nodes.resize(n_cells + 1);
    for (int i = 0; i <= n_cells; ++i)
        m.nodes[i] = {(static_cast<double>(i) * length) / n_cells, 0.0};
    m.segments.resize(n_cells);
    for (int i = 0; i < n_cells; ++i) m.segments[i] = {i, i + 1};
    m.boundary_nodes = {0, n_cells};
    m.h = length / n_cells;
    m.boundary_flag_.assign(m.nodes.size(), 0);
    m.boundary_flag_[0] = 1;
    m.boundary_flag_[n_cells] = 1;
    return m;
}

Mesh build_rectangle_mesh(int nx, int ny, double lx, double ly) {
    if (nx < 1 || ny < 1)
        throw std::invalid_argument("build_rectangle_mesh: nx and ny must be >= 1");
    if (!(lx > 0.0) || !(ly > 0.0))
        throw std::invalid_argument("build_rectangle_mesh: side lengths must be positive");

    Mesh m;
    m.dim = 2;
    m.nx = nx;
    m.ny = ny;
    m.lx = lx;
    m.ly = ly;

    const int npx = nx + 1;
    const int npy = ny + 1;
    m.nodes.resize(static_cast<std::size_t>(npx) * npy);
    for (int j = 0; j < npy; ++j)
        for (int i = 0; i < npx; ++i)
            m.nodes[static_cast<std::size_t>(j) * npx + i] = {
                (static_cast<double>(i) * lx) / nx,
                (static_cast<double>(j) * ly) / ny};

    auto vid = [npx](int i, int j) { return j * npx + i; };

    m.triangles.reserve(static_cast<std::size_t>(2) * nx * ny);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int v00 = vid(i, j);
            const int v10 = vid(i + 1, j);
            const int v01 = vid(i, j + 1);
            const int v11 = vid(i + 1, j + 1);
            m.triangles.push_back({v00, v10, v11});
            m.triangles.push_back({v00, v11, v01});
        }
    }

    // perimeter chain, counterclockwise from (0,0)
    for (int i = 0; i <= nx; ++i) m.boundary_nodes.push_back(vid(i, 0));
    for (int j = 1; j <= ny; ++j) m.boundary_nodes.push_back(vid(nx, j));
    for (int i = nx - 1; i >= 0; --i) m.boundary_nodes.push_back(vid(i, ny));
    for (int j = ny - 1; j >= 1; --j) m.boundary_nodes.push_back(vid(0, j));

    const std::size_t nb = m.boundary_nodes.size();
    for (std::size_t k = 0; k < nb; ++k) {
        const int a = m.boundary_nodes[k];
        const int b = m.boundary_nodes[(k + 1) % nb];
        m.boundary_segments.push_back({a, b, segment_length(m, a, b)});
    }

    const double hx = lx / nx;
    const double hy = ly / ny;
    m.h = std::sqrt(hx * hx + hy * hy);

    m.boundary_flag_.assign(m.nodes.size(), 0);
    for (int node : m.boundary_nodes) m.boundary_flag_[node] = 1;
    return m;
}

Mesh refine(const Mesh& mesh) {
    if (mesh.dim == 1) return build_interval_mesh(2 * mesh.nx, mesh.lx);
    if (mesh.dim == 2)
        return build_rectangle_mesh(2 * mesh.nx, 2 * mesh.ny, mesh.lx, mesh.ly);
    throw std::invalid_argument("refine: mesh is not initialized");
}

} // namespace nlrobin
