#pragma once

#include <array>
#include <functional>
#include <vector>

namespace osplit {

// Uniform tensor grid on an interval (dim 1) or rectangle (dim 2).
// Node i on an axis sits at a + i*h with h = (b-a)/(n-1); both endpoints
// are nodes. 2D storage is row-major with y varying slowest:
// index = j*nx + i.
struct Grid {
    int dim = 1;
    std::array<int, 2> n{3, 1};           // nodes per axis; n[1]==1 in 1D
    std::array<double, 2> lo{0.0, 0.0};
    std::array<double, 2> hi{1.0, 0.0};
    std::array<double, 2> h{0.5, 0.0};

    int num_nodes() const { return n[0] * n[1]; }
    int nx() const { return n[0]; }
    int ny() const { return n[1]; }
    double x(int i) const { return lo[0] + i * h[0]; }
    double y(int j) const { return lo[1] + j * h[1]; }
    int index(int i, int j = 0) const { return j * n[0] + i; }
    // product of axis spacings, the weight of the discrete L1/L2 norms
    double cell_volume() const { return dim == 1 ? h[0] : h[0] * h[1]; }
};

Grid make_uniform_grid_1d(int n, double a, double b);
Grid make_uniform_grid_2d(int nx, int ny, double ax, double bx, double ay, double by);

// Grid function: one real value per node, same layout as Grid::index.
struct Field {
    Grid grid;
    std::vector<double> values;

    Field() = default;
    explicit Field(const Grid& g) : grid(g), values(g.num_nodes(), 0.0) {}

    double& operator[](int k) { return values[k]; }
    double operator[](int k) const { return values[k]; }
    int size() const { return static_cast<int>(values.size()); }
};

enum class NormKind { L1, L2, LInf };

double norm(const Field& f, NormKind kind);

// Samples fn(x, y) at every node (y passed as 0 in 1D). Throws on a
// non-finite sample.
Field eval_on_grid(const std::function<double(double, double)>& fn, const Grid& grid);

}  // namespace osplit
