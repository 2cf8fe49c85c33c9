#include "osplit/grid.hpp"

#include <cmath>
#include <string>

#include "osplit/errors.hpp"

namespace osplit {

Grid make_uniform_grid_1d(int n, double a, double b) {
    require(n >= 3, "grid: need at least 3 nodes per axis, got " + std::to_string(n));
    require(b > a, "grid: degenerate bounds");
    Grid g;
    g.dim = 1;
    g.n = {n, 1};
    g.lo = {a, 0.0};
    g.hi = {b, 0.0};
    g.h = {(b - a) / (n - 1), 0.0};
    return g;
}

Grid make_uniform_grid_2d(int nx, int ny, double ax, double bx, double ay, double by) {
    require(nx >= 3 && ny >= 3, "grid: need at least 3 nodes per axis");
    require(bx > ax && by > ay, "grid: degenerate bounds");
    Grid g;
    g.dim = 2;
    g.n = {nx, ny};
    g.lo = {ax, ay};
    g.hi = {bx, by};
    g.h = {(bx - ax) / (nx - 1), (by - ay) / (ny - 1)};
    return g;
}

double norm(const Field& f, NormKind kind) {
    const double w = f.grid.cell_volume();
    double acc = 0.0;
    switch (kind) {
        case NormKind::LInf:
            for (double v : f.values) acc = std::max(acc, std::abs(v));
            return acc;
        case NormKind::L2:
            for (double v : f.values) acc += v * v;
            return std::sqrt(w * acc);
        case NormKind::L1:
            for (double v : f.values) acc += std::abs(v);
            return w * acc;
    }
    return 0.0;
}

Field eval_on_grid(const std::function<double(double, double)>& fn, const Grid& grid) {
    Field f(grid);
    for (int j = 0; j < grid.ny(); ++j) {
        for (int i = 0; i < grid.nx(); ++i) {
            const double v = fn(grid.x(i), grid.dim == 2 ? grid.y(j) : 0.0);
            if (!std::isfinite(v))
                throw ConfigError("eval_on_grid: non-finite sample at node (" +
                                  std::to_string(i) + "," + std::to_string(j) + ")");
            f[grid.index(i, j)] = v;
        }
    }
    return f;
}

}  // namespace osplit
