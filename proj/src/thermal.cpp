#include "ap3d/thermal.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <stdexcept>

#include "ap3d/io.hpp"
#include "json.hpp"

namespace ap3d {

int LayerStack::powered_count() const {
    int n = 0;
    for (const Layer& l : layers) n += l.powered ? 1 : 0;
    return n;
}

LayerStack LayerStack::default_stack() {
    LayerStack s;
    s.layers = {
        {"si1", 100, 120, true, false},
        {"si2", 100, 120, true, false},
        {"si3", 100, 120, true, false},
        {"si4", 100, 120, true, false},
        {"tim", 20, 4, false, false},
        {"spreader", 1000, 400, false, true},
    };
    s.ambient_c = 45.0;
    s.convection_k_per_w = 0.8;
    s.spreader_margin_um = 2000;
    return s;
}

namespace {

void check_stack(const LayerStack& s) {
    if (s.layers.empty())
        throw std::invalid_argument("layer stack is empty");
    for (const Layer& l : s.layers) {
        if (l.thickness_um <= 0)
            throw std::invalid_argument("layer '" + l.name +
                                        "': thickness must be positive");
        if (l.conductivity_w_mk <= 0)
            throw std::invalid_argument("layer '" + l.name +
                                        "': conductivity must be positive");
    }
    if (s.convection_k_per_w <= 0)
        throw std::invalid_argument("convection resistance must be positive");
    if (s.spreader_margin_um < 0)
        throw std::invalid_argument("spreader margin must be nonnegative");
}

// Per-layer mesh bookkeeping in global grid cells.
struct MeshLayer {
    int nx = 0, ny = 0, x0 = 0, y0 = 0;
    size_t base = 0;
    double gx = 0, gy = 0;  // lateral conductances, W/K per cell pair
};

}  // namespace

ThermalGrid solve_steady(const LayerStack& stack, const std::vector<PowerMap>& maps,
                         int resolution, const SolveOptions& opts) {
    check_stack(stack);
    if (resolution < 16)
        throw std::invalid_argument("solve_steady: resolution must be >= 16");
    if (int(maps.size()) != stack.powered_count())
        throw std::invalid_argument(
            "solve_steady: need one power map per powered layer (" +
            std::to_string(stack.powered_count()) + "), got " +
            std::to_string(maps.size()));
    if (maps.empty())
        throw std::invalid_argument("solve_steady: stack has no powered layer");
    const double die_w = maps[0].width_um;
    const double die_h = maps[0].height_um;
    for (const PowerMap& m : maps) {
        if (m.nx != resolution || m.ny != resolution)
            throw std::invalid_argument("solve_steady: power map resolution "
                                        "does not match the solver grid");
        if (m.width_um != die_w || m.height_um != die_h)
            throw std::invalid_argument("solve_steady: power maps disagree "
                                        "on die dimensions");
    }
    if (die_w <= 0 || die_h <= 0)
        throw std::invalid_argument("solve_steady: die dimensions must be positive");

    const int L = int(stack.layers.size());
    const double dx_um = die_w / resolution;
    const double dy_um = die_h / resolution;
    bool any_spread = false;
    for (const Layer& l : stack.layers) any_spread |= l.spread;
    const int mx = any_spread ? int(std::llround(stack.spreader_margin_um / dx_um)) : 0;
    const int my = any_spread ? int(std::llround(stack.spreader_margin_um / dy_um)) : 0;

    const double dx = dx_um * 1e-6;  // meters
    const double dy = dy_um * 1e-6;
    const double cell_area = dx * dy;

    std::vector<MeshLayer> mesh(L);
    size_t n_total = 0;
    for (int l = 0; l < L; ++l) {
        const Layer& lay = stack.layers[l];
        MeshLayer& m = mesh[l];
        if (lay.spread) {
            m.nx = resolution + 2 * mx;
            m.ny = resolution + 2 * my;
            m.x0 = 0;
            m.y0 = 0;
        } else {
            m.nx = resolution;
            m.ny = resolution;
            m.x0 = mx;
            m.y0 = my;
        }
        m.base = n_total;
        n_total += size_t(m.nx) * m.ny;
        const double t = lay.thickness_um * 1e-6;
        m.gx = lay.conductivity_w_mk * t * dy / dx;
        m.gy = lay.conductivity_w_mk * t * dx / dy;
    }

    // Vertical conductance between layer l and l+1: two half-thickness
    // resistances in series over one cell footprint.
    std::vector<double> gz(size_t(std::max(L - 1, 0)), 0.0);
    for (int l = 0; l + 1 < L; ++l) {
        const Layer& a = stack.layers[l];
        const Layer& b = stack.layers[l + 1];
        const double r = a.thickness_um * 1e-6 / (2 * a.conductivity_w_mk) +
                         b.thickness_um * 1e-6 / (2 * b.conductivity_w_mk);
        gz[l] = cell_area / r;
    }

    // Convective exit under the last layer: the sink resistance is shared by
    // every bottom cell in parallel.
    const MeshLayer& bot = mesh[L - 1];
    const size_t n_bot = size_t(bot.nx) * bot.ny;
    const double t_bot = stack.layers[L - 1].thickness_um * 1e-6;
    const double g_bot =
        1.0 / (t_bot / (2 * stack.layers[L - 1].conductivity_w_mk * cell_area) +
               stack.convection_k_per_w * double(n_bot));

    // Source vector: map cell (ix, iy) sits at global (mx+ix, my+iy).
    std::vector<double> b(n_total, 0.0);
    {
        int mi = 0;
        for (int l = 0; l < L; ++l) {
            if (!stack.layers[l].powered) continue;
            const PowerMap& pm = maps[mi++];
            const MeshLayer& m = mesh[l];
            for (int iy = 0; iy < resolution; ++iy)
                for (int ix = 0; ix < resolution; ++ix) {
                    const int lx = mx + ix - m.x0;
                    const int ly = my + iy - m.y0;
                    b[m.base + size_t(ly) * m.nx + lx] +=
                        pm.w[size_t(iy) * resolution + ix];
                }
        }
    }

    // Diagonal of the conduction matrix, for the Jacobi preconditioner.
    std::vector<double> diag(n_total, 0.0);
    for (int l = 0; l < L; ++l) {
        const MeshLayer& m = mesh[l];
        for (int iy = 0; iy < m.ny; ++iy)
            for (int ix = 0; ix < m.nx; ++ix) {
                double d = 0;
                if (ix > 0) d += m.gx;
                if (ix + 1 < m.nx) d += m.gx;
                if (iy > 0) d += m.gy;
                if (iy + 1 < m.ny) d += m.gy;
                diag[m.base + size_t(iy) * m.nx + ix] = d;
            }
    }
    for (int l = 0; l + 1 < L; ++l) {
        const MeshLayer& a = mesh[l];
        const MeshLayer& c = mesh[l + 1];
        const int gx0 = std::max(a.x0, c.x0), gx1 = std::min(a.x0 + a.nx, c.x0 + c.nx);
        const int gy0 = std::max(a.y0, c.y0), gy1 = std::min(a.y0 + a.ny, c.y0 + c.ny);
        for (int gy = gy0; gy < gy1; ++gy)
            for (int gx = gx0; gx < gx1; ++gx) {
                diag[a.base + size_t(gy - a.y0) * a.nx + (gx - a.x0)] += gz[l];
                diag[c.base + size_t(gy - c.y0) * c.nx + (gx - c.x0)] += gz[l];
            }
    }
    for (size_t i = 0; i < n_bot; ++i) diag[bot.base + i] += g_bot;

    // y = A x, applied coupling by coupling so the matrix never materializes.
    auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
        std::fill(y.begin(), y.end(), 0.0);
        for (int l = 0; l < L; ++l) {
            const MeshLayer& m = mesh[l];
            for (int iy = 0; iy < m.ny; ++iy) {
                const size_t row = m.base + size_t(iy) * m.nx;
                for (int ix = 0; ix + 1 < m.nx; ++ix) {
                    const double f = m.gx * (x[row + ix] - x[row + ix + 1]);
                    y[row + ix] += f;
                    y[row + ix + 1] -= f;
                }
            }
            for (int iy = 0; iy + 1 < m.ny; ++iy) {
                const size_t row = m.base + size_t(iy) * m.nx;
                for (int ix = 0; ix < m.nx; ++ix) {
                    const double f = m.gy * (x[row + ix] - x[row + m.nx + ix]);
                    y[row + ix] += f;
                    y[row + m.nx + ix] -= f;
                }
            }
        }
        for (int l = 0; l + 1 < L; ++l) {
            const MeshLayer& a = mesh[l];
            const MeshLayer& c = mesh[l + 1];
            const int gx0 = std::max(a.x0, c.x0),
                      gx1 = std::min(a.x0 + a.nx, c.x0 + c.nx);
            const int gy0 = std::max(a.y0, c.y0),
                      gy1 = std::min(a.y0 + a.ny, c.y0 + c.ny);
            for (int gy = gy0; gy < gy1; ++gy) {
                const size_t ra = a.base + size_t(gy - a.y0) * a.nx - a.x0;
                const size_t rc = c.base + size_t(gy - c.y0) * c.nx - c.x0;
                for (int gx = gx0; gx < gx1; ++gx) {
                    const double f = gz[l] * (x[ra + gx] - x[rc + gx]);
                    y[ra + gx] += f;
                    y[rc + gx] -= f;
                }
            }
        }
        for (size_t i = 0; i < n_bot; ++i) y[bot.base + i] += g_bot * x[bot.base + i];
    };

    auto dot = [](const std::vector<double>& a, const std::vector<double>& c) {
        double s = 0;
        for (size_t i = 0; i < a.size(); ++i) s += a[i] * c[i];
        return s;
    };

    ThermalGrid grid;
    grid.dx_um = dx_um;
    grid.dy_um = dy_um;
    grid.ambient_c = stack.ambient_c;
    grid.die_nx = resolution;
    grid.die_ny = resolution;
    grid.die_x0 = mx;
    grid.die_y0 = my;
    grid.layers.resize(L);

    std::vector<double> x(n_total, 0.0);
    const double b_norm = std::sqrt(dot(b, b));
    if (b_norm > 0) {
        // Jacobi-preconditioned conjugate gradients from x = 0. Plain serial
        // loops keep the result bit-reproducible across runs.
        std::vector<double> r = b, z(n_total), p(n_total), q(n_total);
        for (size_t i = 0; i < n_total; ++i) z[i] = r[i] / diag[i];
        p = z;
        double rz = dot(r, z);
        double rel = 1.0;
        int it = 0;
        for (; it < opts.max_iters; ++it) {
            apply(p, q);
            const double alpha = rz / dot(p, q);
            for (size_t i = 0; i < n_total; ++i) x[i] += alpha * p[i];
            for (size_t i = 0; i < n_total; ++i) r[i] -= alpha * q[i];
            rel = std::sqrt(dot(r, r)) / b_norm;
            if (rel <= opts.rel_tol) {
                ++it;
                break;
            }
            for (size_t i = 0; i < n_total; ++i) z[i] = r[i] / diag[i];
            const double rz_next = dot(r, z);
            const double beta = rz_next / rz;
            rz = rz_next;
            for (size_t i = 0; i < n_total; ++i) p[i] = z[i] + beta * p[i];
        }
        if (rel > opts.rel_tol)
            throw std::runtime_error(
                "solve_steady: no convergence after " + std::to_string(it) +
                " iterations (relative residual " + fmt_g(rel) + ")");
        grid.iterations = it;
        grid.residual = rel;
    }

    for (int l = 0; l < L; ++l) {
        const MeshLayer& m = mesh[l];
        LayerGrid& g = grid.layers[l];
        g.name = stack.layers[l].name;
        g.nx = m.nx;
        g.ny = m.ny;
        g.x0 = m.x0;
        g.y0 = m.y0;
        g.t_c.resize(size_t(m.nx) * m.ny);
        for (size_t i = 0; i < g.t_c.size(); ++i)
            g.t_c[i] = stack.ambient_c + x[m.base + i];
    }
    return grid;
}

double convective_outflow_w(const LayerStack& stack, const ThermalGrid& grid) {
    check_stack(stack);
    if (grid.layers.size() != stack.layers.size())
        throw std::invalid_argument("convective_outflow_w: grid does not match stack");
    const LayerGrid& g = grid.layers.back();
    const Layer& lay = stack.layers.back();
    const double cell_area = grid.dx_um * 1e-6 * grid.dy_um * 1e-6;
    const size_t n = g.t_c.size();
    const double g_bot =
        1.0 / (lay.thickness_um * 1e-6 / (2 * lay.conductivity_w_mk * cell_area) +
               stack.convection_k_per_w * double(n));
    double out = 0;
    for (double t : g.t_c) out += g_bot * (t - grid.ambient_c);
    return out;
}

GridStats grid_stats(const ThermalGrid& grid) {
    GridStats s;
    s.layers.reserve(grid.layers.size());
    for (size_t l = 0; l < grid.layers.size(); ++l) {
        const LayerGrid& g = grid.layers[l];
        LayerStats ls;
        ls.name = g.name;
        ls.peak_c = -1e300;
        ls.min_c = 1e300;
        for (int iy = 0; iy < g.ny; ++iy)
            for (int ix = 0; ix < g.nx; ++ix) {
                const double t = g.at(ix, iy);
                if (t > ls.peak_c) {
                    ls.peak_c = t;
                    ls.argmax_ix = ix;
                    ls.argmax_iy = iy;
                }
                if (t < ls.min_c) ls.min_c = t;
            }
        ls.span_c = ls.peak_c - ls.min_c;
        ls.argmax_x_um = grid.x_um(g, ls.argmax_ix);
        ls.argmax_y_um = grid.y_um(g, ls.argmax_iy);
        if (l == 0 || ls.peak_c > s.peak_c) {
            s.peak_c = ls.peak_c;
            s.peak_layer = int(l);
        }
        s.min_c = l == 0 ? ls.min_c : std::min(s.min_c, ls.min_c);
        s.layers.push_back(std::move(ls));
    }
    s.span_c = s.peak_c - s.min_c;
    return s;
}

TCut t_cut(const ThermalGrid& grid, int layer, int iy) {
    if (layer < 0 || layer >= int(grid.layers.size()))
        throw std::out_of_range("t_cut: layer index out of range");
    const LayerGrid& g = grid.layers[layer];
    if (iy < 0 || iy >= g.ny) throw std::out_of_range("t_cut: row out of range");
    TCut c;
    c.x_um.reserve(g.nx);
    c.t_c.reserve(g.nx);
    for (int ix = 0; ix < g.nx; ++ix) {
        c.x_um.push_back(grid.x_um(g, ix));
        c.t_c.push_back(g.at(ix, iy));
    }
    return c;
}

void write_layer_pgm(std::ostream& out, const LayerGrid& g, double lo, double hi) {
    out << "P2\n# t_c min=" << fmt_g(lo) << " max=" << fmt_g(hi) << "\n"
        << g.nx << " " << g.ny << "\n255\n";
    const double scale = hi > lo ? 255.0 / (hi - lo) : 0.0;
    for (int iy = g.ny - 1; iy >= 0; --iy) {
        for (int ix = 0; ix < g.nx; ++ix) {
            int v = int(std::lround((g.at(ix, iy) - lo) * scale));
            v = std::clamp(v, 0, 255);
            out << v << (ix + 1 < g.nx ? ' ' : '\n');
        }
    }
}

void write_grid_csv(std::ostream& out, const ThermalGrid& grid) {
    out << "layer,iy,ix,x_um,y_um,t_c\n";
    for (const LayerGrid& g : grid.layers) {
        for (int iy = 0; iy < g.ny; ++iy)
            for (int ix = 0; ix < g.nx; ++ix)
                out << g.name << ',' << iy << ',' << ix << ','
                    << fmt_g(grid.x_um(g, ix)) << ',' << fmt_g(grid.y_um(g, iy))
                    << ',' << fmt_g(g.at(ix, iy)) << '\n';
    }
}

std::string stack_to_json(const LayerStack& s) {
    nlohmann::json j;
    j["ambient_c"] = s.ambient_c;
    j["convection_k_per_w"] = s.convection_k_per_w;
    j["spreader_margin_um"] = s.spreader_margin_um;
    nlohmann::json arr = nlohmann::json::array();
    for (const Layer& l : s.layers) {
        nlohmann::json jl;
        jl["name"] = l.name;
        jl["thickness_um"] = l.thickness_um;
        jl["conductivity_w_mk"] = l.conductivity_w_mk;
        jl["powered"] = l.powered;
        jl["spread"] = l.spread;
        arr.push_back(jl);
    }
    j["layers"] = std::move(arr);
    return j.dump(2) + "\n";
}

LayerStack load_stack(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open stack file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("stack JSON parse error in " + path + ": " + e.what());
    }
    LayerStack s;
    try {
        s.ambient_c = j.at("ambient_c").get<double>();
        s.convection_k_per_w = j.at("convection_k_per_w").get<double>();
        s.spreader_margin_um = j.value("spreader_margin_um", 0.0);
        for (const auto& jl : j.at("layers")) {
            Layer l;
            l.name = jl.at("name").get<std::string>();
            l.thickness_um = jl.at("thickness_um").get<double>();
            l.conductivity_w_mk = jl.at("conductivity_w_mk").get<double>();
            l.powered = jl.value("powered", false);
            l.spread = jl.value("spread", false);
            s.layers.push_back(std::move(l));
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("stack " + path + ": " + e.what());
    }
    check_stack(s);
    return s;
}

}  // namespace ap3d
