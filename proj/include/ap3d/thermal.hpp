#pragma once

#include <string>
#include <vector>

#include "ap3d/floorplan.hpp"

namespace ap3d {

struct Layer {
    std::string name;
    double thickness_um = 0;
    double conductivity_w_mk = 0;
    bool powered = false;  // receives one PowerMap
    bool spread = false;   // extends past the die by the stack margin
};

/* Layers listed top to bottom; heat leaves through a convective boundary
 * under the last layer. */
struct LayerStack {
    std::vector<Layer> layers;
    double ambient_c = 45.0;
    double convection_k_per_w = 0.8;   // total sink resistance under the stack
    double spreader_margin_um = 2000;  // overhang of 'spread' layers per side

    int powered_count() const;

    /* Four 100 um silicon compute dies over a thermal interface film and a
     * 1 mm copper spreader that overhangs the stack. */
    static LayerStack default_stack();
};

LayerStack load_stack(const std::string& path);
std::string stack_to_json(const LayerStack& s);

struct SolveOptions {
    double rel_tol = 1e-8;  // L2 residual relative to the source norm
    int max_iters = 200000;
};

struct LayerGrid {
    std::string name;
    int nx = 0, ny = 0;
    int x0 = 0, y0 = 0;       // offset in global grid cells
    std::vector<double> t_c;  // row-major, [iy*nx + ix]

    double at(int ix, int iy) const { return t_c[size_t(iy) * nx + ix]; }
};

struct ThermalGrid {
    double dx_um = 0, dy_um = 0;
    double ambient_c = 0;
    int die_nx = 0, die_ny = 0;
    int die_x0 = 0, die_y0 = 0;  // die origin in global grid cells
    std::vector<LayerGrid> layers;
    int iterations = 0;
    double residual = 0;  // relative, at exit

    /* Die-relative cell-center coordinate; margin cells come out negative. */
    double x_um(const LayerGrid& g, int ix) const {
        return (g.x0 + ix - die_x0 + 0.5) * dx_um;
    }
    double y_um(const LayerGrid& g, int iy) const {
        return (g.y0 + iy - die_y0 + 0.5) * dy_um;
    }
};

/* Steady-state conduction through the stack on a resolution x resolution
 * grid over the die (spread layers gain margin cells on each side). maps
 * supplies one die-sized power map per powered layer, top to bottom, at the
 * same resolution. Lateral edges are adiabatic; the only exit is the
 * convective boundary. Solved matrix-free with preconditioned conjugate
 * gradients; throws std::runtime_error if the tolerance is not reached. */
ThermalGrid solve_steady(const LayerStack& stack, const std::vector<PowerMap>& maps,
                         int resolution, const SolveOptions& opts = {});

/* Heat crossing the convective boundary, in watts, for a solved grid. Equals
 * total input power at steady state; used as a conservation check. */
double convective_outflow_w(const LayerStack& stack, const ThermalGrid& grid);

struct LayerStats {
    std::string name;
    double peak_c = 0, min_c = 0, span_c = 0;
    int argmax_ix = 0, argmax_iy = 0;
    double argmax_x_um = 0, argmax_y_um = 0;  // die-relative
};

struct GridStats {
    std::vector<LayerStats> layers;
    double peak_c = 0, min_c = 0, span_c = 0;
    int peak_layer = 0;
};

GridStats grid_stats(const ThermalGrid& grid);

struct TCut {
    std::vector<double> x_um;  // die-relative cell centers
    std::vector<double> t_c;
};

/* Horizontal temperature cut through one layer at grid row iy. */
TCut t_cut(const ThermalGrid& grid, int layer, int iy);

/* P2 (ASCII) PGM, 0..255 scaled over [lo, hi], with the bounds recorded in a
 * comment line. Row 0 of the image is the top (max y). */
void write_layer_pgm(std::ostream& out, const LayerGrid& g, double lo, double hi);

/* CSV of every cell: layer,iy,ix,x_um,y_um,t_c (die-relative coordinates). */
void write_grid_csv(std::ostream& out, const ThermalGrid& grid);

}  // namespace ap3d
