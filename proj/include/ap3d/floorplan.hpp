#pragma once

#include <string>
#include <vector>

#include "ap3d/models.hpp"

namespace ap3d {

struct Block {
    std::string name;
    double x_um = 0, y_um = 0;  // lower-left corner
    double w_um = 0, h_um = 0;
    double power_w = 0;
};

struct Floorplan {
    double width_um = 0, height_um = 0;
    double total_power_w = 0;  // declared; validate() checks the block sum
    std::vector<Block> blocks;

    /* Throws std::invalid_argument on out-of-bounds or overlapping blocks,
     * or when the power sum drifts from total_power_w by more than 1e-9
     * relative. */
    void validate() const;
};

/* Associative-processor die, 7.3 x 7.3 mm: 8x8 banks of 8x8 blocks, each
 * block a 256-row * (k*m)-bit array with a tag strip on its right edge and
 * the key/mask register strip on top. 64*64 blocks * 256 rows = 2^20 PUs.
 * Region powers: the array rectangles split budget.array_w evenly, key/mask
 * strips split budget.keymask_w, and leakage is spread over every rectangle
 * by area. */
Floorplan build_ap_floorplan(const ApParams& p, const ApPowerBudget& budget);

/* SIMD die, 2.3 x 2.3 mm: a 4x4 grid of 575 um tiles whose center 2x2 is the
 * shared L2; the 12 remaining tiles each hold a 64-PU array, a register-file
 * strip and an L1 slice. budget.pu_w / rf_w are split across the 12 tiles,
 * sync_w goes half to the L2 and half to the L1 slices, and leakage covers
 * the PU+RF logic area only (the cache model carries no leakage term). */
Floorplan build_simd_floorplan(const SimdParams& p, const SimdPowerBudget& budget);

constexpr int kApDieUm = 7300;
constexpr int kApBanks = 8;           // per die edge
constexpr int kApBlocksPerBank = 8;   // per bank edge
constexpr int kApRowsPerBlock = 256;  // PUs per block
constexpr int kSimdDieUm = 2300;
constexpr int kSimdTiles = 12;
constexpr int kSimdPusPerTile = 64;

/* Σ key/mask register bits across the AP die (2*k*m per block). */
double ap_keymask_bits(const ApParams& p);

/* Cell-area power map over the die, resolution x resolution cells. Block
 * power lands in each cell in proportion to overlap area; sub-cell blocks
 * are area-merged. Total is conserved. resolution must be >= 16. */
struct PowerMap {
    int nx = 0, ny = 0;
    double width_um = 0, height_um = 0;
    std::vector<double> w;  // row-major, [iy*nx + ix]

    double total() const;
};
PowerMap rasterize_power(const Floorplan& f, int resolution);

Floorplan load_floorplan(const std::string& path);
std::string floorplan_to_json(const Floorplan& f);

}  // namespace ap3d
