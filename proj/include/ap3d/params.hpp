#pragma once

#include <map>
#include <string>

namespace ap3d {

/* Everything downstream is expressed in SRAM-cell units: areas in cells of
 * sram_cell_area_um2 each, powers in multiples of the cell write power.
 * The two conversions below are the only unit bridges in the code base. */
struct UnitSystem {
    double sram_cell_area_um2 = 0.1;
    double sram_write_power_uw = 0.5;

    double cells_per_mm2() const { return 1e6 / sram_cell_area_um2; }
    double mm2_to_cells(double mm2) const { return mm2 * cells_per_mm2(); }
    double cells_to_mm2(double cells) const { return cells / cells_per_mm2(); }
    double watts_per_unit() const { return sram_write_power_uw * 1e-6; }
};

/* SIMD baseline: n processors of an m-bit datapath (area A_PU0*m^2 cells)
 * with k*m bits of register file each (A_RF0 cells per bit), sharing a cache
 * of cache_cells. I_s is the per-workload synchronization intensity. */
struct SimdParams {
    double A_PU0 = 20;
    double A_RF0 = 3;
    double P_PU0 = 40;
    double P_RF0 = 5;
    double P_S0 = 200;
    unsigned k = 8;
    unsigned m = 32;
    double cache_cells = 3.668e7;
    double I_s = 1e-3;
    double gamma_w_mm2 = 0.05;  // leakage per mm2 of logic

    double pu_cells() const { return A_PU0 * double(m) * m + A_RF0 * double(k) * m; }
};

/* Associative processor: one PU per word row of k*m bit cells, A_AP0 cells
 * each (cell + tag/logic overhead). s_APU is the per-PU speedup relative to
 * one SIMD processor; workload calibrations override it. Dynamic power per
 * PU follows the match/mismatch/write/miswrite weights p_m/p_mm/p_mw. */
struct ApParams {
    double A_AP0 = 2;
    unsigned k = 8;
    unsigned m = 32;
    double s_APU = 1.0 / 4400.0;
    double p_mw = 0.1;
    double p_m = 0.1;
    double p_mm = 0.75;
    double gamma_w_mm2 = 0.05;
    double reg_ff_power = 5;    // normalized units per switching key/mask bit
    double reg_activity = 0.02; // fraction of key/mask bits toggling per cycle

    double pu_cells() const { return A_AP0 * double(k) * m; }
};

struct WorkloadSpec {
    std::string name;
    unsigned N = 0;       // problem size the calibration refers to
    unsigned m = 32;      // word width
    double I_s = 0;       // SIMD synchronization intensity
    double s_APU = 1.0 / 4400.0;  // effective per-PU AP speedup
};

struct ParamSet {
    UnitSystem unit;
    SimdParams simd;
    ApParams ap;
    std::map<std::string, WorkloadSpec> workloads;
};

/* Loads a parameter JSON (field names match the structs above). Throws
 * std::runtime_error with the offending path/field on malformed input. */
ParamSet load_params(const std::string& path);

/* Copies a workload's I_s / s_APU calibration into the model structs. */
void apply_workload(ParamSet& p, const std::string& workload);

/* Directory with the shipped tables.json / stack.json: --params beats
 * AP3D_PARAMS_DIR beats the compiled-in default. */
std::string default_params_dir();

}  // namespace ap3d
