#pragma once

#include <iosfwd>
#include <vector>

#include "ap3d/params.hpp"

namespace ap3d {

/* Area-constrained scaling models. Areas are die mm^2; PU counts come from
 * flooring the cell budget; speedups are relative to a single SIMD processor
 * running the same workload. All functions throw std::invalid_argument when
 * the area cannot host at least one PU. */

long long simd_pu_count(const SimdParams& p, const UnitSystem& u, double area_mm2);
long long ap_pu_count(const ApParams& p, const UnitSystem& u, double area_mm2);

/* Harmonic speedup: n processors minus the serializing synchronization share,
 * 1 / (1/n + I_s). Saturates at 1/I_s. */
double simd_speedup(const SimdParams& p, const UnitSystem& u, double area_mm2);

/* AP speedup is linear in PU count: s_APU * n. */
double ap_speedup(const ApParams& p, const UnitSystem& u, double area_mm2);

/* Power models in watts. The SIMD execution+synchronization energy is paid at
 * the achieved speedup rate, hence the shared /(1/n + I_s); leakage covers
 * the logic area only. The AP per-PU dynamic term is the pass-statistics
 * bracket (compare 3 bits at 1/8 match / 7/8 mismatch, write 2 bits at 1/8
 * write / 7/8 miswrite); leakage covers the whole word row. */
double simd_power_w(const SimdParams& p, const UnitSystem& u, double area_mm2);
double ap_power_w(const ApParams& p, const UnitSystem& u, double area_mm2);
double ap_power_for_count(const ApParams& p, const UnitSystem& u, long long n_pus);

/* Per-PU normalized dynamic bracket: 1/8 + 7/8 p_mw + 3/16 p_m + 21/16 p_mm. */
double ap_dynamic_bracket(const ApParams& p);

/* Power split used to assign floorplan region powers. Sums match the
 * corresponding *_power_w to rounding. */
struct SimdPowerBudget {
    double pu_w = 0;
    double rf_w = 0;
    double sync_w = 0;
    double leak_w = 0;
    double total() const { return pu_w + rf_w + sync_w + leak_w; }
};
SimdPowerBudget simd_power_budget(const SimdParams& p, const UnitSystem& u, double area_mm2);

struct ApPowerBudget {
    double array_w = 0;    // pass-statistics dynamic power, minus register share
    double keymask_w = 0;  // key/mask register switching
    double leak_w = 0;
    double total() const { return array_w + keymask_w + leak_w; }
};
ApPowerBudget ap_power_budget(const ApParams& p, const UnitSystem& u, long long n_pus,
                              double keymask_bits);

/* Smallest area in [area_min, area_max] where the AP speedup overtakes the
 * SIMD speedup, by bisection to 1e-6 relative width. Throws if the sign of
 * (ap - simd) does not change over the range. */
double break_even_area(const SimdParams& sp, const ApParams& app, const UnitSystem& u,
                       double area_min, double area_max);

struct SweepRow {
    double area_mm2 = 0;
    double speedup = 0;
    double power_w = 0;
    double power_density_w_mm2 = 0;
};
std::vector<SweepRow> sweep_simd(const SimdParams& p, const UnitSystem& u,
                                 double area_min, double area_max, unsigned steps);
std::vector<SweepRow> sweep_ap(const ApParams& p, const UnitSystem& u,
                               double area_min, double area_max, unsigned steps);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace ap3d
