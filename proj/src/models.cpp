#include "ap3d/models.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "ap3d/io.hpp"

namespace ap3d {

long long simd_pu_count(const SimdParams& p, const UnitSystem& u, double area_mm2) {
    double cells = u.mm2_to_cells(area_mm2);
    double n = std::floor((cells - p.cache_cells) / p.pu_cells());
    if (n < 1)
        throw std::invalid_argument("simd_pu_count: area below cache plus one processor");
    return static_cast<long long>(n);
}

long long ap_pu_count(const ApParams& p, const UnitSystem& u, double area_mm2) {
    double n = std::floor(u.mm2_to_cells(area_mm2) / p.pu_cells());
    if (n < 1)
        throw std::invalid_argument("ap_pu_count: area below one word row");
    return static_cast<long long>(n);
}

double simd_speedup(const SimdParams& p, const UnitSystem& u, double area_mm2) {
    double n = static_cast<double>(simd_pu_count(p, u, area_mm2));
    return 1.0 / (1.0 / n + p.I_s);
}

double ap_speedup(const ApParams& p, const UnitSystem& u, double area_mm2) {
    return p.s_APU * static_cast<double>(ap_pu_count(p, u, area_mm2));
}

double ap_dynamic_bracket(const ApParams& p) {
    return 1.0 / 8.0 + 7.0 / 8.0 * p.p_mw + 3.0 / 16.0 * p.p_m + 21.0 / 16.0 * p.p_mm;
}

SimdPowerBudget simd_power_budget(const SimdParams& p, const UnitSystem& u, double area_mm2) {
    double n = static_cast<double>(simd_pu_count(p, u, area_mm2));
    double rate = 1.0 / (1.0 / n + p.I_s);  // achieved speedup = work rate
    SimdPowerBudget b;
    b.pu_w = p.P_PU0 * double(p.m) * p.m * rate * u.watts_per_unit();
    b.rf_w = p.P_RF0 * double(p.k) * p.m * rate * u.watts_per_unit();
    b.sync_w = p.I_s * p.P_S0 * p.m * rate * u.watts_per_unit();
    b.leak_w = p.gamma_w_mm2 * u.cells_to_mm2(n * p.pu_cells());
    return b;
}

double simd_power_w(const SimdParams& p, const UnitSystem& u, double area_mm2) {
    return simd_power_budget(p, u, area_mm2).total();
}

double ap_power_for_count(const ApParams& p, const UnitSystem& u, long long n_pus) {
    double dyn = double(n_pus) * ap_dynamic_bracket(p) * u.watts_per_unit();
    double leak = p.gamma_w_mm2 * u.cells_to_mm2(double(n_pus) * p.pu_cells());
    return dyn + leak;
}

double ap_power_w(const ApParams& p, const UnitSystem& u, double area_mm2) {
    return ap_power_for_count(p, u, ap_pu_count(p, u, area_mm2));
}

ApPowerBudget ap_power_budget(const ApParams& p, const UnitSystem& u, long long n_pus,
                              double keymask_bits) {
    ApPowerBudget b;
    double dyn = double(n_pus) * ap_dynamic_bracket(p) * u.watts_per_unit();
    b.keymask_w = keymask_bits * p.reg_activity * p.reg_ff_power * u.watts_per_unit();
    if (b.keymask_w > dyn)
        throw std::invalid_argument("ap_power_budget: register switching exceeds dynamic budget");
    b.array_w = dyn - b.keymask_w;
    b.leak_w = p.gamma_w_mm2 * u.cells_to_mm2(double(n_pus) * p.pu_cells());
    return b;
}

double break_even_area(const SimdParams& sp, const ApParams& app, const UnitSystem& u,
                       double area_min, double area_max) {
    if (!(area_min > 0) || !(area_max > area_min))
        throw std::invalid_argument("break_even_area: bad range");
    auto gap = [&](double a) { return ap_speedup(app, u, a) - simd_speedup(sp, u, a); };
    double lo = area_min, hi = area_max;
    double glo = gap(lo), ghi = gap(hi);
    if (glo == 0) return lo;
    if (ghi == 0) return hi;
    if ((glo < 0) == (ghi < 0))
        throw std::invalid_argument("break_even_area: no break-even in range");
    /* plain bisection; the step discontinuities from floored PU counts only
     * matter below the relative tolerance */
    while ((hi - lo) > 1e-6 * hi) {
        double mid = 0.5 * (lo + hi);
        double g = gap(mid);
        if (g == 0) return mid;
        if ((g < 0) == (glo < 0)) { lo = mid; glo = g; }
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

static std::vector<double> sweep_areas(double area_min, double area_max, unsigned steps) {
    if (steps < 2) throw std::invalid_argument("sweep: need at least 2 steps");
    if (!(area_min > 0) || !(area_max > area_min))
        throw std::invalid_argument("sweep: bad area range");
    std::vector<double> a(steps);
    for (unsigned i = 0; i < steps; ++i)
        a[i] = area_min + (area_max - area_min) * double(i) / double(steps - 1);
    return a;
}

std::vector<SweepRow> sweep_simd(const SimdParams& p, const UnitSystem& u,
                                 double area_min, double area_max, unsigned steps) {
    std::vector<SweepRow> rows;
    for (double a : sweep_areas(area_min, area_max, steps)) {
        SweepRow r;
        r.area_mm2 = a;
        r.speedup = simd_speedup(p, u, a);
        r.power_w = simd_power_w(p, u, a);
        r.power_density_w_mm2 = r.power_w / a;
        rows.push_back(r);
    }
    return rows;
}

std::vector<SweepRow> sweep_ap(const ApParams& p, const UnitSystem& u,
                               double area_min, double area_max, unsigned steps) {
    std::vector<SweepRow> rows;
    for (double a : sweep_areas(area_min, area_max, steps)) {
        SweepRow r;
        r.area_mm2 = a;
        r.speedup = ap_speedup(p, u, a);
        r.power_w = ap_power_w(p, u, a);
        r.power_density_w_mm2 = r.power_w / a;
        rows.push_back(r);
    }
    return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << "area_mm2,speedup,power_w,power_density_w_mm2\n";
    for (const auto& r : rows)
        out << fmt_g(r.area_mm2) << ',' << fmt_g(r.speedup) << ',' << fmt_g(r.power_w)
            << ',' << fmt_g(r.power_density_w_mm2) << '\n';
}

}  // namespace ap3d
