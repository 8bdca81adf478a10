// Acceptance gate: ten production criteria, one verdict line each, nonzero
// exit if any fails. Run through ctest or directly from the build directory.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ap3d/field_ops.hpp"
#include "ap3d/models.hpp"
#include "ap3d/thermal.hpp"
#include "ap3d/workloads.hpp"

#ifndef AP3D_CLI_PATH
#define AP3D_CLI_PATH ""
#endif
#ifndef AP3D_PARAMS_FILE
#define AP3D_PARAMS_FILE "params/tables.json"
#endif

namespace fs = std::filesystem;
using ap3d::ApArray;
using ap3d::BitVector;
using ap3d::FieldSpec;

namespace {

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

struct Verdict {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/* shared random-operand array builder: fields a|b|flag */
struct AddRig {
    ApArray ap;
    FieldSpec fa, fb;
    std::size_t flag;
    std::vector<std::uint64_t> a, b;

    AddRig(std::size_t rows, unsigned m, std::uint64_t seed)
        : ap(rows, 2 * m + 1), fa{0, m}, fb{m, m}, flag(2 * m), a(rows), b(rows) {
        std::mt19937_64 rng(seed);
        const std::uint64_t lim = m >= 64 ? ~0ULL : (1ULL << m) - 1;
        std::uniform_int_distribution<std::uint64_t> dist(0, lim);
        for (std::size_t r = 0; r < rows; ++r) {
            a[r] = dist(rng);
            b[r] = dist(rng);
            ap3d::write_field(ap, r, fa, a[r]);
            ap3d::write_field(ap, r, fb, b[r]);
        }
    }
};

/* ---------------- C1: add cycle law ---------------- */

Verdict c1() {
    double worst_s = 0;
    for (unsigned m : {2u, 4u, 8u, 16u, 32u}) {
        AddRig rig(256, m, 1000 + m);
        ap3d::clear_columns(rig.ap, {rig.flag});
        const auto t0 = std::chrono::steady_clock::now();
        const auto before = rig.ap.ledger();
        ap3d::vector_add(rig.ap, rig.fa, rig.fb, rig.flag);
        const auto d = rig.ap.ledger() - before;
        const double dt = seconds_since(t0);
        worst_s = std::max(worst_s, dt);
        if (d.cycles != 8ULL * m)
            return {false, fmt("add at m=%u took %llu cycles, want %u", m,
                               (unsigned long long)d.cycles, 8 * m)};
        if (dt >= 1.0)
            return {false, fmt("add at m=%u needed %.2f s", m, dt)};
    }
    return {true, fmt("vector_add spends exactly 8m cycles for m in {2,4,8,16,32}; "
                      "slowest case %.3f s", worst_s)};
}

/* ---------------- C2: adder truth table and pass order ---------------- */

bool adder_exact(const ap3d::PassTable& t) {
    for (unsigned state = 0; state < 8; ++state) {
        const bool c = state & 4, b = state & 2, a = state & 1;
        ApArray ap(1, 3);
        BitVector row(3);
        row.set(2, c);
        row.set(1, b);
        row.set(0, a);
        ap.write_row(0, row, BitVector(3, true));
        ap3d::apply_pass_table(ap, t, {2, 1, 0});
        const unsigned sum = unsigned(a) + b + c;
        if (ap.cell(0, 2) != (sum >= 2) || ap.cell(0, 1) != bool(sum & 1) ||
            ap.cell(0, 0) != a)
            return false;
    }
    return true;
}

Verdict c2() {
    const ap3d::PassTable table = ap3d::full_adder_table();
    if (!adder_exact(table))
        return {false, "canonical pass order disagrees with the full-adder truth table"};

    std::vector<int> order{0, 1, 2, 3};
    int broken = 0, total = 0;
    do {
        if (order == std::vector<int>{0, 1, 2, 3}) continue;
        ap3d::PassTable t = table;
        for (int i = 0; i < 4; ++i) t.passes[i] = table.passes[std::size_t(order[i])];
        ++total;
        if (!adder_exact(t)) ++broken;
    } while (std::next_permutation(order.begin(), order.end()));

    if (broken == 0)
        return {false, "no pass reordering corrupted the truth table: order is not "
                       "load-bearing"};
    return {true, fmt("all 8 single-bit states exact in canonical order; %d of %d "
                      "reorderings corrupt at least one state", broken, total)};
}

/* ---------------- C3: kernels and workloads against oracles ---------------- */

Verdict c3() {
    const std::size_t rows = 10000;
    const unsigned m = 32;
    const std::uint64_t lim = (1ULL << m) - 1;

    {
        AddRig rig(rows, m, 31);
        ap3d::clear_columns(rig.ap, {rig.flag});
        ap3d::vector_add(rig.ap, rig.fa, rig.fb, rig.flag);
        for (std::size_t r = 0; r < rows; ++r)
            if (ap3d::read_field(rig.ap, r, rig.fb) != ((rig.a[r] + rig.b[r]) & lim))
                return {false, fmt("add mismatch at row %zu", r)};
    }
    {
        AddRig rig(rows, m, 32);
        ap3d::clear_columns(rig.ap, {rig.flag});
        ap3d::vector_subtract(rig.ap, rig.fa, rig.fb, rig.flag);
        for (std::size_t r = 0; r < rows; ++r)
            if (ap3d::read_field(rig.ap, r, rig.fb) != ((rig.b[r] - rig.a[r]) & lim))
                return {false, fmt("subtract mismatch at row %zu", r)};
    }
    {
        AddRig rig(rows, m, 33);
        const BitVector gt = ap3d::vector_compare_gt(rig.ap, rig.fa, rig.fb);
        for (std::size_t r = 0; r < rows; ++r)
            if (gt.get(r) != (rig.a[r] > rig.b[r]))
                return {false, fmt("compare mismatch at row %zu", r)};
    }
    {
        ApArray ap(rows, 4 * m);
        const FieldSpec fa{0, m}, fb{m, m}, fp{2 * m, 2 * m};
        std::mt19937_64 rng(34);
        std::uniform_int_distribution<std::uint64_t> dist(0, lim);
        std::vector<std::uint64_t> a(rows), b(rows);
        for (std::size_t r = 0; r < rows; ++r) {
            a[r] = dist(rng);
            b[r] = dist(rng);
            ap3d::write_field(ap, r, fa, a[r]);
            ap3d::write_field(ap, r, fb, b[r]);
        }
        ap3d::vector_multiply(ap, fa, fb, fp);
        for (std::size_t r = 0; r < rows; ++r)
            if (ap3d::read_field(ap, r, fp) != a[r] * b[r])
                return {false, fmt("multiply mismatch at row %zu", r)};
    }
    {
        const unsigned lm = 8;  // LUT cost is 2^(m+1): exercised at a byte domain
        ApArray ap(rows, 2 * lm);
        const FieldSpec fx{0, lm}, fy{lm, lm};
        std::mt19937_64 rng(35);
        std::uniform_int_distribution<std::uint64_t> dist(0, 255);
        std::vector<std::uint64_t> table(256), x(rows);
        for (auto& v : table) v = dist(rng);
        for (std::size_t r = 0; r < rows; ++r) {
            x[r] = dist(rng);
            ap3d::write_field(ap, r, fx, x[r]);
        }
        ap3d::lut_apply(ap, fx, fy, table);
        for (std::size_t r = 0; r < rows; ++r)
            if (ap3d::read_field(ap, r, fy) != table[x[r]])
                return {false, fmt("lut mismatch at row %zu", r)};
    }

    const ap3d::WorkloadRun dmm = ap3d::run_dmm(8, 8, 77);
    if (!dmm.ok || dmm.max_abs_err != 0.0)
        return {false, fmt("dmm 8x8 err %.3g, want exact", dmm.max_abs_err)};
    const ap3d::WorkloadRun fft = ap3d::run_fft(64, 78);
    if (!fft.ok)
        return {false, fmt("fft err %.4f exceeds bound %.2f", fft.max_abs_err,
                           ap3d::kFftTolAbs)};
    const ap3d::WorkloadRun bs = ap3d::run_black_scholes(256, 79);
    if (!bs.ok)
        return {false, fmt("black-scholes err %.4f exceeds bound", bs.max_abs_err)};

    return {true, fmt("add/sub/mul/gt exact at m=32 and lut exact at m=8 on 10000 "
                      "rows; dmm 8x8 exact; fft N=64 err %.4f <= %.2f; bs N=256 "
                      "err %.4f <= %.2f+%.0f%%", fft.max_abs_err, ap3d::kFftTolAbs,
                      bs.max_abs_err, ap3d::kBsTolAbs, ap3d::kBsTolRel * 100)};
}

/* ---------------- C4: pass statistics ---------------- */

Verdict c4() {
    const std::size_t rows = 10000;
    const unsigned m = 16;
    AddRig rig(rows, m, 44);
    ap3d::clear_columns(rig.ap, {rig.flag});
    const auto before = rig.ap.ledger();
    ap3d::vector_add(rig.ap, rig.fa, rig.fb, rig.flag);
    const auto d = rig.ap.ledger() - before;

    const double samples = double(rows) * 4 * m;  // one tag draw per pass and row
    const double frac = double(d.matches) / samples;
    const double sigma = std::sqrt(0.125 * 0.875 / samples);
    if (std::abs(frac - 0.125) > 3 * sigma)
        return {false, fmt("match fraction %.5f departs 1/8 by more than 3 sigma "
                           "(%.5f)", frac, 3 * sigma)};

    // active columns per cycle: 3 compared + 2 written per 2-cycle pass = 2.5
    const std::uint64_t active = d.compare_bits + d.write_bits + d.miswrite_bits;
    if (2 * active != 5ULL * d.cycles * rows)
        return {false, fmt("active columns per cycle %.6f, want exactly 2.5",
                           double(active) / double(d.cycles) / double(rows))};

    return {true, fmt("match fraction %.5f within 3 sigma (%.5f) of 1/8; active "
                      "columns per cycle exactly 2.5", frac, 3 * sigma)};
}

/* ---------------- C5..C6: scaling anchors ---------------- */

Verdict c5(const ap3d::ParamSet& base) {
    const long long n_ap = ap3d::ap_pu_count(base.ap, base.unit, 53.0);
    const double lo = 0.985 * double(1 << 20), hi = 1.015 * double(1 << 20);
    if (double(n_ap) < lo || double(n_ap) > hi)
        return {false, fmt("ap pu count at 53 mm2 is %lld, outside [%.0f, %.0f]",
                           n_ap, lo, hi)};
    const long long n_simd = ap3d::simd_pu_count(base.simd, base.unit, 5.3);
    if (n_simd != 768)
        return {false, fmt("simd pu count at 5.3 mm2 is %lld, want 768", n_simd)};
    if (base.simd.cache_cells < 33554432.0)
        return {false, fmt("cache of %.4g cells cannot hold one 32-bit word per ap pu",
                           base.simd.cache_cells)};
    return {true, fmt("53 mm2 hosts %lld ap word rows (2^20 within 1.5%%); 5.3 mm2 "
                      "hosts %lld simd processors beside a %.3g-cell cache", n_ap,
                      n_simd, base.simd.cache_cells)};
}

Verdict c6(const ap3d::ParamSet& base) {
    const double bracket = ap3d::ap_dynamic_bracket(base.ap);
    if (std::abs(bracket - 1.215625) > 1e-12)
        return {false, fmt("dynamic bracket %.15f, want 1.215625", bracket)};

    const double p_ap_ref = ap3d::ap_power_for_count(base.ap, base.unit, 1 << 20);
    if (std::abs(p_ap_ref - 3.3) > 0.05 * 3.3)
        return {false, fmt("ap power at 2^20 pus is %.4f W, outside 3.3 W +-5%%",
                           p_ap_ref)};

    ap3d::ParamSet dmm = base;
    ap3d::apply_workload(dmm, "DMM");
    const double p_simd = ap3d::simd_power_w(dmm.simd, dmm.unit, 5.3);
    const double p_ap = ap3d::ap_power_w(dmm.ap, dmm.unit, 53.0);
    const double ratio = p_simd / p_ap;
    const double density = ratio * (53.0 / 5.3);
    if (ratio <= 2.0)
        return {false, fmt("power ratio %.3f not above 2", ratio)};
    if (density < 20.0 || density > 30.0)
        return {false, fmt("power density ratio %.3f outside [20, 30]", density)};
    return {true, fmt("bracket 1.215625 exact; ap at 2^20 pus %.4f W; equal-speed "
                      "power ratio %.3f > 2; density ratio %.2f in [20, 30]",
                      p_ap_ref, ratio, density)};
}

/* ---------------- C7: thermal solver validation ---------------- */

struct ThermalContext {
    ap3d::ThermalGrid ap_grid, simd_grid;
    ap3d::Floorplan ap_plan, simd_plan;
    double solve_s = 0;
};

Verdict c7(const ap3d::ParamSet& base, ThermalContext& ctx) {
    const ap3d::LayerStack stack = ap3d::LayerStack::default_stack();

    // closed-form slab: uniform power, no overhang
    {
        ap3d::LayerStack flat = stack;
        flat.spreader_margin_um = 0;
        for (auto& l : flat.layers) l.spread = false;
        ap3d::Floorplan f;
        f.width_um = f.height_um = 2000;
        f.total_power_w = 1.0;
        f.blocks.push_back(ap3d::Block{"u", 0, 0, 2000, 2000, 1.0});
        const std::vector<ap3d::PowerMap> maps(4, ap3d::rasterize_power(f, 24));
        const auto grid = ap3d::solve_steady(flat, maps, 24);
        const double area = 2000e-6 * 2000e-6;
        auto half = [&](const ap3d::Layer& l) {
            return l.thickness_um * 1e-6 / (2 * l.conductivity_w_mk);
        };
        std::vector<double> expect(6);
        expect[5] = flat.ambient_c +
                    4.0 * (half(flat.layers[5]) / area + flat.convection_k_per_w);
        for (int l = 4; l >= 0; --l)
            expect[l] = expect[l + 1] + std::min(4, l + 1) *
                        (half(flat.layers[l]) + half(flat.layers[l + 1])) / area;
        for (int l = 0; l < 6; ++l) {
            const auto& g = grid.layers[std::size_t(l)];
            const double got = g.at(g.nx / 2, g.ny / 2);
            if (std::abs(got - expect[std::size_t(l)]) >
                0.01 * (expect[std::size_t(l)] - flat.ambient_c))
                return {false, fmt("slab layer %d reads %.4f C, closed form %.4f C",
                                   l, got, expect[std::size_t(l)])};
        }
    }

    // zero power: ambient exactly
    {
        ap3d::Floorplan f;
        f.width_um = f.height_um = 1000;
        f.blocks.push_back(ap3d::Block{"u", 0, 0, 1000, 1000, 0.0});
        const std::vector<ap3d::PowerMap> maps(4, ap3d::rasterize_power(f, 16));
        const auto grid = ap3d::solve_steady(stack, maps, 16);
        for (const auto& g : grid.layers)
            for (double t : g.t_c)
                if (t != stack.ambient_c)
                    return {false, "zero-power solve is not exactly ambient"};
    }

    // mirror symmetry of a centered source
    {
        ap3d::Floorplan f;
        f.width_um = f.height_um = 2000;
        f.total_power_w = 2.0;
        f.blocks.push_back(ap3d::Block{"u", 500, 500, 1000, 1000, 2.0});
        const std::vector<ap3d::PowerMap> maps(4, ap3d::rasterize_power(f, 32));
        const auto grid = ap3d::solve_steady(stack, maps, 32);
        for (const auto& g : grid.layers)
            for (int iy = 0; iy < g.ny; ++iy)
                for (int ix = 0; ix < g.nx; ++ix) {
                    const double a = g.at(ix, iy);
                    if (std::abs(a - g.at(g.nx - 1 - ix, iy)) > 1e-6 ||
                        std::abs(a - g.at(ix, g.ny - 1 - iy)) > 1e-6)
                        return {false, fmt("asymmetry above 1e-6 in layer %s",
                                           g.name.c_str())};
                }
    }

    // production-size solve, timed, plus the energy balance
    const auto ap_budget = ap3d::ap_power_budget(base.ap, base.unit, 1LL << 20,
                                                 ap3d::ap_keymask_bits(base.ap));
    ctx.ap_plan = ap3d::build_ap_floorplan(base.ap, ap_budget);
    const std::vector<ap3d::PowerMap> ap_maps(4, ap3d::rasterize_power(ctx.ap_plan, 64));
    const auto t0 = std::chrono::steady_clock::now();
    ctx.ap_grid = ap3d::solve_steady(stack, ap_maps, 64);
    ctx.solve_s = seconds_since(t0);
    if (ctx.solve_s >= 10.0)
        return {false, fmt("64x64x6 solve took %.2f s, budget 10 s", ctx.solve_s)};

    const double in_w = 4 * ctx.ap_plan.total_power_w;
    const double out_w = ap3d::convective_outflow_w(stack, ctx.ap_grid);
    if (std::abs(out_w - in_w) > 1e-3 * in_w)
        return {false, fmt("outflow %.5f W vs input %.5f W: imbalance beyond 0.1%%",
                           out_w, in_w)};

    ap3d::ParamSet dmm = base;
    ap3d::apply_workload(dmm, "DMM");
    ctx.simd_plan = ap3d::build_simd_floorplan(
        dmm.simd, ap3d::simd_power_budget(dmm.simd, dmm.unit, 5.3));
    const std::vector<ap3d::PowerMap> sm(4, ap3d::rasterize_power(ctx.simd_plan, 64));
    ctx.simd_grid = ap3d::solve_steady(stack, sm, 64);

    return {true, fmt("slab within 1%% of the resistance chain; energy balance "
                      "%.4f%%; zero power exactly ambient; mirror symmetry under "
                      "1e-6; 64x64x6 solve in %.2f s",
                      100 * std::abs(out_w - in_w) / in_w, ctx.solve_s)};
}

/* ---------------- C8: stacked-die temperature contrasts ---------------- */

const ap3d::Block* block_at(const ap3d::Floorplan& plan, double x, double y) {
    for (const auto& b : plan.blocks)
        if (x >= b.x_um && x < b.x_um + b.w_um && y >= b.y_um && y < b.y_um + b.h_um)
            return &b;
    return nullptr;
}

Verdict c8(const ThermalContext& ctx) {
    const auto ap_stats = ap3d::grid_stats(ctx.ap_grid);
    const auto simd_stats = ap3d::grid_stats(ctx.simd_grid);
    const auto& ap_top = ap_stats.layers[0];
    const auto& simd_top = simd_stats.layers[0];

    const double ap_center = 7300.0 / 2;
    if (std::abs(ap_top.argmax_x_um - ap_center) > ctx.ap_grid.dx_um ||
        std::abs(ap_top.argmax_y_um - ap_center) > ctx.ap_grid.dy_um)
        return {false, fmt("ap hot spot at (%.0f, %.0f) um, not the die center",
                           ap_top.argmax_x_um, ap_top.argmax_y_um)};
    if (ap_top.span_c > 5.0)
        return {false, fmt("ap top-layer span %.2f C exceeds 5 C", ap_top.span_c)};

    if (simd_top.peak_c <= 95.0)
        return {false, fmt("simd peak %.2f C does not clear 95 C", simd_top.peak_c)};
    if (simd_top.peak_c - ap_top.peak_c <= 40.0)
        return {false, fmt("simd-ap peak gap %.2f C not above 40 C",
                           simd_top.peak_c - ap_top.peak_c)};

    const ap3d::Block* hot =
        block_at(ctx.simd_plan, simd_top.argmax_x_um, simd_top.argmax_y_um);
    if (!hot || hot->name.find("/pu") == std::string::npos)
        return {false, fmt("simd hot spot at (%.0f, %.0f) um lands in %s, not a pu "
                           "band", simd_top.argmax_x_um, simd_top.argmax_y_um,
                           hot ? hot->name.c_str() : "no block")};

    // coolest on-die point: inside the L2 block, away from every pu band
    const auto& g = ctx.simd_grid.layers[0];
    double min_t = g.at(0, 0);
    int mi = 0, mj = 0;
    for (int iy = 0; iy < g.ny; ++iy)
        for (int ix = 0; ix < g.nx; ++ix)
            if (g.at(ix, iy) < min_t) {
                min_t = g.at(ix, iy);
                mi = ix;
                mj = iy;
            }
    const double min_x = ctx.simd_grid.x_um(g, mi), min_y = ctx.simd_grid.y_um(g, mj);
    const ap3d::Block* cold = block_at(ctx.simd_plan, min_x, min_y);
    if (!cold || cold->name != "l2")
        return {false, fmt("simd cold spot at (%.0f, %.0f) um lands in %s, not the "
                           "l2", min_x, min_y, cold ? cold->name.c_str() : "no block")};

    // a DRAM die stacked on the ap stays under the retention limits; the simd
    // die does not
    if (ap_stats.peak_c >= 85.0)
        return {false, fmt("ap peak %.2f C trips the 85 C DRAM flag", ap_stats.peak_c)};
    if (!(simd_stats.peak_c > 95.0))
        return {false, "simd peak does not trip the 95 C DRAM flag"};

    return {true, fmt("ap hot spot at die center, span %.2f C <= 5; simd peak "
                      "%.1f C > 95 in a pu band, %.1f C above the ap peak, coolest "
                      "cell inside the l2; DRAM flags: ap %.1f C clean, simd dirty",
                      ap_top.span_c, simd_top.peak_c,
                      simd_top.peak_c - ap_top.peak_c, ap_stats.peak_c)};
}

/* ---------------- C9: break-even structure ---------------- */

Verdict c9(const ap3d::ParamSet& base) {
    std::string note;
    for (const auto& [name, spec] : base.workloads) {
        if (!(spec.I_s > 0))
            return {false, fmt("workload %s carries no synchronization intensity",
                               name.c_str())};
        ap3d::ParamSet p = base;
        ap3d::apply_workload(p, name);
        double be = 0;
        try {
            be = ap3d::break_even_area(p.simd, p.ap, p.unit, 4.0, 600.0);
        } catch (const std::exception& e) {
            return {false, fmt("workload %s has no break-even in [4, 600] mm2: %s",
                               name.c_str(), e.what())};
        }
        const double s = ap3d::simd_speedup(p.simd, p.unit, 600.0);
        const double cap = 1.0 / p.simd.I_s;
        if (s > cap || s < 0.99 * cap)
            return {false, fmt("workload %s: speedup %.2f at 600 mm2 not within 1%% "
                               "of 1/I_s=%.2f", name.c_str(), s, cap)};
        note += fmt("%s%s %.1f mm2", note.empty() ? "" : ", ", name.c_str(), be);
    }
    return {true, "break-even areas: " + note + "; saturation at 1/I_s within 1%"};
}

/* ---------------- C10: byte-identical artifacts ---------------- */

bool run_cli(const std::string& args) {
    const std::string cmd =
        std::string("\"") + AP3D_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
    return std::system(cmd.c_str()) == 0;
}

bool produce(const std::string& dir) {
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string params = std::string(" --params \"") + AP3D_PARAMS_FILE + "\"";
    return run_cli("workload --name fft --n 64 --seed 7" + params + " --out " + dir) &&
           run_cli("workload --name dmm --n 64 --seed 5" + params + " --out " + dir) &&
           run_cli("sweep --workload FFT --steps 40" + params + " --out " + dir) &&
           run_cli("thermal --scenario ap --resolution 24" + params + " --out " + dir) &&
           run_cli("floorplan-dump" + params + " --out " + dir);
}

Verdict c10() {
    if (std::string(AP3D_CLI_PATH).empty())
        return {false, "cli path not compiled in"};
    const std::string da = "acceptance_run_a", db = "acceptance_run_b";
    if (!produce(da) || !produce(db))
        return {false, "a cli invocation exited nonzero"};

    std::vector<std::string> names;
    for (const auto& e : fs::directory_iterator(da))
        names.push_back(e.path().filename().string());
    std::sort(names.begin(), names.end());
    if (names.empty()) return {false, "cli produced no artifacts"};

    auto slurp = [](const fs::path& p) {
        std::ifstream f(p, std::ios::binary);
        std::ostringstream ss;
        ss << f.rdbuf();
        return ss.str();
    };
    for (const auto& n : names) {
        if (!fs::exists(fs::path(db) / n))
            return {false, fmt("second run is missing %s", n.c_str())};
        if (slurp(fs::path(da) / n) != slurp(fs::path(db) / n))
            return {false, fmt("artifact %s differs between identically seeded runs",
                               n.c_str())};
    }
    return {true, fmt("%zu artifacts (csv/json/pgm) byte-identical across repeated "
                      "seeded runs", names.size())};
}

}  // namespace

int main() {
    const ap3d::ParamSet base = ap3d::load_params(AP3D_PARAMS_FILE);
    ThermalContext ctx;

    struct Item {
        int id;
        const char* label;
        std::function<Verdict()> run;
    };
    const std::vector<Item> items = {
        {1, "add cycle law", [] { return c1(); }},
        {2, "adder truth table and pass order", [] { return c2(); }},
        {3, "kernel and workload oracles", [] { return c3(); }},
        {4, "pass statistics", [] { return c4(); }},
        {5, "pu counts", [&] { return c5(base); }},
        {6, "power anchors", [&] { return c6(base); }},
        {7, "thermal solver validation", [&] { return c7(base, ctx); }},
        {8, "stack temperature contrasts", [&] { return c8(ctx); }},
        {9, "break-even structure", [&] { return c9(base); }},
        {10, "artifact determinism", [] { return c10(); }},
    };

    bool all = true;
    for (const auto& item : items) {
        Verdict v;
        try {
            v = item.run();
        } catch (const std::exception& e) {
            v = {false, fmt("unhandled error: %s", e.what())};
        }
        std::printf("[%s] C%d %s: %s\n", v.pass ? "PASS" : "FAIL", item.id,
                    item.label, v.detail.c_str());
        std::fflush(stdout);
        all = all && v.pass;
    }
    return all ? 0 : 1;
}
