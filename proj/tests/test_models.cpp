#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ap3d/models.hpp"

using ap3d::ApParams;
using ap3d::ParamSet;
using ap3d::SimdParams;
using ap3d::UnitSystem;

namespace {

ParamSet shipped() { return ap3d::load_params(ap3d::default_params_dir() + "/tables.json"); }

}  // namespace

TEST_CASE("pu counts at the reference areas") {
    const ParamSet p = shipped();
    CHECK(p.simd.pu_cells() == 21248);
    CHECK(p.ap.pu_cells() == 512);
    CHECK(ap3d::simd_pu_count(p.simd, p.unit, 5.3) == 768);
    CHECK(ap3d::ap_pu_count(p.ap, p.unit, 53.0) == 1035156);
    // 1e-4 mm2 is 1000 cells: still one word row
    CHECK(ap3d::ap_pu_count(p.ap, p.unit, 1e-4) == 1);
    CHECK_THROWS(ap3d::simd_pu_count(p.simd, p.unit, 3.6));  // under the cache floor
    CHECK_THROWS(ap3d::ap_pu_count(p.ap, p.unit, 1e-6));
}

TEST_CASE("dynamic bracket and power anchors") {
    const ParamSet p = shipped();
    CHECK(ap3d::ap_dynamic_bracket(p.ap) == doctest::Approx(1.215625).epsilon(1e-12));

    CHECK(ap3d::ap_power_for_count(p.ap, p.unit, 1 << 20) ==
          doctest::Approx(3.32169216).epsilon(1e-12));
    CHECK(ap3d::ap_power_w(p.ap, p.unit, 53.0) ==
          doctest::Approx(3.27918011625).epsilon(1e-12));

    ParamSet dmm = p;
    ap3d::apply_workload(dmm, "DMM");
    CHECK(ap3d::simd_power_w(dmm.simd, dmm.unit, 5.3) ==
          doctest::Approx(7.380747548328705).epsilon(1e-9));

    const double ratio = ap3d::simd_power_w(dmm.simd, dmm.unit, 5.3) /
                         ap3d::ap_power_w(dmm.ap, dmm.unit, 53.0);
    CHECK(ratio > 2.0);
    CHECK(ratio * 10.0 > 20.0);  // density ratio: same powers, 10x area gap
    CHECK(ratio * 10.0 < 30.0);
}

TEST_CASE("dmm calibration equalizes the reference pair") {
    ParamSet p = shipped();
    ap3d::apply_workload(p, "DMM");
    const double s_ap = ap3d::ap_speedup(p.ap, p.unit, 53.0);
    const double s_simd = ap3d::simd_speedup(p.simd, p.unit, 5.3);
    CHECK(s_ap == doctest::Approx(345.52059173583984).epsilon(1e-12));
    CHECK(s_simd == doctest::Approx(s_ap).epsilon(1e-12));
}

TEST_CASE("power budgets sum to the model totals") {
    const ParamSet p = shipped();
    const auto sb = ap3d::simd_power_budget(p.simd, p.unit, 5.3);
    CHECK(sb.total() == doctest::Approx(ap3d::simd_power_w(p.simd, p.unit, 5.3))
                            .epsilon(1e-15));
    CHECK(sb.pu_w > 0);
    CHECK(sb.rf_w > 0);
    CHECK(sb.sync_w > 0);
    CHECK(sb.leak_w > 0);

    const long long n = 1 << 20;
    const double keymask_bits = 4096.0 * 2 * p.ap.k * p.ap.m;
    const auto ab = ap3d::ap_power_budget(p.ap, p.unit, n, keymask_bits);
    CHECK(ab.total() == doctest::Approx(ap3d::ap_power_for_count(p.ap, p.unit, n))
                            .epsilon(1e-15));
    CHECK(ab.keymask_w == doctest::Approx(0.1048576).epsilon(1e-12));

    ApParams hot = p.ap;
    hot.reg_activity = 10;  // register switching cannot exceed the dynamic total
    CHECK_THROWS(ap3d::ap_power_budget(hot, p.unit, n, keymask_bits));
}

TEST_CASE("break-even area against a closed form") {
    // one-cell SIMD PUs and a negligible cache make the crossing exact:
    // the AP line reaches the saturated SIMD speedup 1/I_s = 10 at the area
    // holding 10 / s_APU = 1e6 word rows, i.e. 512e6 cells = 51.2 mm2
    UnitSystem u;
    SimdParams sp;
    sp.A_PU0 = 1.0 / 1024;
    sp.A_RF0 = 0;
    sp.cache_cells = 1;
    sp.I_s = 0.1;
    ApParams ap;
    ap.s_APU = 1e-5;
    const double be = ap3d::break_even_area(sp, ap, u, 1.0, 100.0);
    CHECK(be == doctest::Approx(51.2).epsilon(1e-4));

    CHECK_THROWS(ap3d::break_even_area(sp, ap, u, 1.0, 2.0));  // no crossing inside
    CHECK_THROWS(ap3d::break_even_area(sp, ap, u, 5.0, 5.0));
}

TEST_CASE("every shipped workload has a break-even area") {
    const ParamSet base = shipped();
    REQUIRE(base.workloads.size() == 3);
    for (const auto& [name, spec] : base.workloads) {
        CAPTURE(name);
        REQUIRE(spec.I_s > 0);
        ParamSet p = base;
        ap3d::apply_workload(p, name);
        const double be = ap3d::break_even_area(p.simd, p.ap, p.unit, 4.0, 600.0);
        CHECK(be > 4.0);
        CHECK(be < 600.0);
        // past the crossing the AP stays ahead
        CHECK(ap3d::ap_speedup(p.ap, p.unit, be * 1.05) >
              ap3d::simd_speedup(p.simd, p.unit, be * 1.05));
    }

    ParamSet fft = base;
    ap3d::apply_workload(fft, "FFT");
    const double be = ap3d::break_even_area(fft.simd, fft.ap, fft.unit, 4.0, 600.0);
    CHECK(be > 21.5);
    CHECK(be < 23.0);
}

TEST_CASE("simd speedup saturates at 1/I_s") {
    const ParamSet base = shipped();
    for (const auto& [name, spec] : base.workloads) {
        CAPTURE(name);
        ParamSet p = base;
        ap3d::apply_workload(p, name);
        const double s = ap3d::simd_speedup(p.simd, p.unit, 600.0);
        const double cap = 1.0 / p.simd.I_s;
        CHECK(s <= cap);
        CHECK(s >= 0.99 * cap);
    }
}

TEST_CASE("sweeps cover the requested grid") {
    const ParamSet p = shipped();
    const auto rows = ap3d::sweep_ap(p.ap, p.unit, 4.0, 600.0, 50);
    REQUIRE(rows.size() == 50);
    CHECK(rows.front().area_mm2 == doctest::Approx(4.0));
    CHECK(rows.back().area_mm2 == doctest::Approx(600.0));
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i].area_mm2 > rows[i - 1].area_mm2);
        CHECK(rows[i].speedup >= rows[i - 1].speedup);
    }
    for (const auto& r : rows)
        CHECK(r.power_density_w_mm2 == doctest::Approx(r.power_w / r.area_mm2));

    std::ostringstream csv;
    ap3d::write_sweep_csv(csv, rows);
    CHECK(csv.str().rfind("area_mm2,speedup,power_w,power_density_w_mm2\n", 0) == 0);
    CHECK_THROWS(ap3d::sweep_ap(p.ap, p.unit, 4.0, 600.0, 1));
    CHECK_THROWS(ap3d::sweep_simd(p.simd, p.unit, 600.0, 4.0, 10));
}

TEST_CASE("parameter loading") {
    const ParamSet p = shipped();
    CHECK(p.unit.sram_cell_area_um2 == 0.1);
    CHECK(p.unit.cells_per_mm2() == doctest::Approx(1e7));
    CHECK(p.simd.cache_cells == doctest::Approx(3.668e7));
    CHECK(p.workloads.at("DMM").m == 8);
    CHECK(p.workloads.at("FFT").N == 64);
    CHECK(p.workloads.at("BS").N == 256);

    ParamSet q = p;
    CHECK_THROWS(ap3d::apply_workload(q, "nope"));
    CHECK_THROWS(ap3d::load_params("does_not_exist.json"));

    {
        std::ofstream bad("tmp_bad_params.json");
        bad << "{ \"unit\": { \"sram_cell_area_um2\": \"oops\" } }";
    }
    CHECK_THROWS(ap3d::load_params("tmp_bad_params.json"));
    std::remove("tmp_bad_params.json");

    setenv("AP3D_PARAMS_DIR", "/somewhere/else", 1);
    CHECK(ap3d::default_params_dir() == "/somewhere/else");
    unsetenv("AP3D_PARAMS_DIR");
}
