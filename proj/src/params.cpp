#include "ap3d/params.hpp"

#include <cstdlib>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#ifndef AP3D_DEFAULT_PARAMS_DIR
#define AP3D_DEFAULT_PARAMS_DIR "params"
#endif

namespace ap3d {

using nlohmann::json;

static double num(const json& j, const char* section, const char* field) {
    if (!j.contains(field))
        throw std::runtime_error(std::string("params: missing ") + section + "." + field);
    if (!j[field].is_number())
        throw std::runtime_error(std::string("params: ") + section + "." + field +
                                 " must be a number");
    return j[field].get<double>();
}

static unsigned unum(const json& j, const char* section, const char* field) {
    double v = num(j, section, field);
    if (v < 1 || v != static_cast<unsigned>(v))
        throw std::runtime_error(std::string("params: ") + section + "." + field +
                                 " must be a positive integer");
    return static_cast<unsigned>(v);
}

ParamSet load_params(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("params: cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::runtime_error("params: " + path + ": " + e.what());
    }

    ParamSet p;
    const json& u = j.at("unit");
    p.unit.sram_cell_area_um2 = num(u, "unit", "sram_cell_area_um2");
    p.unit.sram_write_power_uw = num(u, "unit", "sram_write_power_uw");

    const json& s = j.at("simd");
    p.simd.A_PU0 = num(s, "simd", "A_PU0");
    p.simd.A_RF0 = num(s, "simd", "A_RF0");
    p.simd.P_PU0 = num(s, "simd", "P_PU0");
    p.simd.P_RF0 = num(s, "simd", "P_RF0");
    p.simd.P_S0 = num(s, "simd", "P_S0");
    p.simd.k = unum(s, "simd", "k");
    p.simd.m = unum(s, "simd", "m");
    p.simd.cache_cells = num(s, "simd", "cache_cells");
    p.simd.I_s = num(s, "simd", "I_s");
    p.simd.gamma_w_mm2 = num(s, "simd", "gamma_w_mm2");

    const json& a = j.at("ap");
    p.ap.A_AP0 = num(a, "ap", "A_AP0");
    p.ap.k = unum(a, "ap", "k");
    p.ap.m = unum(a, "ap", "m");
    p.ap.s_APU = num(a, "ap", "s_APU");
    p.ap.p_mw = num(a, "ap", "p_mw");
    p.ap.p_m = num(a, "ap", "p_m");
    p.ap.p_mm = num(a, "ap", "p_mm");
    p.ap.gamma_w_mm2 = num(a, "ap", "gamma_w_mm2");
    p.ap.reg_ff_power = num(a, "ap", "reg_ff_power");
    p.ap.reg_activity = num(a, "ap", "reg_activity");

    if (j.contains("workloads")) {
        for (auto it = j["workloads"].begin(); it != j["workloads"].end(); ++it) {
            WorkloadSpec w;
            w.name = it.key();
            const json& wj = it.value();
            w.N = unum(wj, w.name.c_str(), "N");
            w.m = unum(wj, w.name.c_str(), "m");
            w.I_s = num(wj, w.name.c_str(), "I_s");
            w.s_APU = num(wj, w.name.c_str(), "s_APU");
            p.workloads[w.name] = w;
        }
    }
    return p;
}

void apply_workload(ParamSet& p, const std::string& workload) {
    auto it = p.workloads.find(workload);
    if (it == p.workloads.end())
        throw std::runtime_error("params: no workload calibration named " + workload);
    p.simd.I_s = it->second.I_s;
    p.ap.s_APU = it->second.s_APU;
}

std::string default_params_dir() {
    if (const char* env = std::getenv("AP3D_PARAMS_DIR"))
        if (*env) return env;
    return AP3D_DEFAULT_PARAMS_DIR;
}

}  // namespace ap3d
