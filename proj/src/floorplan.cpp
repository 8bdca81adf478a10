#include "ap3d/floorplan.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace ap3d {

namespace {

constexpr double kEdgeEpsUm = 1e-6;  // slack for shared edges

std::string block_name(const char* prefix, int a, int b) {
    char buf[64];
    if (b >= 0)
        std::snprintf(buf, sizeof buf, "%s%02d_%02d", prefix, a, b);
    else
        std::snprintf(buf, sizeof buf, "%s%02d", prefix, a);
    return buf;
}

}  // namespace

void Floorplan::validate() const {
    if (width_um <= 0 || height_um <= 0)
        throw std::invalid_argument("floorplan: die dimensions must be positive");
    for (const Block& b : blocks) {
        if (b.w_um <= 0 || b.h_um <= 0)
            throw std::invalid_argument("floorplan: block '" + b.name +
                                        "' has nonpositive size");
        if (b.power_w < 0)
            throw std::invalid_argument("floorplan: block '" + b.name +
                                        "' has negative power");
        if (b.x_um < -kEdgeEpsUm || b.y_um < -kEdgeEpsUm ||
            b.x_um + b.w_um > width_um + kEdgeEpsUm ||
            b.y_um + b.h_um > height_um + kEdgeEpsUm)
            throw std::invalid_argument("floorplan: block '" + b.name +
                                        "' extends outside the die");
    }

    // Overlap scan: sort by left edge so each block is only tested against
    // the ones whose x-extent can still reach it.
    std::vector<int> order(blocks.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return blocks[a].x_um < blocks[b].x_um;
    });
    for (size_t i = 0; i < order.size(); ++i) {
        const Block& a = blocks[order[i]];
        const double a_x1 = a.x_um + a.w_um;
        for (size_t j = i + 1; j < order.size(); ++j) {
            const Block& b = blocks[order[j]];
            if (b.x_um >= a_x1 - kEdgeEpsUm) break;
            const double oy = std::min(a.y_um + a.h_um, b.y_um + b.h_um) -
                              std::max(a.y_um, b.y_um);
            if (oy > kEdgeEpsUm)
                throw std::invalid_argument("floorplan: blocks '" + a.name +
                                            "' and '" + b.name + "' overlap");
        }
    }

    double sum = 0;
    for (const Block& b : blocks) sum += b.power_w;
    const double tol = 1e-9 * std::max(1.0, std::abs(total_power_w));
    if (std::abs(sum - total_power_w) > tol)
        throw std::invalid_argument(
            "floorplan: block powers sum to " + std::to_string(sum) +
            " W but the plan declares " + std::to_string(total_power_w) + " W");
}

double ap_keymask_bits(const ApParams& p) {
    const double n_blocks = double(kApBanks * kApBanks) *
                            double(kApBlocksPerBank * kApBlocksPerBank);
    return n_blocks * 2.0 * double(p.k) * double(p.m);
}

Floorplan build_ap_floorplan(const ApParams& p, const ApPowerBudget& budget) {
    const int blocks_per_edge = kApBanks * kApBlocksPerBank;  // 64
    const int n_blocks = blocks_per_edge * blocks_per_edge;   // 4096
    const double die = kApDieUm;
    const double bw = die / blocks_per_edge;  // 114.0625, exact in binary
    const double bh = bw;

    // Register strips: key/mask flip-flops across the top of each block,
    // the tag column down the right edge. Fractions approximate the area
    // of 2*k*m FFs and 256 tag latches next to a 256x256 cell array.
    const double km_h = 0.06 * bh;
    const double tag_w = 0.03 * bw;
    const double arr_w = bw - tag_w;
    const double arr_h = bh - km_h;

    const double leak_density = budget.leak_w / (die * die);  // W per um^2
    const double arr_p = budget.array_w / n_blocks;
    const double km_p = budget.keymask_w / n_blocks;

    Floorplan f;
    f.width_um = die;
    f.height_um = die;
    f.blocks.reserve(size_t(n_blocks) * 3);
    for (int by = 0; by < blocks_per_edge; ++by) {
        for (int bx = 0; bx < blocks_per_edge; ++bx) {
            const double x = bx * bw;
            const double y = by * bh;
            const std::string stem = block_name("blk", by, bx);
            f.blocks.push_back({stem + "/array", x, y, arr_w, arr_h,
                                arr_p + leak_density * arr_w * arr_h});
            f.blocks.push_back({stem + "/tag", x + arr_w, y, tag_w, arr_h,
                                leak_density * tag_w * arr_h});
            f.blocks.push_back({stem + "/keymask", x, y + arr_h, bw, km_h,
                                km_p + leak_density * bw * km_h});
        }
    }
    f.total_power_w = budget.array_w + budget.keymask_w + budget.leak_w;
    f.validate();
    (void)p;
    return f;
}

Floorplan build_simd_floorplan(const SimdParams& p, const SimdPowerBudget& budget) {
    const double die = kSimdDieUm;
    const double tile = die / 4;  // 575
    // Tile interior, bottom to top: PU array, register file, L1 slice.
    const double pu_h = 0.60 * tile;
    const double rf_h = 0.15 * tile;
    const double l1_h = tile - pu_h - rf_h;

    // Leakage covers switching logic (PU + RF); the cache terms carry none.
    const double logic_area = kSimdTiles * tile * (pu_h + rf_h);
    const double leak_density = budget.leak_w / logic_area;
    const double pu_p = budget.pu_w / kSimdTiles;
    const double rf_p = budget.rf_w / kSimdTiles;
    const double l1_p = 0.5 * budget.sync_w / kSimdTiles;
    const double l2_p = 0.5 * budget.sync_w;

    Floorplan f;
    f.width_um = die;
    f.height_um = die;
    int idx = 0;
    for (int ty = 0; ty < 4; ++ty) {
        for (int tx = 0; tx < 4; ++tx) {
            if (ty >= 1 && ty <= 2 && tx >= 1 && tx <= 2) continue;  // L2 site
            const double x = tx * tile;
            const double y = ty * tile;
            const std::string stem = block_name("tile", idx++, -1);
            f.blocks.push_back({stem + "/pu", x, y, tile, pu_h,
                                pu_p + leak_density * tile * pu_h});
            f.blocks.push_back({stem + "/rf", x, y + pu_h, tile, rf_h,
                                rf_p + leak_density * tile * rf_h});
            f.blocks.push_back({stem + "/l1", x, y + pu_h + rf_h, tile, l1_h, l1_p});
        }
    }
    f.blocks.push_back({"l2", tile, tile, 2 * tile, 2 * tile, l2_p});
    f.total_power_w = budget.pu_w + budget.rf_w + budget.sync_w + budget.leak_w;
    f.validate();
    (void)p;
    return f;
}

double PowerMap::total() const {
    double s = 0;
    for (double v : w) s += v;
    return s;
}

PowerMap rasterize_power(const Floorplan& f, int resolution) {
    if (resolution < 16)
        throw std::invalid_argument("rasterize_power: resolution must be >= 16");
    f.validate();

    PowerMap m;
    m.nx = resolution;
    m.ny = resolution;
    m.width_um = f.width_um;
    m.height_um = f.height_um;
    m.w.assign(size_t(resolution) * resolution, 0.0);
    const double dx = f.width_um / resolution;
    const double dy = f.height_um / resolution;

    for (const Block& b : f.blocks) {
        if (b.power_w == 0) continue;
        const double x1 = b.x_um + b.w_um;
        const double y1 = b.y_um + b.h_um;
        const double inv_area = 1.0 / (b.w_um * b.h_um);
        int ix0 = std::clamp(int(std::floor(b.x_um / dx)), 0, resolution - 1);
        int ix1 = std::clamp(int(std::ceil(x1 / dx)), 1, resolution);
        int iy0 = std::clamp(int(std::floor(b.y_um / dy)), 0, resolution - 1);
        int iy1 = std::clamp(int(std::ceil(y1 / dy)), 1, resolution);
        for (int iy = iy0; iy < iy1; ++iy) {
            const double oy = std::min(y1, (iy + 1) * dy) - std::max(b.y_um, iy * dy);
            if (oy <= 0) continue;
            for (int ix = ix0; ix < ix1; ++ix) {
                const double ox =
                    std::min(x1, (ix + 1) * dx) - std::max(b.x_um, ix * dx);
                if (ox <= 0) continue;
                m.w[size_t(iy) * resolution + ix] += b.power_w * ox * oy * inv_area;
            }
        }
    }
    return m;
}

std::string floorplan_to_json(const Floorplan& f) {
    nlohmann::json j;
    j["width_um"] = f.width_um;
    j["height_um"] = f.height_um;
    j["total_power_w"] = f.total_power_w;
    nlohmann::json arr = nlohmann::json::array();
    for (const Block& b : f.blocks) {
        nlohmann::json jb;
        jb["name"] = b.name;
        jb["x_um"] = b.x_um;
        jb["y_um"] = b.y_um;
        jb["w_um"] = b.w_um;
        jb["h_um"] = b.h_um;
        jb["power_w"] = b.power_w;
        arr.push_back(jb);
    }
    j["blocks"] = std::move(arr);
    return j.dump(2) + "\n";
}

Floorplan load_floorplan(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open floorplan file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("floorplan JSON parse error in " + path + ": " +
                                 e.what());
    }
    Floorplan f;
    try {
        f.width_um = j.at("width_um").get<double>();
        f.height_um = j.at("height_um").get<double>();
        f.total_power_w = j.at("total_power_w").get<double>();
        for (const auto& jb : j.at("blocks")) {
            Block b;
            b.name = jb.at("name").get<std::string>();
            b.x_um = jb.at("x_um").get<double>();
            b.y_um = jb.at("y_um").get<double>();
            b.w_um = jb.at("w_um").get<double>();
            b.h_um = jb.at("h_um").get<double>();
            b.power_w = jb.at("power_w").get<double>();
            f.blocks.push_back(std::move(b));
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("floorplan " + path + ": " + e.what());
    }
    f.validate();
    return f;
}

}  // namespace ap3d
