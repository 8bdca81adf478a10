#include "ap3d/io.hpp"

#include <cstdio>

namespace ap3d {

static std::string fmt(const char* spec, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::string fmt_g(double v) { return fmt("%.12g", v); }

std::string fmt_g17(double v) { return fmt("%.17g", v); }

std::string fmt_fix(double v, int decimals) {
    char spec[16];
    std::snprintf(spec, sizeof spec, "%%.%df", decimals);
    return fmt(spec, v);
}

}  // namespace ap3d
