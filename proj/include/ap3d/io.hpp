#pragma once

#include <string>

namespace ap3d {

/* printf-backed float formatting so every emitted file is byte-stable for
 * identical inputs. fmt_g: shortest round-trip (%.17g trimmed via %g rules is
 * not round-trip safe, so use %.17g when needed); fmt_fix: fixed decimals. */
std::string fmt_g(double v);        // %.12g, model/CSV values
std::string fmt_g17(double v);      // %.17g, exact round-trip
std::string fmt_fix(double v, int decimals);

}  // namespace ap3d
