#pragma once

#include <string>
#include <vector>

#include "ap3d/field_ops.hpp"
#include "ap3d/params.hpp"

namespace ap3d {

/* Cycle share of shift_rows (row-to-row data movement) within a run; the
 * three workloads are chosen to span this from zero to roughly a third. */
struct ShiftStats {
    std::uint64_t calls = 0;
    std::uint64_t cycles = 0;
};

struct WorkloadRun {
    std::string name;
    std::size_t n_rows = 0;
    std::size_t width = 0;
    EventLedger ledger;
    ShiftStats shifts;
    std::vector<double> outputs;
    std::vector<double> expected;  // host oracle, same order
    double max_abs_err = 0;
    double rms_err = 0;
    bool ok = false;  // within the documented tolerance for this workload
};

/* Documented accuracy bounds the shipped fixed-point formats achieve against
 * the host oracles. Regression-pinned; run_* set WorkloadRun::ok with them. */
constexpr double kFftTolAbs = 0.75;     // per component, Q8.8 pipeline
constexpr double kBsTolAbs = 0.30;      // price units
constexpr double kBsTolRel = 0.04;      // on prices above kBsTolAbs

/* Dense n x n matrix product, one PU per output element, m-bit unsigned
 * entries into a (2m + log2 n)-bit accumulator. Operand alignment and the
 * per-step rotations run in-array over shift_rows with marker-field selects,
 * so the ledger carries the full communication cost. Result is bit-exact. */
WorkloadRun run_dmm(int n_side, int m, std::uint64_t seed);

/* In-place radix-2 decimation-in-frequency FFT, one PU per point, 16-bit
 * two's-complement components at 8 fraction bits; stage coefficients are
 * host-written at 14 fraction bits. Partner exchange per stage is a pair of
 * opposed shift_rows plus index-bit selects. Inputs are drawn in [-0.9, 0.9]
 * so no stage overflows the format. */
WorkloadRun run_fft(int n_points, std::uint64_t seed);

/* European call pricing, one PU per option, embarrassingly parallel: the
 * ledger shows zero shift_rows. ln and the normal CDF run as lut_apply
 * sweeps (12- and 13-bit domains); per-option rate/volatility terms are
 * host-precomputed constants in dedicated fields. Prices are Q8.8. */
WorkloadRun run_black_scholes(int n_options, std::uint64_t seed);

/* Lower-level entry points running on a caller-built array; run_* wrap these
 * with input generation and oracle checks. Matrices are row-major. */
std::vector<std::uint64_t> dmm_on_array(ApArray& ap, const std::vector<std::uint64_t>& a,
                                        const std::vector<std::uint64_t>& b, int n_side,
                                        int m, ShiftStats* shifts);

struct FftPoint {
    std::int32_t re = 0, im = 0;  // fixed point, 8 fraction bits
};
std::vector<FftPoint> fft_on_array(ApArray& ap, const std::vector<FftPoint>& in,
                                   ShiftStats* shifts);

struct BsOption {
    double s = 0;      // spot
    double k = 0;      // strike
    double r = 0;      // risk-free rate
    double sigma = 0;  // volatility
    double t = 0;      // expiry, years
};
std::vector<double> bs_on_array(ApArray& ap, const std::vector<BsOption>& opts,
                                ShiftStats* shifts);

/* Closed-form call price (double precision), the Black-Scholes oracle. */
double bs_price(const BsOption& o);

/* Array sizes the lower-level entry points expect. */
std::size_t dmm_width(int n_side, int m);
std::size_t fft_width();
std::size_t bs_width();

/* Average power for a traced window: dynamic energy from the event counts
 * weighted by the match/mismatch/miswrite costs, plus leakage for the array
 * footprint. Pure function of its inputs; an empty ledger prices as leakage
 * only. window_cycles sets the averaging window (usually ledger.cycles). */
struct TracePower {
    double energy_units = 0;  // cell-write equivalents over the window
    double dynamic_w = 0;
    double leakage_w = 0;
    double total_w = 0;
    double area_mm2 = 0;
    double density_w_mm2 = 0;
};
TracePower trace_to_power(const EventLedger& e, const ApParams& p, const UnitSystem& u,
                          std::size_t n_rows, std::size_t width_bits,
                          double window_cycles);

}  // namespace ap3d
