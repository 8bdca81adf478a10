#include "ap3d/workloads.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace ap3d {

namespace {

/* Wraps shift_rows so callers accumulate the data-movement share. */
struct ShiftMeter {
    ApArray& ap;
    ShiftStats st;

    void shift(const FieldSpec& f, std::ptrdiff_t d) {
        const std::uint64_t c0 = ap.ledger().cycles;
        shift_rows(ap, f, d);
        st.cycles += ap.ledger().cycles - c0;
        st.calls += 1;
    }
};

/* Tag of rows whose field equals v. One compare cycle. */
BitVector field_eq_tag(ApArray& ap, const FieldSpec& f, std::uint64_t v) {
    BitVector key(ap.width()), mask(ap.width());
    for (std::size_t i = 0; i < f.width; ++i) mask.set(f.col(i), true);
    set_field_value(key, f, v);
    return ap.compare(key, mask);
}

BitVector all_rows(const ApArray& ap) {
    BitVector v(ap.n_rows());
    v.set_all();
    return v;
}

/* Two's-complement encode to a `bits`-wide field, clamped to the signed
 * range. frac fixes the binary point. */
std::uint64_t to_fix(double v, int frac, int bits) {
    const long long hi = (1LL << (bits - 1)) - 1;
    const long long lo = -(1LL << (bits - 1));
    long long q = std::llround(v * double(1LL << frac));
    q = std::min(std::max(q, lo), hi);
    return std::uint64_t(q) & ((bits >= 64) ? ~0ULL : ((1ULL << bits) - 1));
}

std::int64_t from_fix(std::uint64_t raw, int bits) {
    const std::uint64_t sign = 1ULL << (bits - 1);
    raw &= (bits >= 64) ? ~0ULL : ((1ULL << bits) - 1);
    return (raw & sign) ? std::int64_t(raw) - (std::int64_t(1) << bits)
                        : std::int64_t(raw);
}

int ilog2_exact(std::uint64_t v, const char* what) {
    if (v == 0 || (v & (v - 1)) != 0)
        throw std::invalid_argument(std::string(what) + " must be a power of two");
    int b = 0;
    while ((1ULL << b) < v) ++b;
    return b;
}

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

void finish_run(WorkloadRun& r) {
    double sq = 0;
    r.max_abs_err = 0;
    for (std::size_t i = 0; i < r.outputs.size(); ++i) {
        const double e = std::abs(r.outputs[i] - r.expected[i]);
        r.max_abs_err = std::max(r.max_abs_err, e);
        sq += e * e;
    }
    r.rms_err = r.outputs.empty() ? 0 : std::sqrt(sq / double(r.outputs.size()));
}

}  // namespace

/* ---------------- dense matrix multiply ---------------- */

namespace {

/* Column offsets for the matrix-product layout; one row per output cell. */
struct DmmLayout {
    int m, lg, acc_w;
    FieldSpec fa, fb, prod, acc, acc_lo, acc_hi, s, s2, cidx, ridx;
    std::size_t carry;

    DmmLayout(int n, int mm) : m(mm) {
        lg = ilog2_exact(std::uint64_t(n), "matrix side");
        acc_w = 2 * m + lg;
        std::size_t o = 0;
        fa = {o, std::size_t(m)};
        o += m;
        fb = {o, std::size_t(m)};
        o += m;
        prod = {o, std::size_t(2 * m)};
        o += 2 * m;
        acc = {o, std::size_t(acc_w)};
        acc_lo = {o, std::size_t(2 * m)};
        acc_hi = {o + std::size_t(2 * m), std::size_t(lg)};
        o += acc_w;
        carry = o++;
        s = {o, std::size_t(m)};
        o += m;
        s2 = {o, std::size_t(m)};
        o += m;
        cidx = {o, std::size_t(lg)};
        o += lg;
        ridx = {o, std::size_t(lg)};
        o += lg;
        width = o;
    }
    std::size_t width;
};

/* In-place rotation of `f` by `d` positions within each group, applied to the
 * rows tagged in `sel` (tied groups: along_j rotates the n entries of one
 * matrix row, otherwise the n entries of one column, which sit n rows apart).
 * Wrapping entries come from a second shifted copy chosen by an index
 * compare, so the whole move stays inside the array. */
void dmm_rotate(ApArray& ap, ShiftMeter& sm, const DmmLayout& L, int n,
                const FieldSpec& f, int d, bool along_j, const BitVector* sel) {
    const std::ptrdiff_t step = along_j ? d : std::ptrdiff_t(d) * n;
    const std::ptrdiff_t back = along_j ? (n - d) : std::ptrdiff_t(n - d) * n;
    copy_field(ap, f, L.s);
    sm.shift(L.s, -step);
    copy_field(ap, f, L.s2);
    sm.shift(L.s2, back);
    const FieldSpec& idxf = along_j ? L.cidx : L.ridx;
    BitVector wrapped(ap.n_rows());
    for (int v = n - d; v < n; ++v) wrapped = wrapped | field_eq_tag(ap, idxf, v);
    const BitVector use = sel ? *sel : all_rows(ap);
    select_field(ap, L.s, f, use & ~wrapped);
    select_field(ap, L.s2, f, use & wrapped);
}

}  // namespace

std::size_t dmm_width(int n_side, int m) { return DmmLayout(n_side, m).width; }

std::vector<std::uint64_t> dmm_on_array(ApArray& ap, const std::vector<std::uint64_t>& a,
                                        const std::vector<std::uint64_t>& b, int n,
                                        int m, ShiftStats* shifts) {
    if (m < 1 || m > 16)
        throw std::invalid_argument("dmm: entry width must be 1..16 bits");
    const DmmLayout L(n, m);
    const std::size_t cells = std::size_t(n) * n;
    if (a.size() != cells || b.size() != cells)
        throw std::invalid_argument("dmm: operand size does not match n*n");
    if (ap.n_rows() < cells)
        throw std::invalid_argument("dmm: array has fewer rows than matrix cells");
    if (ap.width() != L.width)
        throw std::invalid_argument("dmm: array width does not match layout");
    const std::uint64_t lim = 1ULL << m;
    for (std::size_t i = 0; i < cells; ++i)
        if (a[i] >= lim || b[i] >= lim)
            throw std::invalid_argument("dmm: entry exceeds word width");

    ShiftMeter sm{ap, {}};

    // Load unaligned operands plus each row's (i, j) coordinates.
    BitVector data(ap.width()), full(ap.width());
    full.set_all();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            data.clear_all();
            const std::size_t r = std::size_t(i) * n + j;
            set_field_value(data, L.fa, a[r]);
            set_field_value(data, L.fb, b[r]);
            set_field_value(data, L.cidx, std::uint64_t(j));
            set_field_value(data, L.ridx, std::uint64_t(i));
            ap.write_row(r, data, full);
        }

    // Alignment phase: row i of the left operand rotates left by i, column j
    // of the right one rotates up by j, decomposed into power-of-two moves
    // gated on the index bits.
    ap.trace_note("dmm align");
    for (int k = 0; k < L.lg; ++k) {
        const int d = 1 << k;
        BitVector selA = column_ones(ap, L.ridx.col(k));
        dmm_rotate(ap, sm, L, n, L.fa, d, true, &selA);
        BitVector selB = column_ones(ap, L.cidx.col(k));
        dmm_rotate(ap, sm, L, n, L.fb, d, false, &selB);
    }

    // n multiply-accumulate steps, rotating both operands between steps.
    for (int t = 0; t < n; ++t) {
        ap.trace_note("dmm step");
        clear_field(ap, L.prod);
        vector_multiply(ap, L.fa, L.fb, L.prod);
        clear_columns(ap, {L.carry});
        vector_add(ap, L.prod, L.acc_lo, L.carry);
        ripple_carry(ap, L.acc_hi, L.carry);
        if (t + 1 < n) {
            dmm_rotate(ap, sm, L, n, L.fa, 1, true, nullptr);
            dmm_rotate(ap, sm, L, n, L.fb, 1, false, nullptr);
        }
    }

    std::vector<std::uint64_t> c(cells);
    for (std::size_t r = 0; r < cells; ++r) c[r] = read_field(ap, r, L.acc);
    if (shifts) *shifts = sm.st;
    return c;
}

WorkloadRun run_dmm(int n_side, int m, std::uint64_t seed) {
    if (n_side < 2 || n_side > 64)
        throw std::invalid_argument("dmm: matrix side must be 2..64");
    const std::size_t cells = std::size_t(n_side) * n_side;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint64_t> dist(0, (1ULL << m) - 1);
    std::vector<std::uint64_t> a(cells), b(cells);
    for (auto& v : a) v = dist(rng);
    for (auto& v : b) v = dist(rng);

    ApArray ap(cells, dmm_width(n_side, m));
    WorkloadRun r;
    r.name = "dmm";
    r.n_rows = ap.n_rows();
    r.width = ap.width();
    const std::vector<std::uint64_t> c = dmm_on_array(ap, a, b, n_side, m, &r.shifts);
    r.ledger = ap.ledger();

    r.outputs.reserve(cells);
    r.expected.reserve(cells);
    bool exact = true;
    for (int i = 0; i < n_side; ++i)
        for (int j = 0; j < n_side; ++j) {
            std::uint64_t ref = 0;
            for (int t = 0; t < n_side; ++t)
                ref += a[std::size_t(i) * n_side + t] * b[std::size_t(t) * n_side + j];
            const std::uint64_t got = c[std::size_t(i) * n_side + j];
            exact = exact && got == ref;
            r.outputs.push_back(double(got));
            r.expected.push_back(double(ref));
        }
    finish_run(r);
    r.ok = exact;
    return r;
}

/* ---------------- radix-2 FFT ---------------- */

namespace {

constexpr int kFftBits = 16;
constexpr int kFftFrac = 8;    // sample format
constexpr int kTwidFrac = 14;  // stage coefficient format

struct FftLayout {
    FieldSpec xr{0, 16}, xi{16, 16}, x2{0, 32};
    FieldSpec p2{32, 32};
    FieldSpec s1{64, 32}, s1re{64, 16}, s1im{80, 16};
    FieldSpec s2{96, 32}, s2re{96, 16}, s2im{112, 16};
    FieldSpec wr{128, 16}, wi{144, 16};
    FieldSpec ma{160, 16}, mb{176, 16};
    FieldSpec prod{192, 32};
    FieldSpec ns16{224, 16};
    FieldSpec mre{256, 16}, mim{272, 16};
    FieldSpec idx{288, 12};
    std::size_t borrow = 300;
    std::size_t width = 301;
};

std::uint32_t bit_reverse(std::uint32_t v, int bits) {
    std::uint32_t r = 0;
    for (int i = 0; i < bits; ++i) r |= ((v >> i) & 1u) << (bits - 1 - i);
    return r;
}

/* out := the signed product a*b scaled by 2^-14, rounded to nearest.
 * Operands go through an absolute-value copy and an unsigned multiply; the
 * product bit just below the extracted window is rippled in as a rounding
 * carry, and rows where the operand signs differ get a sign fixup on the
 * 16-bit result. Truncating here instead loses half an ulp per multiply with
 * a consistent sign, and over log2(n) stages that bias swamps the rounding
 * noise. The carry cannot overflow the window: a full-scale stage
 * coefficient makes an exact product whose rounding bit is zero. */
void fft_signed_mul(ApArray& ap, const FftLayout& L, const FieldSpec& a,
                    const FieldSpec& b, const FieldSpec& out) {
    BitVector sa = column_ones(ap, a.msb_col());
    BitVector sb = column_ones(ap, b.msb_col());
    copy_field(ap, a, L.ma);
    copy_field(ap, b, L.mb);
    negate_field_rows(ap, L.ma, L.ns16, L.borrow, sa);
    negate_field_rows(ap, L.mb, L.ns16, L.borrow, sb);
    clear_field(ap, L.prod);
    vector_multiply(ap, L.ma, L.mb, L.prod);
    copy_field(ap, FieldSpec{L.prod.offset + kTwidFrac, 16}, out);
    ripple_carry(ap, out, L.prod.offset + kTwidFrac - 1);
    negate_field_rows(ap, out, L.ns16, L.borrow, sa ^ sb);
}

}  // namespace

std::size_t fft_width() { return FftLayout{}.width; }

std::vector<FftPoint> fft_on_array(ApArray& ap, const std::vector<FftPoint>& in,
                                   ShiftStats* shifts) {
    const FftLayout L;
    const std::size_t n = in.size();
    const int lg = ilog2_exact(n, "fft size");
    if (lg > 12) throw std::invalid_argument("fft: size exceeds 4096 points");
    if (ap.n_rows() != n)
        throw std::invalid_argument("fft: array must have one row per point");
    if (ap.width() != L.width)
        throw std::invalid_argument("fft: array width does not match layout");
    for (const FftPoint& p : in)
        if (p.re < -32768 || p.re > 32767 || p.im < -32768 || p.im > 32767)
            throw std::invalid_argument("fft: sample outside the 16-bit format");

    ShiftMeter sm{ap, {}};

    BitVector data(ap.width()), full(ap.width());
    full.set_all();
    for (std::size_t r = 0; r < n; ++r) {
        data.clear_all();
        set_field_value(data, L.xr, std::uint64_t(in[r].re) & 0xFFFF);
        set_field_value(data, L.xi, std::uint64_t(in[r].im) & 0xFFFF);
        set_field_value(data, L.idx, r);
        ap.write_row(r, data, full);
    }

    BitVector wmask(ap.width());
    for (std::size_t i = 0; i < 32; ++i) wmask.set(L.wr.offset + i, true);

    for (int h = int(n) / 2; h >= 1; h >>= 1) {
        ap.trace_note("fft stage");
        const int hb = ilog2_exact(std::uint64_t(h), "fft half");
        const bool unit_stage = h == 1;  // every coefficient is 1, skip the multiply

        if (!unit_stage) {
            // Per-row stage coefficient: 1 on the sum rows, W^e on the rest.
            const int estep = int(n) / (2 * h);
            for (std::size_t r = 0; r < n; ++r) {
                std::int64_t cr = 1LL << kTwidFrac, ci = 0;
                if ((r >> hb) & 1u) {
                    const double ang = -2.0 * std::numbers::pi *
                                       double((r & (h - 1)) * estep) / double(n);
                    cr = std::llround(std::cos(ang) * double(1 << kTwidFrac));
                    ci = std::llround(std::sin(ang) * double(1 << kTwidFrac));
                }
                data.clear_all();
                set_field_value(data, L.wr, std::uint64_t(cr) & 0xFFFF);
                set_field_value(data, L.wi, std::uint64_t(ci) & 0xFFFF);
                ap.write_row(r, data, wmask);
            }
        }

        // Partner exchange: both shift directions, then keep the valid half.
        copy_field(ap, L.x2, L.s1);
        sm.shift(L.s1, -std::ptrdiff_t(h));
        copy_field(ap, L.x2, L.s2);
        sm.shift(L.s2, std::ptrdiff_t(h));
        const BitVector high = column_ones(ap, L.idx.col(hb));
        const BitVector low = ~high;
        select_field(ap, L.s1, L.p2, low);
        select_field(ap, L.s2, L.p2, high);

        // Sum and difference against the partner, then keep sum on the low
        // row of each pair and difference on the high row. The difference is
        // partner minus own value, which is the right orientation for the
        // high rows.
        copy_field(ap, L.p2, L.s1);
        clear_columns(ap, {L.borrow});
        vector_add(ap, L.xr, L.s1re, L.borrow);
        clear_columns(ap, {L.borrow});
        vector_add(ap, L.xi, L.s1im, L.borrow);
        copy_field(ap, L.p2, L.s2);
        clear_columns(ap, {L.borrow});
        vector_subtract(ap, L.xr, L.s2re, L.borrow);
        clear_columns(ap, {L.borrow});
        vector_subtract(ap, L.xi, L.s2im, L.borrow);
        select_field(ap, L.s1, L.x2, low);
        select_field(ap, L.s2, L.x2, high);

        if (!unit_stage) {
            // x := x * w, four real products and two adds.
            fft_signed_mul(ap, L, L.xr, L.wr, L.mre);
            fft_signed_mul(ap, L, L.xi, L.wi, L.s1re);
            clear_columns(ap, {L.borrow});
            vector_subtract(ap, L.s1re, L.mre, L.borrow);
            fft_signed_mul(ap, L, L.xr, L.wi, L.mim);
            fft_signed_mul(ap, L, L.xi, L.wr, L.s1re);
            clear_columns(ap, {L.borrow});
            vector_add(ap, L.s1re, L.mim, L.borrow);
            copy_field(ap, L.mre, L.xr);
            copy_field(ap, L.mim, L.xi);
        }
    }

    // Decimation in frequency leaves results bit-reversed.
    BitVector xmask(ap.width());
    for (std::size_t i = 0; i < 32; ++i) xmask.set(L.x2.offset + i, true);
    std::vector<FftPoint> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        const BitVector row = ap.read_row(bit_reverse(std::uint32_t(k), lg), xmask);
        out[k].re = std::int32_t(from_fix(field_value(row, L.xr), kFftBits));
        out[k].im = std::int32_t(from_fix(field_value(row, L.xi), kFftBits));
    }
    if (shifts) *shifts = sm.st;
    return out;
}

WorkloadRun run_fft(int n_points, std::uint64_t seed) {
    if (n_points < 2 || n_points > 4096)
        throw std::invalid_argument("fft: size must be 2..4096");
    std::mt19937_64 rng(seed);
    // Transform gain is ~sqrt(n) on random inputs, so shrink the amplitude
    // with size to keep every bin well inside the +/-128 sample range.
    const double amp = std::min(0.9, 18.0 / std::sqrt(double(n_points)));
    std::uniform_real_distribution<double> dist(-amp, amp);
    std::vector<FftPoint> in(n_points);
    for (FftPoint& p : in) {
        p.re = std::int32_t(std::llround(dist(rng) * (1 << kFftFrac)));
        p.im = std::int32_t(std::llround(dist(rng) * (1 << kFftFrac)));
    }

    ApArray ap(std::size_t(n_points), fft_width());
    WorkloadRun r;
    r.name = "fft";
    r.n_rows = ap.n_rows();
    r.width = ap.width();
    const std::vector<FftPoint> out = fft_on_array(ap, in, &r.shifts);
    r.ledger = ap.ledger();

    // Direct-evaluation reference transform of the loaded samples.
    const double scale = double(1 << kFftFrac);
    r.outputs.reserve(2 * out.size());
    r.expected.reserve(2 * out.size());
    for (int k = 0; k < n_points; ++k) {
        double re = 0, im = 0;
        for (int j = 0; j < n_points; ++j) {
            const double ang = -2.0 * std::numbers::pi *
                               double(std::uint64_t(j) * k % n_points) / double(n_points);
            const double xr = in[j].re / scale, xi = in[j].im / scale;
            re += xr * std::cos(ang) - xi * std::sin(ang);
            im += xr * std::sin(ang) + xi * std::cos(ang);
        }
        r.outputs.push_back(out[k].re / scale);
        r.outputs.push_back(out[k].im / scale);
        r.expected.push_back(re);
        r.expected.push_back(im);
    }
    finish_run(r);
    r.ok = r.max_abs_err <= kFftTolAbs;
    return r;
}

/* ---------------- Black-Scholes ---------------- */

namespace {

constexpr int kBsPriceFrac = 8;   // S, K, prices: Q8.8
constexpr int kBsLogFrac = 11;    // ln values, d1/d2, 1/(sigma sqrt T): Q4.11
constexpr int kBsDiscFrac = 14;   // discount factor: Q2.14
constexpr int kBsCdfFrac = 15;    // CDF values: Q1.15, 1.0 = 32768

struct BsLayout {
    FieldSpec S{0, 16}, K{16, 16}, c1{32, 16}, c2{48, 16}, sv{64, 16}, disc{80, 16};
    FieldSpec lnS{96, 16}, lnK{112, 16}, t{128, 16};
    FieldSpec prod{144, 32};
    FieldSpec ns{176, 32}, ns16{176, 16};
    FieldSpec clampc{208, 32};
    FieldSpec ma{240, 16}, mb{256, 16};
    FieldSpec d1{272, 16}, d2{288, 16};
    FieldSpec phi1{304, 16}, phi2{320, 16};
    FieldSpec pa{336, 16}, pb{352, 16};
    std::size_t borrow = 368;
    std::size_t width = 369;
};

/* ln over the top 12 bits of a Q8.8 value (so a Q8.4 domain), midpoint
 * sampled, Q4.11 two's-complement results. */
const std::vector<std::uint64_t>& ln_table() {
    static const std::vector<std::uint64_t> t = [] {
        std::vector<std::uint64_t> v(4096);
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] = to_fix(std::log((double(i) + 0.5) / 16.0), kBsLogFrac, 16);
        return v;
    }();
    return t;
}

/* Standard normal CDF over the top 13 bits of a Q4.11 argument (a signed
 * Q4.8 domain), midpoint sampled, Q1.15 results. */
const std::vector<std::uint64_t>& cdf_table() {
    static const std::vector<std::uint64_t> t = [] {
        std::vector<std::uint64_t> v(8192);
        for (std::size_t i = 0; i < v.size(); ++i) {
            const double x = (double(from_fix(i, 13)) + 0.5) / 256.0;
            v[i] = std::uint64_t(std::llround(std_normal_cdf(x) * 32768.0));
        }
        return v;
    }();
    return t;
}

/* out := bits [shift, shift+16) of the unsigned product a*b. */
void bs_unsigned_mul(ApArray& ap, const BsLayout& L, const FieldSpec& a,
                     const FieldSpec& b, int shift, const FieldSpec& out) {
    copy_field(ap, a, L.ma);
    copy_field(ap, b, L.mb);
    clear_field(ap, L.prod);
    vector_multiply(ap, L.ma, L.mb, L.prod);
    copy_field(ap, FieldSpec{L.prod.offset + std::size_t(shift), 16}, out);
}

}  // namespace

std::size_t bs_width() { return BsLayout{}.width; }

double bs_price(const BsOption& o) {
    const double sv = o.sigma * std::sqrt(o.t);
    const double kd = o.k * std::exp(-o.r * o.t);
    if (sv <= 0) return std::max(o.s - kd, 0.0);
    const double d1 = (std::log(o.s / o.k) + (o.r + 0.5 * o.sigma * o.sigma) * o.t) / sv;
    return o.s * std_normal_cdf(d1) - kd * std_normal_cdf(d1 - sv);
}

std::vector<double> bs_on_array(ApArray& ap, const std::vector<BsOption>& opts,
                                ShiftStats* shifts) {
    const BsLayout L;
    const std::size_t n = opts.size();
    if (n == 0) throw std::invalid_argument("black-scholes: no options");
    if (ap.n_rows() != n)
        throw std::invalid_argument("black-scholes: array must have one row per option");
    if (ap.width() != L.width)
        throw std::invalid_argument("black-scholes: array width does not match layout");

    // Per-option terms that depend on parameters only (not on S or K) are
    // host side: 1/(sigma sqrt T) with its Q4.11 clamp, (r + sigma^2/2) T,
    // and the discount factor.
    BitVector data(ap.width()), full(ap.width());
    full.set_all();
    for (std::size_t r = 0; r < n; ++r) {
        const BsOption& o = opts[r];
        if (!(o.s >= 0.25 && o.s < 127 && o.k >= 0.25 && o.k < 127))
            throw std::invalid_argument("black-scholes: spot/strike outside (0.25, 127)");
        if (o.sigma < 0 || o.t <= 0)
            throw std::invalid_argument("black-scholes: bad volatility or expiry");
        const double sv = o.sigma * std::sqrt(o.t);
        const double c2 = 1.0 / std::max(sv, 1.0 / 16.0);
        data.clear_all();
        set_field_value(data, L.S, to_fix(o.s, kBsPriceFrac, 16));
        set_field_value(data, L.K, to_fix(o.k, kBsPriceFrac, 16));
        set_field_value(data, L.c1,
                        to_fix((o.r + 0.5 * o.sigma * o.sigma) * o.t, kBsLogFrac, 16));
        set_field_value(data, L.c2, to_fix(std::min(c2, 15.999), kBsLogFrac, 16));
        set_field_value(data, L.sv, to_fix(sv < 1.0 / 16.0 ? 0.0 : sv, kBsLogFrac, 16));
        set_field_value(data, L.disc, to_fix(std::exp(-o.r * o.t), kBsDiscFrac, 16));
        ap.write_row(r, data, full);
    }

    // ln S and ln K, then t := ln S - ln K + c1.
    lut_apply(ap, FieldSpec{L.S.offset + 4, 12}, L.lnS, ln_table());
    lut_apply(ap, FieldSpec{L.K.offset + 4, 12}, L.lnK, ln_table());
    copy_field(ap, L.lnS, L.t);
    clear_columns(ap, {L.borrow});
    vector_subtract(ap, L.lnK, L.t, L.borrow);
    clear_columns(ap, {L.borrow});
    vector_add(ap, L.c1, L.t, L.borrow);

    // d1 := clamp(t * c2, +-8), with the clamp on the unsigned product so the
    // CDF argument always fits its Q4.11 field.
    BitVector st = column_ones(ap, L.t.msb_col());
    copy_field(ap, L.t, L.ma);
    negate_field_rows(ap, L.ma, L.ns16, L.borrow, st);
    copy_field(ap, L.c2, L.mb);
    clear_field(ap, L.prod);
    vector_multiply(ap, L.ma, L.mb, L.prod);
    write_constant(ap, L.clampc, (std::uint64_t(8) << 22) - 1);
    const BitVector over = vector_compare_gt(ap, L.prod, L.clampc);
    write_constant_rows(ap, L.prod, std::uint64_t(8) << 22, over);
    negate_field_rows(ap, L.prod, L.ns, L.borrow, st);
    copy_field(ap, FieldSpec{L.prod.offset + 11, 16}, L.d1);

    // d2 := d1 - sigma sqrt T.
    copy_field(ap, L.d1, L.d2);
    clear_columns(ap, {L.borrow});
    vector_subtract(ap, L.sv, L.d2, L.borrow);

    // CDF lookups and the two price legs.
    lut_apply(ap, FieldSpec{L.d1.offset + 3, 13}, L.phi1, cdf_table());
    lut_apply(ap, FieldSpec{L.d2.offset + 3, 13}, L.phi2, cdf_table());
    bs_unsigned_mul(ap, L, L.K, L.disc, kBsDiscFrac, L.t);  // t := K e^{-rT}
    bs_unsigned_mul(ap, L, L.S, L.phi1, kBsCdfFrac, L.pa);
    bs_unsigned_mul(ap, L, L.t, L.phi2, kBsCdfFrac, L.pb);
    clear_columns(ap, {L.borrow});
    vector_subtract(ap, L.pb, L.pa, L.borrow);
    // Truncation can push a near-zero price fractionally negative; floor it.
    BitVector neg = column_ones(ap, L.pa.msb_col());
    write_constant_rows(ap, L.pa, 0, neg);

    std::vector<double> prices(n);
    for (std::size_t r = 0; r < n; ++r)
        prices[r] = double(read_field(ap, r, L.pa)) / double(1 << kBsPriceFrac);
    if (shifts) {
        shifts->calls = 0;
        shifts->cycles = 0;
    }
    return prices;
}

WorkloadRun run_black_scholes(int n_options, std::uint64_t seed) {
    if (n_options < 1 || n_options > 4096)
        throw std::invalid_argument("black-scholes: option count must be 1..4096");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> spot(20, 120), strike(20, 120),
        expiry(0.25, 2.0), rate(0.0, 0.08), vol(0.15, 0.6);
    std::vector<BsOption> opts(std::size_t(n_options), BsOption{});
    for (BsOption& o : opts) {
        o.s = spot(rng);
        o.k = strike(rng);
        o.t = expiry(rng);
        o.r = rate(rng);
        o.sigma = vol(rng);
    }

    ApArray ap(opts.size(), bs_width());
    WorkloadRun r;
    r.name = "bs";
    r.n_rows = ap.n_rows();
    r.width = ap.width();
    r.outputs = bs_on_array(ap, opts, &r.shifts);
    r.ledger = ap.ledger();

    r.expected.reserve(opts.size());
    bool ok = true;
    for (std::size_t i = 0; i < opts.size(); ++i) {
        const double ref = bs_price(opts[i]);
        r.expected.push_back(ref);
        const double err = std::abs(r.outputs[i] - ref);
        ok = ok && err <= std::max(kBsTolAbs, kBsTolRel * ref);
    }
    finish_run(r);
    r.ok = ok;
    return r;
}

/* ---------------- event ledger to power ---------------- */

TracePower trace_to_power(const EventLedger& e, const ApParams& p, const UnitSystem& u,
                          std::size_t n_rows, std::size_t width_bits,
                          double window_cycles) {
    if (window_cycles <= 0)
        throw std::invalid_argument("trace_to_power: window must be positive");
    TracePower t;
    const double outcomes = double(e.matches) + double(e.mismatches);
    double compare_units = 0;
    if (outcomes > 0)
        compare_units = double(e.compare_bits) *
                        (p.p_m * double(e.matches) + p.p_mm * double(e.mismatches)) /
                        outcomes;
    t.energy_units =
        compare_units + double(e.write_bits) + p.p_mw * double(e.miswrite_bits);
    t.dynamic_w = t.energy_units * u.watts_per_unit() / window_cycles;
    t.area_mm2 = u.cells_to_mm2(p.A_AP0 * double(n_rows) * double(width_bits));
    t.leakage_w = p.gamma_w_mm2 * t.area_mm2;
    t.total_w = t.dynamic_w + t.leakage_w;
    t.density_w_mm2 = t.area_mm2 > 0 ? t.total_w / t.area_mm2 : 0;
    return t;
}

}  // namespace ap3d
