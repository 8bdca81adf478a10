#pragma once

#include <cstdint>
#include <iosfwd>

#include "ap3d/bitvec.hpp"

namespace ap3d {

/* Event counters accumulated by ApArray. cycles advances by one per compare,
 * parallel_write, write_row or read_row. The bit counters feed the energy
 * accounting downstream:
 *   compare        every row pays popcount(mask) compared bits
 *   parallel_write tagged rows absorb the written bits; untagged rows see the
 *                  same bit lines driven without a state change (miswrites)
 *   write_row      single-row write, popcount(mask) bits, no miswrites
 */
struct EventLedger {
    std::uint64_t cycles = 0;
    std::uint64_t matches = 0;        // tag bits raised, summed over compares
    std::uint64_t mismatches = 0;     // rows left untagged, summed over compares
    std::uint64_t compare_bits = 0;   // n_rows * popcount(mask) per compare
    std::uint64_t write_bits = 0;
    std::uint64_t miswrite_bits = 0;

    EventLedger operator-(const EventLedger& o) const;
    EventLedger& operator+=(const EventLedger& o);
};

/* Word-parallel, bit-serial associative array: n_rows words of `width` bit
 * cells plus a one-bit-per-row tag register. compare() tags every row whose
 * masked cells equal the masked key (an all-zero mask tags every row);
 * parallel_write() rewrites the masked columns of every tagged row in one
 * cycle. Rows double as processing units, so row count is the degree of
 * parallelism and all per-op costs land in the ledger.
 *
 * Tags are kept in the array and also returned by value so callers can
 * combine them (AND/OR/NOT) host-side between passes.
 */
class ApArray {
public:
    ApArray(std::size_t n_rows, std::size_t width);

    std::size_t n_rows() const { return n_rows_; }
    std::size_t width() const { return width_; }

    const BitVector& compare(const BitVector& key, const BitVector& mask);
    void parallel_write(const BitVector& key, const BitVector& mask, const BitVector& tag);
    void write_row(std::size_t row, const BitVector& data, const BitVector& mask);
    BitVector read_row(std::size_t row, const BitVector& mask);

    const BitVector& tag() const { return tag_; }
    const EventLedger& ledger() const { return ledger_; }
    EventLedger reset_ledger();  // returns the counts accumulated so far

    /* Host-side inspection; free of charge, for tests and result readout. */
    bool cell(std::size_t row, std::size_t col) const;

    /* Fixture I/O: one row per line of '0'/'1', highest column leftmost. */
    void load_rows(std::istream& in);
    void dump_rows(std::ostream& out) const;

    /* Optional line-delimited op trace: one record per ledger event. */
    void set_trace(std::ostream* sink) { trace_ = sink; }
    void trace_note(const std::string& note);  // comment line from a caller

private:
    void check_row(std::size_t row) const;
    void check_width(const BitVector& v, const char* what) const;

    std::size_t n_rows_;
    std::size_t width_;
    std::size_t words_;                 // words per row
    std::vector<std::uint64_t> cells_;  // row-major
    BitVector tag_;
    EventLedger ledger_;
    std::ostream* trace_ = nullptr;
};

}  // namespace ap3d
