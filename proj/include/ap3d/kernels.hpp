#pragma once

#include <cstdint>
#include <vector>

#include "ap3d/ap_array.hpp"

namespace ap3d {

/* A contiguous run of bit columns interpreted as an unsigned integer,
 * LSB at `offset`. Fields are a naming convenience; the array itself is
 * untyped bits. */
struct FieldSpec {
    std::size_t offset = 0;
    std::size_t width = 0;

    std::size_t col(std::size_t bit) const { return offset + bit; }
    std::size_t msb_col() const { return offset + width - 1; }
    bool overlaps(const FieldSpec& o) const {
        return offset < o.offset + o.width && o.offset < offset + width;
    }
    bool contains_col(std::size_t c) const { return c >= offset && c < offset + width; }
};

/* One compare-then-write step of a truth-table walk. `match` holds one bit
 * per role; `write` holds one bit per written role, in ascending role order. */
struct Pass {
    std::vector<std::uint8_t> match;
    std::vector<std::uint8_t> write;
};

/* An ordered list of passes over `n_roles` bit columns. Each pass compares
 * all roles and rewrites the roles listed in `write_roles`. Order is
 * load-bearing: a pass rewrites columns that later passes compare, and the
 * shipped tables are sequenced so no row can fire twice in one walk.
 * Entries whose outputs equal their inputs are omitted (no-action states). */
struct PassTable {
    unsigned n_roles = 0;
    std::vector<unsigned> write_roles;
    std::vector<Pass> passes;
};

/* Bit-serial full adder on roles (carry, b, a), rewriting (carry', sum) into
 * (carry, b). Four active transitions; two cycles each. */
PassTable full_adder_table();

/* Bit-serial full subtractor on roles (borrow, b, a) computing b - a,
 * rewriting (borrow', diff) into (borrow, b). */
PassTable full_subtractor_table();

/* Carry propagation step on roles (carry, p): p' = p xor carry,
 * carry' = p and carry. */
PassTable half_adder_table();

/* Runs every pass of `table` once, binding role i to column role_cols[i].
 * Costs 2 * passes.size() cycles. */
void apply_pass_table(ApArray& a, const PassTable& table,
                      const std::vector<std::size_t>& role_cols);

/* Tags all rows (mask-free compare) and writes zeros into `cols`: the
 * standard two-cycle column initialization used before add/subtract. */
void clear_columns(ApArray& a, const std::vector<std::size_t>& cols);
void clear_field(ApArray& a, const FieldSpec& f);

/* fieldB := fieldA + fieldB (mod 2^m), final carry in carry_col.
 * Requires carry_col == 0 beforehand (clear_columns). Exactly 8m cycles:
 * m bit positions, 4 passes each, 2 cycles per pass. */
void vector_add(ApArray& a, const FieldSpec& fieldA, const FieldSpec& fieldB,
                std::size_t carry_col);

/* fieldB := fieldB - fieldA (mod 2^m), final borrow in borrow_col.
 * Requires borrow_col == 0 beforehand. Exactly 8m cycles. */
void vector_subtract(ApArray& a, const FieldSpec& fieldA, const FieldSpec& fieldB,
                     std::size_t borrow_col);

/* Unsigned per-row A > B, evaluated MSB first with two compares per bit
 * (greater-at / less-at); fields are untouched. Exactly 2m cycles. */
BitVector vector_compare_gt(ApArray& a, const FieldSpec& fieldA, const FieldSpec& fieldB);

/* fieldP := fieldA * fieldB per row; fieldP must be 2m wide and zeroed.
 * Long multiplication, multiplier bits LSB first: each window add targets
 * product bits [j, j+m) and uses product bit j+m as its carry column (all
 * bits above the window are still zero, so no carry initialization and no
 * ripple past the window is ever needed). Each window-add pass carries the
 * multiplier bit as an extra compare role, which is what makes the add
 * conditional on that bit. Exactly 8m^2 cycles. */
void vector_multiply(ApArray& a, const FieldSpec& fieldA, const FieldSpec& fieldB,
                     const FieldSpec& fieldP);

/* fieldY := table[fieldX] per row. |table| must be exactly 2^fieldX.width and
 * every value must fit fieldY. One compare+write sweep per table index:
 * exactly 2^(width+1) cycles regardless of row contents. */
void lut_apply(ApArray& a, const FieldSpec& fieldX, const FieldSpec& fieldY,
               const std::vector<std::uint64_t>& table);

/* Moves the field value of row i to row i+distance (vacated rows zero-filled,
 * values shifted past either end dropped). Serial one-row reads and writes:
 * 2*(n-|d|) + |d| cycles for 0 < |d| < n, n cycles for |d| >= n, 0 for d=0. */
void shift_rows(ApArray& a, const FieldSpec& f, std::ptrdiff_t distance);

/* Host-side helpers for packing test vectors and reading results; these touch
 * BitVectors only and cost no cycles. */
std::uint64_t field_value(const BitVector& row, const FieldSpec& f);
void set_field_value(BitVector& row, const FieldSpec& f, std::uint64_t v);

}  // namespace ap3d
