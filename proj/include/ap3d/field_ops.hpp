#pragma once

#include "ap3d/kernels.hpp"

namespace ap3d {

/* Compositions of compare/parallel_write used by the workload codes. All of
 * them run through the array, so every cycle and bit event lands in the
 * ledger; several fold tags on the host, which the array API allows. */

/* tag of rows whose column is 1. One compare cycle. */
BitVector column_ones(ApArray& a, std::size_t col);

/* dst := src on every row. Clears dst, then writes the 1 bits per column:
 * 2 + 2*width cycles. Fields must be disjoint and equally wide. */
void copy_field(ApArray& a, const FieldSpec& src, const FieldSpec& dst);

/* dst := src on rows tagged in `rows`, untouched elsewhere. Cannot pre-clear,
 * so both polarities are written per column: 4*width cycles. */
void select_field(ApArray& a, const FieldSpec& src, const FieldSpec& dst,
                  const BitVector& rows);

/* field := v on every row (2 cycles) or on tagged rows only (1 cycle, the
 * caller already holds the tag). */
void write_constant(ApArray& a, const FieldSpec& f, std::uint64_t v);
void write_constant_rows(ApArray& a, const FieldSpec& f, std::uint64_t v,
                         const BitVector& rows);

/* col := !col on every row: compare + two writes, 3 cycles. Flipping the MSB
 * converts between two's-complement and excess-2^(m-1) order, which is what
 * makes unsigned compares and LUT domains work on signed data. */
void flip_column(ApArray& a, std::size_t col);

/* f := -f (two's complement) on rows tagged in `rows`; scratch must be a
 * disjoint field of equal width, borrow_col a column outside both. Leaves
 * scratch = -f_old on every row. */
void negate_field_rows(ApArray& a, const FieldSpec& f, const FieldSpec& scratch,
                       std::size_t borrow_col, const BitVector& rows);

/* Adds the carry column into `f` starting at bit 0, half-adder per bit:
 * 4*width cycles. Used to extend a narrow add into a wider accumulator. */
void ripple_carry(ApArray& a, const FieldSpec& f, std::size_t carry_col);

/* Host readout of one row's field through read_row (one cycle). */
std::uint64_t read_field(ApArray& a, std::size_t row, const FieldSpec& f);

/* Host load of one row's field through write_row (one cycle). */
void write_field(ApArray& a, std::size_t row, const FieldSpec& f, std::uint64_t v);

}  // namespace ap3d
