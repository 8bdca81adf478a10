#include "ap3d/field_ops.hpp"

#include <stdexcept>

namespace ap3d {

BitVector column_ones(ApArray& a, std::size_t col) {
    BitVector key(a.width()), mask(a.width());
    key.set(col, true);
    mask.set(col, true);
    return a.compare(key, mask);
}

void copy_field(ApArray& a, const FieldSpec& src, const FieldSpec& dst) {
    if (src.width != dst.width)
        throw std::invalid_argument("copy_field: widths differ");
    if (src.overlaps(dst))
        throw std::invalid_argument("copy_field: fields overlap");
    clear_field(a, dst);
    BitVector key(a.width()), mask(a.width()), wkey(a.width()), wmask(a.width());
    for (std::size_t i = 0; i < src.width; ++i) {
        mask.clear_all(); key.clear_all();
        mask.set(src.col(i), true);
        key.set(src.col(i), true);
        const BitVector& ones = a.compare(key, mask);
        wmask.clear_all(); wkey.clear_all();
        wmask.set(dst.col(i), true);
        wkey.set(dst.col(i), true);
        a.parallel_write(wkey, wmask, ones);
    }
}

void select_field(ApArray& a, const FieldSpec& src, const FieldSpec& dst,
                  const BitVector& rows) {
    if (src.width != dst.width)
        throw std::invalid_argument("select_field: widths differ");
    if (src.overlaps(dst))
        throw std::invalid_argument("select_field: fields overlap");
    BitVector key(a.width()), mask(a.width()), wkey(a.width()), wmask(a.width());
    for (std::size_t i = 0; i < src.width; ++i) {
        mask.clear_all();
        mask.set(src.col(i), true);
        wmask.clear_all();
        wmask.set(dst.col(i), true);

        key.clear_all();
        key.set(src.col(i), true);
        BitVector ones = a.compare(key, mask);
        wkey.clear_all(); wkey.set(dst.col(i), true);
        a.parallel_write(wkey, wmask, ones & rows);

        key.clear_all();
        BitVector zeros = a.compare(key, mask);
        wkey.clear_all();
        a.parallel_write(wkey, wmask, zeros & rows);
    }
}

void write_constant(ApArray& a, const FieldSpec& f, std::uint64_t v) {
    BitVector none(a.width());
    const BitVector& all = a.compare(none, none);
    write_constant_rows(a, f, v, all);
}

void write_constant_rows(ApArray& a, const FieldSpec& f, std::uint64_t v,
                         const BitVector& rows) {
    BitVector key(a.width()), mask(a.width());
    for (std::size_t i = 0; i < f.width; ++i) mask.set(f.col(i), true);
    set_field_value(key, f, v);
    a.parallel_write(key, mask, rows);
}

void flip_column(ApArray& a, std::size_t col) {
    BitVector ones = column_ones(a, col);
    BitVector key(a.width()), mask(a.width());
    mask.set(col, true);
    a.parallel_write(key, mask, ones);  // 1 -> 0
    key.set(col, true);
    a.parallel_write(key, mask, ~ones);  // 0 -> 1
}

void negate_field_rows(ApArray& a, const FieldSpec& f, const FieldSpec& scratch,
                       std::size_t borrow_col, const BitVector& rows) {
    write_constant(a, scratch, 0);
    clear_columns(a, {borrow_col});
    vector_subtract(a, f, scratch, borrow_col);  // scratch := 0 - f
    select_field(a, scratch, f, rows);
}

void ripple_carry(ApArray& a, const FieldSpec& f, std::size_t carry_col) {
    if (f.contains_col(carry_col))
        throw std::invalid_argument("ripple_carry: carry column inside field");
    const PassTable t = half_adder_table();
    for (std::size_t i = 0; i < f.width; ++i)
        apply_pass_table(a, t, {carry_col, f.col(i)});
}

std::uint64_t read_field(ApArray& a, std::size_t row, const FieldSpec& f) {
    BitVector mask(a.width());
    for (std::size_t i = 0; i < f.width; ++i) mask.set(f.col(i), true);
    return field_value(a.read_row(row, mask), f);
}

void write_field(ApArray& a, std::size_t row, const FieldSpec& f, std::uint64_t v) {
    BitVector mask(a.width()), data(a.width());
    for (std::size_t i = 0; i < f.width; ++i) mask.set(f.col(i), true);
    set_field_value(data, f, v);
    a.write_row(row, data, mask);
}

}  // namespace ap3d
