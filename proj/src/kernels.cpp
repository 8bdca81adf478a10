#include "ap3d/kernels.hpp"

#include <stdexcept>
#include <string>

namespace ap3d {

PassTable full_adder_table() {
    /* Roles (carry, b, a) -> (carry', sum) written into (carry, b).
     * The four no-action states (000, 010, 101, 111) are skipped. The order
     * matters: 011 fires before 001 and 100 before 110, otherwise a row
     * rewritten by the earlier pass matches the later pattern and fires
     * twice in the same bit position. */
    PassTable t;
    t.n_roles = 3;
    t.write_roles = {0, 1};
    t.passes = {
        {{0, 1, 1}, {1, 0}},
        {{0, 0, 1}, {0, 1}},
        {{1, 0, 0}, {0, 1}},
        {{1, 1, 0}, {1, 0}},
    };
    return t;
}

PassTable full_subtractor_table() {
    /* Roles (borrow, b, a) -> (borrow', b - a - borrow) written into
     * (borrow, b). Same hazard discipline as the adder: within the a=1 pair
     * 001 precedes 011, within the a=0 pair 110 precedes 100. */
    PassTable t;
    t.n_roles = 3;
    t.write_roles = {0, 1};
    t.passes = {
        {{0, 0, 1}, {1, 1}},
        {{0, 1, 1}, {0, 0}},
        {{1, 1, 0}, {0, 0}},
        {{1, 0, 0}, {1, 1}},
    };
    return t;
}

PassTable half_adder_table() {
    /* Roles (carry, p): adds the carry column into p. (1,0) must fire first;
     * the reverse order would take a (1,1) row to (1,0) and then to (0,1). */
    PassTable t;
    t.n_roles = 2;
    t.write_roles = {0, 1};
    t.passes = {
        {{1, 0}, {0, 1}},
        {{1, 1}, {1, 0}},
    };
    return t;
}

void apply_pass_table(ApArray& a, const PassTable& table,
                      const std::vector<std::size_t>& role_cols) {
    if (role_cols.size() != table.n_roles)
        throw std::invalid_argument("apply_pass_table: role/column count mismatch");
    for (auto c : role_cols)
        if (c >= a.width())
            throw std::out_of_range("apply_pass_table: role column past array width");

    BitVector key(a.width()), mask(a.width());
    BitVector wkey(a.width()), wmask(a.width());
    for (unsigned r = 0; r < table.n_roles; ++r) mask.set(role_cols[r], true);
    for (auto r : table.write_roles) wmask.set(role_cols[r], true);

    for (const Pass& p : table.passes) {
        if (p.match.size() != table.n_roles || p.write.size() != table.write_roles.size())
            throw std::invalid_argument("apply_pass_table: malformed pass");
        for (unsigned r = 0; r < table.n_roles; ++r) key.set(role_cols[r], p.match[r]);
        const BitVector& tag = a.compare(key, mask);
        for (std::size_t r = 0; r < table.write_roles.size(); ++r)
            wkey.set(role_cols[table.write_roles[r]], p.write[r]);
        a.parallel_write(wkey, wmask, tag);
    }
}

void clear_columns(ApArray& a, const std::vector<std::size_t>& cols) {
    BitVector key(a.width()), mask(a.width());
    const BitVector& all = a.compare(key, mask);  // empty mask tags every row
    for (auto c : cols) {
        if (c >= a.width()) throw std::out_of_range("clear_columns: column past width");
        mask.set(c, true);
    }
    a.parallel_write(key, mask, all);
}

void clear_field(ApArray& a, const FieldSpec& f) {
    std::vector<std::size_t> cols(f.width);
    for (std::size_t i = 0; i < f.width; ++i) cols[i] = f.col(i);
    clear_columns(a, cols);
}

static void check_field(const ApArray& a, const FieldSpec& f, const char* name) {
    if (f.width == 0)
        throw std::invalid_argument(std::string("kernel: ") + name + " has zero width");
    if (f.offset + f.width > a.width())
        throw std::invalid_argument(std::string("kernel: ") + name + " runs past array width");
}

static void check_disjoint(const FieldSpec& x, const FieldSpec& y, const char* what) {
    if (x.overlaps(y))
        throw std::invalid_argument(std::string("kernel: overlapping fields: ") + what);
}

static void check_col_outside(const FieldSpec& f, std::size_t col, const char* what) {
    if (f.contains_col(col))
        throw std::invalid_argument(std::string("kernel: carry/borrow column inside field: ") + what);
}

void vector_add(ApArray& a, const FieldSpec& fieldA, const FieldSpec& fieldB,
                std::size_t carry_col) {
    check_field(a, fieldA, "fieldA");
    check_field(a, fieldB, "fieldB");
    if (fieldA.width != fieldB.width)
        throw std::invalid_argument("vector_add: operand widths differ");
    if (carry_col >= a.width())
        throw std::out_of_range("vector_add: carry column past array width");
    check_disjoint(fieldA, fieldB, "fieldA/fieldB");
    check_col_outside(fieldA, carry_col, "fieldA");
    check_col_outside(fieldB, carry_col, "fieldB");

    const PassTable t = full_adder_table();
    for (std::size_t i = 0; i < fieldA.width; ++i)
        apply_pass_table(a, t, {carry_col, fieldB.col(i), fieldA.col(i)});
}

void vector_subtract(ApArray& a, const FieldSpec& fieldA, const FieldSpec& fieldB,
                     std::size_t borrow_col) {
    check_field(a, fieldA, "fieldA");
    check_field(a, fieldB, "fieldB");
    if (fieldA.width != fieldB.width)
        throw std::invalid_argument("vector_subtract: operand widths differ");
    if (borrow_col >= a.width())
        throw std::out_of_range("vector_subtract: borrow column past array width");
    check_disjoint(fieldA, fieldB, "fieldA/fieldB");
    check_col_outside(fieldA, borrow_col, "fieldA");
    check_col_outside(fieldB, borrow_col, "fieldB");

    const PassTable t = full_subtractor_table();
    for (std::size_t i = 0; i < fieldA.width; ++i)
        apply_pass_table(a, t, {borrow_col, fieldB.col(i), fieldA.col(i)});
}

BitVector vector_compare_gt(ApArray& a, const FieldSpec& fieldA, const FieldSpec& fieldB) {
    check_field(a, fieldA, "fieldA");
    check_field(a, fieldB, "fieldB");
    if (fieldA.width != fieldB.width)
        throw std::invalid_argument("vector_compare_gt: operand widths differ");
    check_disjoint(fieldA, fieldB, "fieldA/fieldB");

    /* Walk from the MSB keeping the set of still-tied rows; a row is greater
     * exactly when the first differing bit has a=1, b=0. Compares only, two
     * per bit position, tags folded on the host. */
    BitVector gt(a.n_rows());
    BitVector undecided(a.n_rows(), true);
    BitVector key(a.width()), mask(a.width());
    for (std::size_t i = fieldA.width; i-- > 0;) {
        mask.clear_all();
        mask.set(fieldA.col(i), true);
        mask.set(fieldB.col(i), true);
        key.clear_all();
        key.set(fieldA.col(i), true);
        BitVector above = a.compare(key, mask);  // a=1, b=0 at this bit
        key.clear_all();
        key.set(fieldB.col(i), true);
        BitVector below = a.compare(key, mask);  // a=0, b=1
        gt = gt | (undecided & above);
        undecided = undecided & ~(above | below);
    }
    return gt;
}

void vector_multiply(ApArray& a, const FieldSpec& fieldA, const FieldSpec& fieldB,
                     const FieldSpec& fieldP) {
    check_field(a, fieldA, "fieldA");
    check_field(a, fieldB, "fieldB");
    check_field(a, fieldP, "fieldP");
    if (fieldA.width != fieldB.width)
        throw std::invalid_argument("vector_multiply: operand widths differ");
    if (fieldP.width != 2 * fieldA.width)
        throw std::invalid_argument("vector_multiply: product field must be twice the operand width");
    check_disjoint(fieldA, fieldB, "fieldA/fieldB");
    check_disjoint(fieldA, fieldP, "fieldA/fieldP");
    check_disjoint(fieldB, fieldP, "fieldB/fieldP");

    /* Adder passes with the multiplier bit prepended as a compare-only role:
     * rows whose multiplier bit is 0 never match, so the whole window add is
     * predicated in place. */
    PassTable cond;
    cond.n_roles = 4;
    cond.write_roles = {1, 2};  // carry, accumulator bit
    cond.passes = {
        {{1, 0, 1, 1}, {1, 0}},
        {{1, 0, 0, 1}, {0, 1}},
        {{1, 1, 0, 0}, {0, 1}},
        {{1, 1, 1, 0}, {1, 0}},
    };

    const std::size_t m = fieldA.width;
    for (std::size_t j = 0; j < m; ++j) {
        std::size_t carry = fieldP.col(j + m);
        for (std::size_t i = 0; i < m; ++i)
            apply_pass_table(a, cond, {fieldB.col(j), carry, fieldP.col(j + i), fieldA.col(i)});
    }
}

void lut_apply(ApArray& a, const FieldSpec& fieldX, const FieldSpec& fieldY,
               const std::vector<std::uint64_t>& table) {
    check_field(a, fieldX, "fieldX");
    check_field(a, fieldY, "fieldY");
    check_disjoint(fieldX, fieldY, "fieldX/fieldY");
    if (fieldX.width >= 64 || table.size() != (std::size_t{1} << fieldX.width))
        throw std::invalid_argument("lut_apply: table size must be 2^fieldX.width");
    const std::uint64_t ymax =
        fieldY.width >= 64 ? ~0ull : ((std::uint64_t{1} << fieldY.width) - 1);
    for (auto v : table)
        if (v > ymax)
            throw std::invalid_argument("lut_apply: table value does not fit fieldY");

    BitVector key(a.width()), xmask(a.width()), ymask(a.width());
    for (std::size_t i = 0; i < fieldX.width; ++i) xmask.set(fieldX.col(i), true);
    for (std::size_t i = 0; i < fieldY.width; ++i) ymask.set(fieldY.col(i), true);

    /* One pass per domain value, taken even when nothing matches: the op is
     * data-independent by construction. */
    for (std::uint64_t v = 0; v < table.size(); ++v) {
        key.clear_all();
        set_field_value(key, fieldX, v);
        const BitVector& tag = a.compare(key, xmask);
        key.clear_all();
        set_field_value(key, fieldY, table[v]);
        a.parallel_write(key, ymask, tag);
    }
}

void shift_rows(ApArray& a, const FieldSpec& f, std::ptrdiff_t distance) {
    check_field(a, f, "field");
    if (distance == 0) return;

    BitVector mask(a.width());
    for (std::size_t i = 0; i < f.width; ++i) mask.set(f.col(i), true);
    BitVector zero(a.width());

    const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.n_rows());
    std::ptrdiff_t d = distance;
    if (d >= n || d <= -n) {
        for (std::ptrdiff_t r = 0; r < n; ++r)
            a.write_row(static_cast<std::size_t>(r), zero, mask);
        return;
    }
    if (d > 0) {
        /* walk down so every source row is still unwritten when read */
        for (std::ptrdiff_t r = n - 1; r >= d; --r) {
            BitVector v = a.read_row(static_cast<std::size_t>(r - d), mask);
            a.write_row(static_cast<std::size_t>(r), v, mask);
        }
        for (std::ptrdiff_t r = 0; r < d; ++r)
            a.write_row(static_cast<std::size_t>(r), zero, mask);
    } else {
        for (std::ptrdiff_t r = 0; r < n + d; ++r) {
            BitVector v = a.read_row(static_cast<std::size_t>(r - d), mask);
            a.write_row(static_cast<std::size_t>(r), v, mask);
        }
        for (std::ptrdiff_t r = n + d; r < n; ++r)
            a.write_row(static_cast<std::size_t>(r), zero, mask);
    }
}

std::uint64_t field_value(const BitVector& row, const FieldSpec& f) {
    if (f.width > 64) throw std::invalid_argument("field_value: field wider than 64 bits");
    std::uint64_t v = 0;
    for (std::size_t i = f.width; i-- > 0;) v = (v << 1) | (row.get(f.col(i)) ? 1u : 0u);
    return v;
}

void set_field_value(BitVector& row, const FieldSpec& f, std::uint64_t v) {
    if (f.width > 64) throw std::invalid_argument("set_field_value: field wider than 64 bits");
    if (f.width < 64 && (v >> f.width) != 0)
        throw std::invalid_argument("set_field_value: value does not fit field");
    for (std::size_t i = 0; i < f.width; ++i) row.set(f.col(i), (v >> i) & 1u);
}

}  // namespace ap3d
