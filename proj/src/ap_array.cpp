#include "ap3d/ap_array.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace ap3d {

EventLedger EventLedger::operator-(const EventLedger& o) const {
    EventLedger d;
    d.cycles = cycles - o.cycles;
    d.matches = matches - o.matches;
    d.mismatches = mismatches - o.mismatches;
    d.compare_bits = compare_bits - o.compare_bits;
    d.write_bits = write_bits - o.write_bits;
    d.miswrite_bits = miswrite_bits - o.miswrite_bits;
    return d;
}

EventLedger& EventLedger::operator+=(const EventLedger& o) {
    cycles += o.cycles;
    matches += o.matches;
    mismatches += o.mismatches;
    compare_bits += o.compare_bits;
    write_bits += o.write_bits;
    miswrite_bits += o.miswrite_bits;
    return *this;
}

ApArray::ApArray(std::size_t n_rows, std::size_t width)
    : n_rows_(n_rows), width_(width), words_((width + 63) / 64),
      cells_(n_rows * words_, 0), tag_(n_rows) {
    if (n_rows == 0 || width == 0)
        throw std::invalid_argument("ApArray: rows and width must be nonzero");
}

void ApArray::check_row(std::size_t row) const {
    if (row >= n_rows_) throw std::out_of_range("ApArray: row index past n_rows");
}

void ApArray::check_width(const BitVector& v, const char* what) const {
    if (v.size() != width_)
        throw std::invalid_argument(std::string("ApArray: ") + what +
                                    " width does not match array width");
}

const BitVector& ApArray::compare(const BitVector& key, const BitVector& mask) {
    check_width(key, "key");
    check_width(mask, "mask");
    tag_.clear_all();
    std::size_t hits = 0;
    for (std::size_t r = 0; r < n_rows_; ++r) {
        const std::uint64_t* row = &cells_[r * words_];
        bool match = true;
        for (std::size_t w = 0; w < words_; ++w) {
            /* masked-out columns drive neither bit line and never veto */
            if ((row[w] ^ key.word(w)) & mask.word(w)) { match = false; break; }
        }
        if (match) { tag_.set(r, true); ++hits; }
    }
    ledger_.cycles += 1;
    ledger_.matches += hits;
    ledger_.mismatches += n_rows_ - hits;
    ledger_.compare_bits += n_rows_ * mask.popcount();
    if (trace_)
        *trace_ << "C mask=" << mask.popcount() << " tag=" << hits << "\n";
    return tag_;
}

void ApArray::parallel_write(const BitVector& key, const BitVector& mask, const BitVector& tag) {
    check_width(key, "key");
    check_width(mask, "mask");
    if (tag.size() != n_rows_)
        throw std::invalid_argument("ApArray: tag width does not match n_rows");
    std::size_t tagged = tag.popcount();
    for (std::size_t r = 0; r < n_rows_; ++r) {
        if (!tag.get(r)) continue;
        std::uint64_t* row = &cells_[r * words_];
        for (std::size_t w = 0; w < words_; ++w)
            row[w] = (row[w] & ~mask.word(w)) | (key.word(w) & mask.word(w));
    }
    ledger_.cycles += 1;
    ledger_.write_bits += mask.popcount() * tagged;
    ledger_.miswrite_bits += mask.popcount() * (n_rows_ - tagged);
    if (trace_)
        *trace_ << "W mask=" << mask.popcount() << " tag=" << tagged << "\n";
}

void ApArray::write_row(std::size_t row, const BitVector& data, const BitVector& mask) {
    check_row(row);
    check_width(data, "data");
    check_width(mask, "mask");
    std::uint64_t* p = &cells_[row * words_];
    for (std::size_t w = 0; w < words_; ++w)
        p[w] = (p[w] & ~mask.word(w)) | (data.word(w) & mask.word(w));
    ledger_.cycles += 1;
    ledger_.write_bits += mask.popcount();
    if (trace_)
        *trace_ << "w row=" << row << " mask=" << mask.popcount() << "\n";
}

BitVector ApArray::read_row(std::size_t row, const BitVector& mask) {
    check_row(row);
    check_width(mask, "mask");
    BitVector out(width_);
    const std::uint64_t* p = &cells_[row * words_];
    for (std::size_t w = 0; w < words_; ++w)
        out.data()[w] = p[w] & mask.word(w);
    ledger_.cycles += 1;
    if (trace_)
        *trace_ << "r row=" << row << " mask=" << mask.popcount() << "\n";
    return out;
}

EventLedger ApArray::reset_ledger() {
    EventLedger out = ledger_;
    ledger_ = EventLedger{};
    return out;
}

bool ApArray::cell(std::size_t row, std::size_t col) const {
    check_row(row);
    if (col >= width_) throw std::out_of_range("ApArray: column index past width");
    return (cells_[row * words_ + col / 64] >> (col % 64)) & 1u;
}

void ApArray::load_rows(std::istream& in) {
    std::string line;
    std::size_t r = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (r >= n_rows_) throw std::invalid_argument("ApArray: more fixture rows than n_rows");
        BitVector v = BitVector::from_string(line);
        check_width(v, "fixture row");
        std::uint64_t* p = &cells_[r * words_];
        for (std::size_t w = 0; w < words_; ++w) p[w] = v.word(w);
        ++r;
    }
    if (r != n_rows_) throw std::invalid_argument("ApArray: fewer fixture rows than n_rows");
}

void ApArray::dump_rows(std::ostream& out) const {
    for (std::size_t r = 0; r < n_rows_; ++r) {
        BitVector v(width_);
        const std::uint64_t* p = &cells_[r * words_];
        for (std::size_t w = 0; w < words_; ++w) v.data()[w] = p[w];
        out << v.to_string() << "\n";
    }
}

void ApArray::trace_note(const std::string& note) {
    if (trace_) *trace_ << "# " << note << "\n";
}

}  // namespace ap3d
