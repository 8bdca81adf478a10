#include "ap3d/bitvec.hpp"

#include <bit>
#include <stdexcept>

namespace ap3d {

static std::size_t words_for(std::size_t nbits) { return (nbits + 63) / 64; }

BitVector::BitVector(std::size_t nbits, bool fill)
    : nbits_(nbits), w_(words_for(nbits), fill ? ~0ull : 0ull) {
    trim();
}

void BitVector::trim() {
    std::size_t rem = nbits_ % 64;
    if (rem != 0 && !w_.empty()) w_.back() &= (~0ull >> (64 - rem));
}

BitVector BitVector::from_string(const std::string& s) {
    BitVector v(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c != '0' && c != '1')
            throw std::invalid_argument("BitVector: row strings may contain only '0'/'1'");
        /* leftmost character is the highest column */
        v.set(s.size() - 1 - i, c == '1');
    }
    return v;
}

std::string BitVector::to_string() const {
    std::string s(nbits_, '0');
    for (std::size_t i = 0; i < nbits_; ++i)
        if (get(i)) s[nbits_ - 1 - i] = '1';
    return s;
}

bool BitVector::get(std::size_t i) const {
    if (i >= nbits_) throw std::out_of_range("BitVector: bit index past width");
    return (w_[i / 64] >> (i % 64)) & 1u;
}

void BitVector::set(std::size_t i, bool v) {
    if (i >= nbits_) throw std::out_of_range("BitVector: bit index past width");
    std::uint64_t m = 1ull << (i % 64);
    if (v)
        w_[i / 64] |= m;
    else
        w_[i / 64] &= ~m;
}

void BitVector::clear_all() {
    for (auto& w : w_) w = 0;
}

void BitVector::set_all() {
    for (auto& w : w_) w = ~0ull;
    trim();
}

std::size_t BitVector::popcount() const {
    std::size_t n = 0;
    for (auto w : w_) n += std::popcount(w);
    return n;
}

bool BitVector::any() const {
    for (auto w : w_)
        if (w) return true;
    return false;
}

static void check_same_width(const BitVector& a, const BitVector& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("BitVector: width mismatch in bitwise op");
}

BitVector BitVector::operator&(const BitVector& o) const {
    check_same_width(*this, o);
    BitVector r(nbits_);
    for (std::size_t i = 0; i < w_.size(); ++i) r.w_[i] = w_[i] & o.w_[i];
    return r;
}

BitVector BitVector::operator|(const BitVector& o) const {
    check_same_width(*this, o);
    BitVector r(nbits_);
    for (std::size_t i = 0; i < w_.size(); ++i) r.w_[i] = w_[i] | o.w_[i];
    return r;
}

BitVector BitVector::operator^(const BitVector& o) const {
    check_same_width(*this, o);
    BitVector r(nbits_);
    for (std::size_t i = 0; i < w_.size(); ++i) r.w_[i] = w_[i] ^ o.w_[i];
    return r;
}

BitVector BitVector::operator~() const {
    BitVector r(nbits_);
    for (std::size_t i = 0; i < w_.size(); ++i) r.w_[i] = ~w_[i];
    r.trim();
    return r;
}

bool BitVector::operator==(const BitVector& o) const {
    return nbits_ == o.nbits_ && w_ == o.w_;
}

}  // namespace ap3d
