#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace ap3d {

/* Fixed-width bit string packed into 64-bit words. Bit index equals column
 * index; to_string()/from_string() put the highest index leftmost so a row
 * holding one binary number reads naturally. Logical operators require equal
 * widths and are the host-side tag combination path. */
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t nbits, bool fill = false);

    static BitVector from_string(const std::string& s);
    std::string to_string() const;

    std::size_t size() const { return nbits_; }
    bool get(std::size_t i) const;
    void set(std::size_t i, bool v);
    void clear_all();
    void set_all();

    std::size_t popcount() const;
    bool any() const;
    bool none() const { return !any(); }

    BitVector operator&(const BitVector& o) const;
    BitVector operator|(const BitVector& o) const;
    BitVector operator^(const BitVector& o) const;
    BitVector operator~() const;
    bool operator==(const BitVector& o) const;
    bool operator!=(const BitVector& o) const { return !(*this == o); }

    std::size_t nwords() const { return w_.size(); }
    std::uint64_t word(std::size_t i) const { return w_[i]; }
    std::uint64_t* data() { return w_.data(); }
    const std::uint64_t* data() const { return w_.data(); }

private:
    void trim();  // zero the unused high bits of the last word

    std::size_t nbits_ = 0;
    std::vector<std::uint64_t> w_;
};

}  // namespace ap3d
