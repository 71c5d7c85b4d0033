#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kcnf {

/// Fixed-width packed Boolean vector.
///
/// Bits are stored little-endian in 64-bit words; bits past size() in the
/// last word are always zero, so word-wise equality and hashing are exact.
class BitVector {
public:
    using word_type = std::uint64_t;
    static constexpr std::size_t word_bits = 64;

    BitVector() = default;
    explicit BitVector(std::size_t size, bool value = false);

    /// Builds from 0/1 integers; any other value is rejected.
    static BitVector from_bits(std::initializer_list<int> bits);
    static BitVector from_bits(std::span<const int> bits);
    /// Builds from a string of '0'/'1' characters, index 0 first.
    static BitVector from_string(std::string_view bits);
    /// Low `size` bits of `mask`, bit i of the mask becomes component i.
    static BitVector from_mask(std::uint64_t mask, std::size_t size);

    std::size_t size() const { return m_size; }
    bool empty() const { return m_size == 0; }

    bool test(std::size_t i) const {
        return (m_words[i / word_bits] >> (i % word_bits)) & 1u;
    }
    bool operator[](std::size_t i) const { return test(i); }
    void set(std::size_t i, bool value = true);

    std::span<const word_type> words() const { return m_words; }
    std::span<word_type> words() { return m_words; }

    std::size_t count() const;
    bool all() const;
    bool none() const;

    /// True when every bit set in `mask` is also set here.
    bool covers(const BitVector& mask) const;
    /// Number of positions set in *this but clear in `other`.
    std::size_t count_and_not(const BitVector& other) const;

    BitVector& operator&=(const BitVector& other);
    BitVector operator~() const;

    /// Concatenation, *this first.
    BitVector concat(const BitVector& tail) const;

    /// Low 64 bits as an integer mask (only meaningful when size() <= 64).
    std::uint64_t to_mask() const;

    std::string to_string() const;

    friend bool operator==(const BitVector& a, const BitVector& b) {
        return a.m_size == b.m_size && a.m_words == b.m_words;
    }

    std::size_t hash() const;

    /// Clears any bits past size() in the last word.
    void trim();

private:
    std::size_t m_size = 0;
    std::vector<word_type> m_words;
};

struct BitVectorHash {
    std::size_t operator()(const BitVector& v) const { return v.hash(); }
};

}  // namespace kcnf

template <>
struct std::hash<kcnf::BitVector> {
    std::size_t operator()(const kcnf::BitVector& v) const { return v.hash(); }
};
