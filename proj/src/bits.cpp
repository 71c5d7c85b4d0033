#include "kcnf/bits.hpp"

#include <bit>
#include <stdexcept>

namespace kcnf {

namespace {

std::size_t words_for(std::size_t bits) {
    return (bits + BitVector::word_bits - 1) / BitVector::word_bits;
}

void require_same_size(const BitVector& a, const BitVector& b, const char* what) {
    if (a.size() != b.size()) {
        throw std::invalid_argument(std::string(what) + ": size mismatch (" +
                                    std::to_string(a.size()) + " vs " +
                                    std::to_string(b.size()) + ")");
    }
}

}  // namespace

BitVector::BitVector(std::size_t size, bool value)
    : m_size(size), m_words(words_for(size), value ? ~word_type{0} : word_type{0}) {
    trim();
}

BitVector BitVector::from_bits(std::initializer_list<int> bits) {
    return from_bits(std::span<const int>(bits.begin(), bits.size()));
}

BitVector BitVector::from_bits(std::span<const int> bits) {
    BitVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] != 0 && bits[i] != 1) {
            throw std::invalid_argument("BitVector: component " + std::to_string(i) +
                                        " is " + std::to_string(bits[i]) +
                                        ", expected 0 or 1");
        }
        v.set(i, bits[i] == 1);
    }
    return v;
}

BitVector BitVector::from_string(std::string_view bits) {
    BitVector v(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] != '0' && bits[i] != '1') {
            throw std::invalid_argument("BitVector: character '" + std::string(1, bits[i]) +
                                        "' at " + std::to_string(i) + " is not 0 or 1");
        }
        v.set(i, bits[i] == '1');
    }
    return v;
}

BitVector BitVector::from_mask(std::uint64_t mask, std::size_t size) {
    if (size > word_bits) throw std::invalid_argument("BitVector::from_mask: size > 64");
    BitVector v(size);
    if (size > 0) {
        v.m_words[0] = mask;
        v.trim();
    }
    return v;
}

void BitVector::set(std::size_t i, bool value) {
    const word_type bit = word_type{1} << (i % word_bits);
    if (value) {
        m_words[i / word_bits] |= bit;
    } else {
        m_words[i / word_bits] &= ~bit;
    }
}

std::size_t BitVector::count() const {
    std::size_t n = 0;
    for (word_type w : m_words) n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

bool BitVector::all() const { return count() == m_size; }

bool BitVector::none() const {
    for (word_type w : m_words) {
        if (w != 0) return false;
    }
    return true;
}

bool BitVector::covers(const BitVector& mask) const {
    require_same_size(*this, mask, "BitVector::covers");
    for (std::size_t i = 0; i < m_words.size(); ++i) {
        if (mask.m_words[i] & ~m_words[i]) return false;
    }
    return true;
}

std::size_t BitVector::count_and_not(const BitVector& other) const {
    require_same_size(*this, other, "BitVector::count_and_not");
    std::size_t n = 0;
    for (std::size_t i = 0; i < m_words.size(); ++i) {
        n += static_cast<std::size_t>(std::popcount(m_words[i] & ~other.m_words[i]));
    }
    return n;
}

BitVector& BitVector::operator&=(const BitVector& other) {
    require_same_size(*this, other, "BitVector::operator&=");
    for (std::size_t i = 0; i < m_words.size(); ++i) m_words[i] &= other.m_words[i];
    return *this;
}

BitVector BitVector::operator~() const {
    BitVector out(*this);
    for (word_type& w : out.m_words) w = ~w;
    out.trim();
    return out;
}

BitVector BitVector::concat(const BitVector& tail) const {
    BitVector out(m_size + tail.m_size);
    for (std::size_t i = 0; i < m_words.size(); ++i) out.m_words[i] = m_words[i];
    const std::size_t shift = m_size % word_bits;
    const std::size_t base = m_size / word_bits;
    for (std::size_t i = 0; i < tail.m_words.size(); ++i) {
        const word_type w = tail.m_words[i];
        out.m_words[base + i] |= w << shift;
        if (shift != 0 && base + i + 1 < out.m_words.size()) {
            out.m_words[base + i + 1] |= w >> (word_bits - shift);
        }
    }
    out.trim();
    return out;
}

std::uint64_t BitVector::to_mask() const { return m_words.empty() ? 0 : m_words[0]; }

std::string BitVector::to_string() const {
    std::string s(m_size, '0');
    for (std::size_t i = 0; i < m_size; ++i) {
        if (test(i)) s[i] = '1';
    }
    return s;
}

std::size_t BitVector::hash() const {
    // FNV-style fold of the words followed by a splitmix finalizer.
    std::uint64_t h = 0xcbf29ce484222325ULL ^ m_size;
    for (word_type w : m_words) {
        h ^= w;
        h *= 0x100000001b3ULL;
        h ^= h >> 29;
    }
    h ^= h >> 30;
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 27;
    h *= 0x94d049bb133111ebULL;
    h ^= h >> 31;
    return static_cast<std::size_t>(h);
}

void BitVector::trim() {
    const std::size_t tail = m_size % word_bits;
    if (tail != 0 && !m_words.empty()) {
        m_words.back() &= (word_type{1} << tail) - 1;
    }
}

}  // namespace kcnf
