#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mtjsc::stochastic {

// Fixed-length binary sequence carrying the unipolar value k/n. Bits are
// packed into 64-bit words; bits past size() in the last word are kept zero.
class Bitstream {
public:
    Bitstream() = default;
    explicit Bitstream(std::size_t n, bool fill = false);

    // Parses a string of '0'/'1' characters, e.g. "0110".
    static Bitstream from_string(std::string_view bits);

    std::size_t size() const { return n_; }
    bool empty() const { return n_ == 0; }

    bool get(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1U; }
    void set(std::size_t i, bool bit);

    std::size_t count_ones() const;
    double value() const;

    std::string to_string() const;

    const std::vector<std::uint64_t>& words() const { return words_; }

    friend bool operator==(const Bitstream&, const Bitstream&) = default;

    friend Bitstream sc_and(const Bitstream& x, const Bitstream& y);
    friend Bitstream sc_not(const Bitstream& x);
    friend Bitstream sc_mux(const Bitstream& a, const Bitstream& b, const Bitstream& sel);

private:
    void clear_tail();

    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

inline double value(const Bitstream& x) { return x.value(); }

// Multiplication of independent unipolar values.
Bitstream sc_and(const Bitstream& x, const Bitstream& y);
// 1 - x.
Bitstream sc_not(const Bitstream& x);
// Bit of `a` where sel is 1, bit of `b` elsewhere: a*s + b*(1-s).
Bitstream sc_mux(const Bitstream& a, const Bitstream& b, const Bitstream& sel);

// Overlap counts between two equal-length streams.
struct OverlapCounts {
    std::size_t a = 0;  // 1/1
    std::size_t b = 0;  // 1/0
    std::size_t c = 0;  // 0/1
    std::size_t d = 0;  // 0/0
};

OverlapCounts overlap(const Bitstream& x, const Bitstream& y);

// Stochastic computing correlation in [-1, 1]. Returns 0 when the selected
// denominator vanishes (a constant stream carries no correlation).
double scc(const Bitstream& x, const Bitstream& y);
double scc(const OverlapCounts& counts);

}  // namespace mtjsc::stochastic
