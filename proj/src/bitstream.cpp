#include "mtjsc/bitstream.hpp"

#include <algorithm>
#include <bit>

#include "mtjsc/errors.hpp"

namespace mtjsc::stochastic {

namespace {

std::size_t word_count(std::size_t n) { return (n + 63) / 64; }

void require_same_length(const Bitstream& x, const Bitstream& y) {
    if (x.size() != y.size()) {
        throw LengthMismatch(x.size(), y.size());
    }
}

}  // namespace

Bitstream::Bitstream(std::size_t n, bool fill)
    : n_(n), words_(word_count(n), fill ? ~std::uint64_t{0} : 0) {
    clear_tail();
}

Bitstream Bitstream::from_string(std::string_view bits) {
    Bitstream out(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1') {
            out.set(i, true);
        } else if (bits[i] != '0') {
            throw ParseError("bitstream literal may contain only '0' and '1'");
        }
    }
    return out;
}

void Bitstream::set(std::size_t i, bool bit) {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (bit) {
        words_[i >> 6] |= mask;
    } else {
        words_[i >> 6] &= ~mask;
    }
}

void Bitstream::clear_tail() {
    if (n_ % 64 != 0 && !words_.empty()) {
        words_.back() &= (std::uint64_t{1} << (n_ % 64)) - 1;
    }
}

std::size_t Bitstream::count_ones() const {
    std::size_t k = 0;
    for (std::uint64_t w : words_) {
        k += static_cast<std::size_t>(std::popcount(w));
    }
    return k;
}

double Bitstream::value() const {
    return n_ == 0 ? 0.0 : static_cast<double>(count_ones()) / static_cast<double>(n_);
}

std::string Bitstream::to_string() const {
    std::string s(n_, '0');
    for (std::size_t i = 0; i < n_; ++i) {
        if (get(i)) s[i] = '1';
    }
    return s;
}

Bitstream sc_and(const Bitstream& x, const Bitstream& y) {
    require_same_length(x, y);
    Bitstream out(x.size());
    for (std::size_t w = 0; w < out.words_.size(); ++w) {
        out.words_[w] = x.words_[w] & y.words_[w];
    }
    return out;
}

Bitstream sc_not(const Bitstream& x) {
    Bitstream out(x.size());
    for (std::size_t w = 0; w < out.words_.size(); ++w) {
        out.words_[w] = ~x.words_[w];
    }
    out.clear_tail();
    return out;
}

Bitstream sc_mux(const Bitstream& a, const Bitstream& b, const Bitstream& sel) {
    require_same_length(a, b);
    require_same_length(a, sel);
    Bitstream out(a.size());
    for (std::size_t w = 0; w < out.words_.size(); ++w) {
        out.words_[w] = (a.words_[w] & sel.words_[w]) | (b.words_[w] & ~sel.words_[w]);
    }
    out.clear_tail();
    return out;
}

OverlapCounts overlap(const Bitstream& x, const Bitstream& y) {
    require_same_length(x, y);
    const auto& xw = x.words();
    const auto& yw = y.words();
    OverlapCounts c;
    for (std::size_t w = 0; w < xw.size(); ++w) {
        c.a += static_cast<std::size_t>(std::popcount(xw[w] & yw[w]));
        c.b += static_cast<std::size_t>(std::popcount(xw[w] & ~yw[w]));
        c.c += static_cast<std::size_t>(std::popcount(~xw[w] & yw[w]));
    }
    c.d = x.size() - c.a - c.b - c.c;
    return c;
}

double scc(const OverlapCounts& k) {
    const double a = static_cast<double>(k.a);
    const double b = static_cast<double>(k.b);
    const double c = static_cast<double>(k.c);
    const double d = static_cast<double>(k.d);
    const double n = a + b + c + d;
    const double cov = a * d - b * c;
    double denom;
    if (cov > 0.0) {
        denom = n * std::min(a + b, a + c) - (a + b) * (a + c);
    } else {
        denom = (a + b) * (a + c) - n * std::max(a - d, 0.0);
    }
    if (denom == 0.0) {
        return 0.0;
    }
    return cov / denom;
}

double scc(const Bitstream& x, const Bitstream& y) { return scc(overlap(x, y)); }

}  // namespace mtjsc::stochastic
