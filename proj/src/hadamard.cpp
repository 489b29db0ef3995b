#include "shortblock/hadamard.hpp"

#include <bit>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace shortblock {

HadamardMatrix sylvester(int m) {
    if (m < 0 || m > 14)
        throw std::invalid_argument("sylvester: m must be in [0, 14]");
    const std::size_t n = std::size_t{1} << m;
    HadamardMatrix h;
    h.order = static_cast<int>(n);
    h.entries.assign(n, std::vector<std::int8_t>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            h.entries[i][j] = (std::popcount(i & j) & 1) ? -1 : +1;
    return h;
}

std::vector<std::vector<std::int8_t>> stage_matrix(int m, int i) {
    if (m < 1 || m > 6 || i < 1 || i > m)
        throw std::invalid_argument("stage_matrix: need 1 <= i <= m <= 6");
    const std::size_t n = std::size_t{1} << m;
    const std::size_t inner = std::size_t{1} << (i - 1);  // I_{2^(i-1)} block
    std::vector<std::vector<std::int8_t>> w(n, std::vector<std::int8_t>(n, 0));
    // Row index decomposes as (outer, pair bit, inner); the H_2 factor couples
    // positions that differ only in the pair bit, i.e. at distance 2^(i-1).
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t low = r % inner;
        const std::size_t bit = (r / inner) & 1;
        const std::size_t high = r / (2 * inner);
        const std::size_t base = high * 2 * inner + low;
        w[r][base] = 1;
        w[r][base + inner] = bit ? -1 : 1;
    }
    return w;
}

CorrelationSpectrum ht_correlate(const std::vector<double>& u, int m) {
    const std::size_t n = std::size_t{1} << m;
    if (m < 0 || u.size() != n)
        throw std::invalid_argument("ht_correlate: input length must be 2^m");
    CorrelationSpectrum out;
    out.values.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            acc += (std::popcount(i & j) & 1) ? -u[j] : u[j];
        out.values[i] = acc;
    }
    out.op_count = static_cast<std::uint64_t>(n) * n;  // 2^m add/subs per output
    return out;
}

CorrelationSpectrum fht(const std::vector<double>& u, int m) {
    const std::size_t n = std::size_t{1} << m;
    if (m < 0 || u.size() != n)
        throw std::invalid_argument("fht: input length must be 2^m");
    CorrelationSpectrum out;
    out.values = u;
    auto& v = out.values;
    for (int stage = 0; stage < m; ++stage) {
        const std::size_t half = std::size_t{1} << stage;
        for (std::size_t block = 0; block < n; block += 2 * half) {
            for (std::size_t j = block; j < block + half; ++j) {
                const double a = v[j];
                const double b = v[j + half];
                v[j] = a + b;
                v[j + half] = a - b;
            }
        }
    }
    out.op_count = static_cast<std::uint64_t>(m) * n;  // 2^m add/subs per stage
    return out;
}

ArgmaxResult argmax_abs(const CorrelationSpectrum& spectrum) {
    if (spectrum.values.empty())
        throw std::invalid_argument("argmax_abs: empty spectrum");
    ArgmaxResult best;
    best.index = 0;
    best.magnitude = std::abs(spectrum.values[0]);
    for (std::size_t i = 1; i < spectrum.values.size(); ++i) {
        const double mag = std::abs(spectrum.values[i]);
        if (mag > best.magnitude) {
            best.magnitude = mag;
            best.index = static_cast<int>(i);
        }
    }
    best.sign = spectrum.values[best.index] < 0.0 ? -1 : +1;
    return best;
}

}  // namespace shortblock
