#pragma once

#include <cstdint>
#include <vector>

namespace shortblock {

// Dense Sylvester Hadamard matrix in natural ordering.
// entries[i][j] = (-1)^popcount(i & j), so H * H^T = n * I with n = 2^m.
struct HadamardMatrix {
    int order = 1;  // n = 2^m
    std::vector<std::vector<std::int8_t>> entries;
};

// Correlations of a length-2^m soft vector against all rows of H_{2^m},
// together with the exact number of additions/subtractions spent.
struct CorrelationSpectrum {
    std::vector<double> values;
    std::uint64_t op_count = 0;
};

struct ArgmaxResult {
    int index = 0;
    int sign = +1;       // sign of the winning entry, zero counts as +1
    double magnitude = 0.0;
};

HadamardMatrix sylvester(int m);

// Butterfly factor W^(i) = I_{2^(m-i)} (x) H_2 (x) I_{2^(i-1)}, 1 <= i <= m.
// The product W^(1) * ... * W^(m) equals sylvester(m).
std::vector<std::vector<std::int8_t>> stage_matrix(int m, int i);

// Dense correlation u * H, counting 2^(2m) add/sub operations.
CorrelationSpectrum ht_correlate(const std::vector<double>& u, int m);

// Fast transform: m in-place butterfly stages, stride-1 pairs first.
// Same values as ht_correlate, m * 2^m operations.
CorrelationSpectrum fht(const std::vector<double>& u, int m);

// Largest |value|; ties break toward the lowest index.
ArgmaxResult argmax_abs(const CorrelationSpectrum& spectrum);

}  // namespace shortblock
