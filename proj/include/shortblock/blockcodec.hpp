#pragma once

#include "shortblock/rmcode.hpp"

#include <vector>

namespace shortblock {

// Split of a K-bit payload into sub-blocks, each carried by one RM(1,m).
struct SegmentPlan {
    int payload_bits = 0;            // K
    std::vector<int> block_sizes;    // message bits per sub-block, non-decreasing
    std::vector<int> orders;         // m_b = block_sizes[b] - 1
    std::vector<int> code_lengths;   // 2^(m_b)

    int block_count() const { return static_cast<int>(block_sizes.size()); }
    int total_code_bits() const {
        int n = 0;
        for (int len : code_lengths) n += len;
        return n;
    }
};

struct ConcatenatedCodeword {
    BitVec bits;                 // [c^(1) ... c^(N)]
    std::vector<int> boundaries; // block start offsets plus total length
};

struct RateMatchedBits {
    BitVec bits;                 // e(0 .. E-1)
    std::vector<int> per_block_e;
};

struct DecodedMessage {
    BitVec bits;                           // K bits
    std::vector<double> per_block_metric;  // winning |correlation| per block
};

enum class Transform { Fht, Ht };

// ceil(K/6) blocks, sizes as equal as possible, smaller blocks first.
SegmentPlan plan_segments(int payload_bits);

ConcatenatedCodeword encode_blocks(const BitVec& msg, const SegmentPlan& plan);

// Largest-remainder proportional split of e_total across block lengths.
// Every block keeps at least one transmitted bit.
std::vector<int> split_rate_match(const std::vector<int>& code_lengths, int e_total);

// Within block b, e_b(i) = c_b(i mod N'_b): cyclic repetition beyond N'_b,
// prefix truncation below it.
RateMatchedBits rate_match(const ConcatenatedCodeword& c, int e_total);

// Repetition combining by addition; never-transmitted positions stay 0.
std::vector<std::vector<double>> derate_match(const std::vector<double>& soft,
                                              const std::vector<int>& code_lengths,
                                              const std::vector<int>& per_block_e);
std::vector<std::vector<double>> derate_match(const std::vector<double>& soft,
                                              const SegmentPlan& plan,
                                              const std::vector<int>& per_block_e);

DecodedMessage decode_blocks(const std::vector<std::vector<double>>& softs,
                             const SegmentPlan& plan,
                             Transform transform = Transform::Fht);

// Inverse of the encoder's index convention: m0 = 1 iff sign < 0, and
// m_r = bit (r-1) of index; bits returned in (m0, m_m, ..., m_1) order.
BitVec index_to_message(int index, int sign, int m);

}  // namespace shortblock
