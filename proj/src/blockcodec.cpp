#include "shortblock/blockcodec.hpp"

#include "shortblock/hadamard.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace shortblock {

SegmentPlan plan_segments(int payload_bits) {
    if (payload_bits < 3 || payload_bits > 64)
        throw std::invalid_argument("plan_segments: K must be in [3, 64]");
    SegmentPlan plan;
    plan.payload_bits = payload_bits;
    const int blocks = (payload_bits + 5) / 6;
    const int base = payload_bits / blocks;
    const int larger = payload_bits % blocks;  // this many blocks get base+1 bits
    for (int b = 0; b < blocks; ++b) {
        const int size = b < blocks - larger ? base : base + 1;
        plan.block_sizes.push_back(size);
        plan.orders.push_back(size - 1);
        plan.code_lengths.push_back(1 << (size - 1));
    }
    return plan;
}

ConcatenatedCodeword encode_blocks(const BitVec& msg, const SegmentPlan& plan) {
    if (static_cast<int>(msg.size()) != plan.payload_bits)
        throw std::invalid_argument("encode_blocks: message length must equal K");
    ConcatenatedCodeword out;
    int offset = 0;
    for (int b = 0; b < plan.block_count(); ++b) {
        const Rm1Code code = build_rm1(plan.orders[b]);
        BitVec sub(msg.begin() + offset, msg.begin() + offset + plan.block_sizes[b]);
        offset += plan.block_sizes[b];
        CodewordBits cw = encode_rm1(code, sub);
        out.boundaries.push_back(static_cast<int>(out.bits.size()));
        out.bits.insert(out.bits.end(), cw.bits.begin(), cw.bits.end());
    }
    out.boundaries.push_back(static_cast<int>(out.bits.size()));
    return out;
}

std::vector<int> split_rate_match(const std::vector<int>& code_lengths, int e_total) {
    const int blocks = static_cast<int>(code_lengths.size());
    if (blocks < 1 || e_total < 2 * blocks || e_total % 2 != 0)
        throw std::invalid_argument("split_rate_match: need even E >= 2 * block count");
    const long long total = std::accumulate(code_lengths.begin(), code_lengths.end(), 0LL);
    std::vector<int> alloc(blocks);
    std::vector<std::pair<long long, int>> remainders;  // (-fraction numerator, index)
    long long assigned = 0;
    for (int b = 0; b < blocks; ++b) {
        const long long quota = static_cast<long long>(e_total) * code_lengths[b];
        alloc[b] = static_cast<int>(quota / total);
        assigned += alloc[b];
        remainders.emplace_back(-(quota % total), b);
    }
    std::sort(remainders.begin(), remainders.end());
    for (int i = 0; i < e_total - assigned; ++i)
        ++alloc[remainders[i].second];
    // A block starved to zero steals one bit from the largest allocation.
    for (int b = 0; b < blocks; ++b) {
        while (alloc[b] == 0) {
            int donor = static_cast<int>(std::max_element(alloc.begin(), alloc.end()) -
                                         alloc.begin());
            --alloc[donor];
            ++alloc[b];
        }
    }
    return alloc;
}

RateMatchedBits rate_match(const ConcatenatedCodeword& c, int e_total) {
    const int blocks = static_cast<int>(c.boundaries.size()) - 1;
    if (blocks < 1)
        throw std::invalid_argument("rate_match: empty codeword");
    std::vector<int> lengths(blocks);
    for (int b = 0; b < blocks; ++b)
        lengths[b] = c.boundaries[b + 1] - c.boundaries[b];
    RateMatchedBits out;
    out.per_block_e = split_rate_match(lengths, e_total);
    out.bits.reserve(e_total);
    for (int b = 0; b < blocks; ++b) {
        const int start = c.boundaries[b];
        for (int i = 0; i < out.per_block_e[b]; ++i)
            out.bits.push_back(c.bits[start + i % lengths[b]]);
    }
    return out;
}

std::vector<std::vector<double>> derate_match(const std::vector<double>& soft,
                                              const std::vector<int>& code_lengths,
                                              const std::vector<int>& per_block_e) {
    if (code_lengths.size() != per_block_e.size())
        throw std::invalid_argument("derate_match: block count mismatch");
    const long long e_total = std::accumulate(per_block_e.begin(), per_block_e.end(), 0LL);
    if (static_cast<long long>(soft.size()) != e_total)
        throw std::invalid_argument("derate_match: soft length must equal sum of E_b");
    std::vector<std::vector<double>> out;
    out.reserve(code_lengths.size());
    std::size_t offset = 0;
    for (std::size_t b = 0; b < code_lengths.size(); ++b) {
        std::vector<double> combined(code_lengths[b], 0.0);
        for (int i = 0; i < per_block_e[b]; ++i)
            combined[i % code_lengths[b]] += soft[offset + i];
        offset += per_block_e[b];
        out.push_back(std::move(combined));
    }
    return out;
}

std::vector<std::vector<double>> derate_match(const std::vector<double>& soft,
                                              const SegmentPlan& plan,
                                              const std::vector<int>& per_block_e) {
    return derate_match(soft, plan.code_lengths, per_block_e);
}

DecodedMessage decode_blocks(const std::vector<std::vector<double>>& softs,
                             const SegmentPlan& plan, Transform transform) {
    if (static_cast<int>(softs.size()) != plan.block_count())
        throw std::invalid_argument("decode_blocks: one soft vector per block required");
    DecodedMessage msg;
    msg.bits.reserve(plan.payload_bits);
    for (int b = 0; b < plan.block_count(); ++b) {
        const int m = plan.orders[b];
        if (static_cast<int>(softs[b].size()) != plan.code_lengths[b])
            throw std::invalid_argument("decode_blocks: soft vector length mismatch");
        const CorrelationSpectrum spectrum = transform == Transform::Fht
                                                 ? fht(softs[b], m)
                                                 : ht_correlate(softs[b], m);
        const ArgmaxResult best = argmax_abs(spectrum);
        const BitVec block = index_to_message(best.index, best.sign, m);
        msg.bits.insert(msg.bits.end(), block.begin(), block.end());
        msg.per_block_metric.push_back(best.magnitude);
    }
    return msg;
}

BitVec index_to_message(int index, int sign, int m) {
    if (index < 0 || index >= (1 << m))
        throw std::invalid_argument("index_to_message: index out of range");
    BitVec msg(m + 1);
    msg[0] = sign < 0 ? 1 : 0;
    for (int r = 1; r <= m; ++r)
        msg[m + 1 - r] = static_cast<std::uint8_t>((index >> (r - 1)) & 1);
    return msg;
}

}  // namespace shortblock
