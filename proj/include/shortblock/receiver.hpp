#pragma once

#include "shortblock/blockcodec.hpp"
#include "shortblock/channel.hpp"
#include "shortblock/phylayer.hpp"
#include "shortblock/rmcode.hpp"

#include <vector>

namespace shortblock {

// Least-squares channel estimate. No division by the pilot boost, so with
// boosted pilots the entries converge to beta * h; every decision metric
// downstream is invariant to that positive scale.
struct ChannelEstimate {
    int n_rx = 0;
    int n_tx = 0;
    std::vector<std::complex<double>> h_hat;  // row-major

    std::complex<double>& at(int rx, int tx) { return h_hat[rx * n_tx + tx]; }
    const std::complex<double>& at(int rx, int tx) const { return h_hat[rx * n_tx + tx]; }
};

enum class ReceiverKind { MlGpp, BlockHt, BlockFht };

// SIMO estimate from all pilots: h_hat_a = sum_p y_{a,p} conj(x_p) / sum_p |x_p|^2.
ChannelEstimate ls_estimate(const std::vector<CVec>& pilot_obs, const DmrsSequence& pilot_ref);

// Multi-layer estimate; each layer is averaged over its own FDM pilot share.
ChannelEstimate ls_estimate_layers(const std::vector<CVec>& pilot_obs,
                                   const std::vector<DmrsSequence>& pilot_refs);

// MRC combine r_t = sum_a conj(h_hat_a) y_{a,t}, then QPSK soft demap.
std::vector<double> mrc_soft_bits(const std::vector<CVec>& data_obs,
                                  const ChannelEstimate& est);

// Correlation ML over all 2^k codewords of C(32,k); input is the 32 combined
// soft values. Ties break toward the lowest message index.
BitVec ml_decode(const std::vector<double>& soft_bits, const GppRmCode& code);

// Precomputed bipolar codebook so Monte Carlo loops skip re-encoding.
struct MlTable {
    int k = 0;
    std::vector<std::int8_t> bipolar;  // 2^k rows of 32 entries, (-1)^bit

    static MlTable build(const GppRmCode& code);
};
BitVec ml_decode(const std::vector<double>& soft_bits, const MlTable& table);

// Shared SIMO front end: resource extraction, LS estimation, MRC, soft demap.
// Returns 2 * N_d soft bits consumed identically by every decoder kind.
std::vector<double> simo_front_end(const ReceivedGrid& y, const ResourceConfig& config,
                                   const DmrsSequence& pilot_ref);

// MIMO front end: per-layer LS, zero-forcing equalization per data RE
// (pseudo-inverse when the estimate is singular), per-layer demap, and
// re-multiplexing into transmit bit order. Returns 2 * N_d * n_tx soft bits.
std::vector<double> mimo_front_end(const ReceivedGrid& y, const ResourceConfig& config,
                                   const std::vector<DmrsSequence>& pilot_refs);

// Replace each soft value by its sign (zero counts as +1).
void harden_soft_bits(std::vector<double>& soft);

// Block-based SIMO receiver, kind BlockHt or BlockFht.
DecodedMessage fht_receive(const ReceivedGrid& y, const ResourceConfig& config,
                           const SegmentPlan& plan, ReceiverKind kind,
                           const DmrsSequence& pilot_ref,
                           const std::vector<int>& per_block_e, bool hard_input = false);

// SIMO ML baseline over the same front end.
DecodedMessage ml_receive(const ReceivedGrid& y, const ResourceConfig& config,
                          const MlTable& table, const DmrsSequence& pilot_ref,
                          int e_total, bool hard_input = false);

// 4x4 spatial-multiplexing receiver; decodes with the block pipeline or the
// ML baseline according to kind.
DecodedMessage mimo_receive(const ReceivedGrid& y, const ResourceConfig& config,
                            const SegmentPlan& plan, ReceiverKind kind,
                            const std::vector<DmrsSequence>& pilot_refs,
                            const std::vector<int>& per_block_e,
                            const MlTable* table = nullptr, bool hard_input = false);

}  // namespace shortblock
