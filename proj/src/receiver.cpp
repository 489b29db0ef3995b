#include "shortblock/receiver.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace shortblock {

ChannelEstimate ls_estimate(const std::vector<CVec>& pilot_obs, const DmrsSequence& pilot_ref) {
    return ls_estimate_layers(pilot_obs, {pilot_ref});
}

ChannelEstimate ls_estimate_layers(const std::vector<CVec>& pilot_obs,
                                   const std::vector<DmrsSequence>& pilot_refs) {
    const int n_rx = static_cast<int>(pilot_obs.size());
    const int n_tx = static_cast<int>(pilot_refs.size());
    if (n_rx < 1 || n_tx < 1)
        throw std::invalid_argument("ls_estimate: need at least one antenna and layer");
    ChannelEstimate est;
    est.n_rx = n_rx;
    est.n_tx = n_tx;
    est.h_hat.resize(static_cast<std::size_t>(n_rx) * n_tx);
    for (int l = 0; l < n_tx; ++l) {
        const DmrsSequence& ref = pilot_refs[l];
        double energy = 0.0;
        for (const auto& x : ref.symbols)
            energy += std::norm(x);
        if (energy <= 0.0)
            throw std::invalid_argument("ls_estimate: zero pilot energy for layer");
        for (int a = 0; a < n_rx; ++a) {
            std::complex<double> acc{0.0, 0.0};
            for (std::size_t q = 0; q < ref.symbols.size(); ++q) {
                // Layer l owns pilot ordinals l, l + n_layers, l + 2*n_layers, ...
                const std::size_t p = ref.layer + q * ref.n_layers;
                if (p >= pilot_obs[a].size())
                    throw std::invalid_argument("ls_estimate: pilot observation too short");
                acc += pilot_obs[a][p] * std::conj(ref.symbols[q]);
            }
            est.at(a, l) = acc / energy;
        }
    }
    return est;
}

std::vector<double> mrc_soft_bits(const std::vector<CVec>& data_obs,
                                  const ChannelEstimate& est) {
    if (est.n_tx != 1)
        throw std::invalid_argument("mrc_soft_bits: SIMO only");
    if (static_cast<int>(data_obs.size()) != est.n_rx)
        throw std::invalid_argument("mrc_soft_bits: antenna count mismatch");
    const std::size_t n = data_obs.empty() ? 0 : data_obs[0].size();
    CVec combined(n, {0.0, 0.0});
    for (int a = 0; a < est.n_rx; ++a) {
        if (data_obs[a].size() != n)
            throw std::invalid_argument("mrc_soft_bits: data lengths differ");
        const std::complex<double> w = std::conj(est.at(a, 0));
        for (std::size_t t = 0; t < n; ++t)
            combined[t] += w * data_obs[a][t];
    }
    return qpsk_soft_demod(combined, std::vector<double>(n, 1.0));
}

MlTable MlTable::build(const GppRmCode& code) {
    MlTable table;
    table.k = code.k;
    const auto book = gpp_codebook(code);
    table.bipolar.resize(book.size() * 32);
    for (std::size_t i = 0; i < book.size(); ++i)
        for (int j = 0; j < 32; ++j)
            table.bipolar[i * 32 + j] = book[i].bits[j] ? -1 : +1;
    return table;
}

namespace {

std::size_t ml_scan(const std::vector<double>& soft_bits, const MlTable& table,
                    double& best_metric) {
    if (soft_bits.size() != 32)
        throw std::invalid_argument("ml_decode: expected 32 combined soft values");
    const std::size_t count = std::size_t{1} << table.k;
    std::size_t best_index = 0;
    best_metric = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < count; ++i) {
        const std::int8_t* row = &table.bipolar[i * 32];
        double metric = 0.0;
        for (int j = 0; j < 32; ++j)
            metric += soft_bits[j] * row[j];
        if (metric > best_metric) {  // strict: ties keep the lowest index
            best_metric = metric;
            best_index = i;
        }
    }
    return best_index;
}

BitVec index_to_gpp_message(std::size_t index, int k) {
    BitVec msg(k);
    for (int j = 0; j < k; ++j)
        msg[j] = static_cast<std::uint8_t>((index >> j) & 1);
    return msg;
}

}  // namespace

BitVec ml_decode(const std::vector<double>& soft_bits, const MlTable& table) {
    double metric = 0.0;
    return index_to_gpp_message(ml_scan(soft_bits, table, metric), table.k);
}

BitVec ml_decode(const std::vector<double>& soft_bits, const GppRmCode& code) {
    return ml_decode(soft_bits, MlTable::build(code));
}

std::vector<double> simo_front_end(const ReceivedGrid& y, const ResourceConfig& config,
                                   const DmrsSequence& pilot_ref) {
    std::vector<CVec> pilot_obs(y.n_rx());
    std::vector<CVec> data_obs(y.n_rx());
    for (int a = 0; a < y.n_rx(); ++a) {
        auto split = extract_resources(y.antennas[a], config);
        pilot_obs[a] = std::move(split.first);
        data_obs[a] = std::move(split.second);
    }
    const ChannelEstimate est = ls_estimate(pilot_obs, pilot_ref);
    return mrc_soft_bits(data_obs, est);
}

std::vector<double> mimo_front_end(const ReceivedGrid& y, const ResourceConfig& config,
                                   const std::vector<DmrsSequence>& pilot_refs) {
    const int n_rx = y.n_rx();
    const int n_tx = static_cast<int>(pilot_refs.size());
    std::vector<CVec> pilot_obs(n_rx);
    std::vector<CVec> data_obs(n_rx);
    for (int a = 0; a < n_rx; ++a) {
        auto split = extract_resources(y.antennas[a], config);
        pilot_obs[a] = std::move(split.first);
        data_obs[a] = std::move(split.second);
    }
    const ChannelEstimate est = ls_estimate_layers(pilot_obs, pilot_refs);

    Eigen::MatrixXcd h_hat(n_rx, n_tx);
    for (int a = 0; a < n_rx; ++a)
        for (int l = 0; l < n_tx; ++l)
            h_hat(a, l) = est.at(a, l);
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(h_hat);
    Eigen::MatrixXcd w;
    if (n_rx == n_tx && lu.isInvertible()) {
        w = lu.inverse();
    } else {
        w = h_hat.completeOrthogonalDecomposition().pseudoInverse();
    }

    const int n_data = config.n_data();
    std::vector<std::vector<double>> per_layer_soft(n_tx);
    std::vector<CVec> equalized(n_tx, CVec(n_data));
    Eigen::VectorXcd obs(n_rx);
    for (int t = 0; t < n_data; ++t) {
        for (int a = 0; a < n_rx; ++a)
            obs(a) = data_obs[a][t];
        const Eigen::VectorXcd x_hat = w * obs;
        for (int l = 0; l < n_tx; ++l)
            equalized[l][t] = x_hat(l);
    }
    const std::vector<double> unit_gain(n_data, 1.0);
    for (int l = 0; l < n_tx; ++l)
        per_layer_soft[l] = qpsk_soft_demod(equalized[l], unit_gain);
    return layer_mux_soft(per_layer_soft, n_tx);
}

void harden_soft_bits(std::vector<double>& soft) {
    for (auto& s : soft)
        s = s < 0.0 ? -1.0 : 1.0;
}

DecodedMessage fht_receive(const ReceivedGrid& y, const ResourceConfig& config,
                           const SegmentPlan& plan, ReceiverKind kind,
                           const DmrsSequence& pilot_ref,
                           const std::vector<int>& per_block_e, bool hard_input) {
    if (kind == ReceiverKind::MlGpp)
        throw std::invalid_argument("fht_receive: block receiver kinds only");
    std::vector<double> soft = simo_front_end(y, config, pilot_ref);
    if (hard_input)
        harden_soft_bits(soft);
    const auto block_soft = derate_match(soft, plan, per_block_e);
    return decode_blocks(block_soft, plan,
                         kind == ReceiverKind::BlockHt ? Transform::Ht : Transform::Fht);
}

namespace {

DecodedMessage ml_from_soft(const std::vector<double>& soft, const MlTable& table,
                            int e_total) {
    const auto combined = derate_match(soft, std::vector<int>{32}, std::vector<int>{e_total});
    double metric = 0.0;
    const std::size_t index = ml_scan(combined[0], table, metric);
    DecodedMessage msg;
    msg.bits = index_to_gpp_message(index, table.k);
    msg.per_block_metric.assign(1, metric);
    return msg;
}

}  // namespace

DecodedMessage ml_receive(const ReceivedGrid& y, const ResourceConfig& config,
                          const MlTable& table, const DmrsSequence& pilot_ref,
                          int e_total, bool hard_input) {
    std::vector<double> soft = simo_front_end(y, config, pilot_ref);
    if (hard_input)
        harden_soft_bits(soft);
    return ml_from_soft(soft, table, e_total);
}

DecodedMessage mimo_receive(const ReceivedGrid& y, const ResourceConfig& config,
                            const SegmentPlan& plan, ReceiverKind kind,
                            const std::vector<DmrsSequence>& pilot_refs,
                            const std::vector<int>& per_block_e, const MlTable* table,
                            bool hard_input) {
    std::vector<double> soft = mimo_front_end(y, config, pilot_refs);
    if (hard_input)
        harden_soft_bits(soft);
    if (kind == ReceiverKind::MlGpp) {
        if (table == nullptr)
            throw std::invalid_argument("mimo_receive: ML kind requires a codebook table");
        int e_total = 0;
        for (int e : per_block_e)
            e_total += e;
        return ml_from_soft(soft, *table, e_total);
    }
    const auto block_soft = derate_match(soft, plan, per_block_e);
    return decode_blocks(block_soft, plan,
                         kind == ReceiverKind::BlockHt ? Transform::Ht : Transform::Fht);
}

}  // namespace shortblock
