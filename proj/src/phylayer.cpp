#include "shortblock/phylayer.hpp"

#include "shortblock/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace shortblock {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr int kPrbPilotOffsets[] = {1, 4, 7, 10};
}  // namespace

ResourceConfig ResourceConfig::pucch2(int prbs, int symbols) {
    if (prbs < 1 || prbs > 16)
        throw std::invalid_argument("ResourceConfig: P must be in [1, 16]");
    if (symbols < 1 || symbols > 14)
        throw std::invalid_argument("ResourceConfig: L must be in [1, 14]");
    ResourceConfig cfg;
    cfg.prbs = prbs;
    cfg.symbols = symbols;
    cfg.n_total = 12 * prbs * symbols;
    std::vector<bool> is_pilot(cfg.n_total, false);
    for (int unit = 0; unit < prbs * symbols; ++unit)
        for (int off : kPrbPilotOffsets)
            is_pilot[unit * 12 + off] = true;
    for (int i = 0; i < cfg.n_total; ++i)
        (is_pilot[i] ? cfg.dmrs_positions : cfg.data_positions).push_back(i);
    return cfg;
}

CVec qpsk_modulate(const BitVec& bits) {
    if (bits.size() % 2 != 0)
        throw std::invalid_argument("qpsk_modulate: bit count must be even");
    CVec syms(bits.size() / 2);
    for (std::size_t t = 0; t < syms.size(); ++t)
        syms[t] = {(1.0 - 2.0 * bits[2 * t]) * kInvSqrt2,
                   (1.0 - 2.0 * bits[2 * t + 1]) * kInvSqrt2};
    return syms;
}

std::vector<double> qpsk_soft_demod(const CVec& equalized, const std::vector<double>& gain) {
    if (equalized.size() != gain.size())
        throw std::invalid_argument("qpsk_soft_demod: symbol and gain counts differ");
    std::vector<double> soft(2 * equalized.size());
    for (std::size_t t = 0; t < equalized.size(); ++t) {
        soft[2 * t] = gain[t] * equalized[t].real();
        soft[2 * t + 1] = gain[t] * equalized[t].imag();
    }
    return soft;
}

std::vector<int> layer_pilot_positions(const ResourceConfig& config, int layer, int n_layers) {
    if (n_layers < 1 || layer < 0 || layer >= n_layers)
        throw std::invalid_argument("layer_pilot_positions: bad layer index");
    std::vector<int> positions;
    for (std::size_t p = layer; p < config.dmrs_positions.size();
         p += static_cast<std::size_t>(n_layers))
        positions.push_back(config.dmrs_positions[p]);
    return positions;
}

DmrsSequence gen_dmrs(const ResourceConfig& config, int layer, std::uint64_t seed,
                      int n_layers) {
    DmrsSequence dmrs;
    dmrs.seed = seed;
    dmrs.layer = layer;
    dmrs.n_layers = n_layers;
    const std::size_t count = layer_pilot_positions(config, layer, n_layers).size();
    Rng rng(stream_key(seed, 0x444d5253ULL, static_cast<std::uint64_t>(layer)));
    dmrs.symbols.resize(count);
    for (auto& s : dmrs.symbols) {
        const std::uint64_t w = rng.next_u64();
        s = {(w & 1) ? -kInvSqrt2 : kInvSqrt2, (w & 2) ? -kInvSqrt2 : kInvSqrt2};
    }
    return dmrs;
}

TxGrid map_resources(const CVec& data_syms, const DmrsSequence& dmrs,
                     const ResourceConfig& config, double beta) {
    return map_resources_layers({data_syms}, {dmrs}, config, beta);
}

TxGrid map_resources_layers(const std::vector<CVec>& per_layer_syms,
                            const std::vector<DmrsSequence>& dmrs,
                            const ResourceConfig& config, double beta) {
    const int n_layers = static_cast<int>(per_layer_syms.size());
    if (n_layers < 1 || dmrs.size() != per_layer_syms.size())
        throw std::invalid_argument("map_resources: layer count mismatch");
    if (beta < 0.0)
        throw std::invalid_argument("map_resources: beta must be nonnegative");
    TxGrid grid;
    grid.beta = beta;
    grid.layout = config;
    grid.layers.assign(n_layers, CVec(config.n_total, {0.0, 0.0}));
    for (int l = 0; l < n_layers; ++l) {
        if (static_cast<int>(per_layer_syms[l].size()) != config.n_data())
            throw std::invalid_argument("map_resources: data symbol count must equal N_d");
        for (int d = 0; d < config.n_data(); ++d)
            grid.layers[l][config.data_positions[d]] = per_layer_syms[l][d];
        const std::vector<int> own = layer_pilot_positions(config, l, n_layers);
        if (own.size() != dmrs[l].symbols.size())
            throw std::invalid_argument("map_resources: DMRS count must match layer pilots");
        for (std::size_t q = 0; q < own.size(); ++q)
            grid.layers[l][own[q]] = beta * dmrs[l].symbols[q];
    }
    return grid;
}

std::pair<CVec, CVec> extract_resources(const CVec& grid, const ResourceConfig& config) {
    if (static_cast<int>(grid.size()) != config.n_total)
        throw std::invalid_argument("extract_resources: grid length must equal N");
    CVec pilots(config.n_pilot());
    CVec data(config.n_data());
    for (int p = 0; p < config.n_pilot(); ++p)
        pilots[p] = grid[config.dmrs_positions[p]];
    for (int d = 0; d < config.n_data(); ++d)
        data[d] = grid[config.data_positions[d]];
    return {std::move(pilots), std::move(data)};
}

std::vector<CVec> layer_demux(const CVec& symbols, int n_layers) {
    if (n_layers < 1 || symbols.size() % n_layers != 0)
        throw std::invalid_argument("layer_demux: symbol count must divide by layers");
    std::vector<CVec> streams(n_layers);
    for (auto& s : streams)
        s.reserve(symbols.size() / n_layers);
    for (std::size_t t = 0; t < symbols.size(); ++t)
        streams[t % n_layers].push_back(symbols[t]);
    return streams;
}

std::vector<double> layer_mux_soft(const std::vector<std::vector<double>>& per_layer_soft,
                                   int n_layers) {
    if (static_cast<int>(per_layer_soft.size()) != n_layers || n_layers < 1)
        throw std::invalid_argument("layer_mux_soft: layer count mismatch");
    const std::size_t per_layer = per_layer_soft[0].size();
    for (const auto& s : per_layer_soft)
        if (s.size() != per_layer || s.size() % 2 != 0)
            throw std::invalid_argument("layer_mux_soft: per-layer lengths must match, even");
    std::vector<double> soft(per_layer * n_layers);
    const std::size_t symbols_total = soft.size() / 2;
    for (std::size_t t = 0; t < symbols_total; ++t) {
        const std::size_t layer = t % n_layers;
        const std::size_t slot = t / n_layers;
        soft[2 * t] = per_layer_soft[layer][2 * slot];
        soft[2 * t + 1] = per_layer_soft[layer][2 * slot + 1];
    }
    return soft;
}

}  // namespace shortblock
