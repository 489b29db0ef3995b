#pragma once

#include "shortblock/rmcode.hpp"

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

namespace shortblock {

using CVec = std::vector<std::complex<double>>;

// One slot-worth of resource elements: N = 12 * P * L, split into DMRS and
// data positions. The PUCCH format 2 layout puts pilots at offsets 1, 4, 7,
// 10 inside every 12-RE PRB.
struct ResourceConfig {
    int prbs = 0;     // P
    int symbols = 0;  // L
    int n_total = 0;  // 12 * P * L
    std::vector<int> dmrs_positions;
    std::vector<int> data_positions;

    int n_data() const { return static_cast<int>(data_positions.size()); }
    int n_pilot() const { return static_cast<int>(dmrs_positions.size()); }

    static ResourceConfig pucch2(int prbs, int symbols);
};

// Known pilot symbols for one transmit layer. With several layers the pilot
// REs are partitioned round-robin by pilot ordinal, so layers never overlap
// (FDM orthogonality); symbols[q] sits on the layer's q-th owned pilot RE.
struct DmrsSequence {
    CVec symbols;  // unit-modulus QPSK values
    std::uint64_t seed = 0;
    int layer = 0;
    int n_layers = 1;
};

// Transmit grid: per-layer symbol vectors over all N resource elements.
// Data REs carry unit-energy QPSK, a layer's own pilot REs carry beta times
// its DMRS, and other layers' pilot REs are left silent.
struct TxGrid {
    std::vector<CVec> layers;
    double beta = 1.0;
    ResourceConfig layout;
};

// bits (b0, b1) -> ((1 - 2*b0) + j(1 - 2*b1)) / sqrt(2)
CVec qpsk_modulate(const BitVec& bits);

// Per symbol: two soft values gain * (Re, Im); positive soft value means
// bit 0, matching the (-1)^bit bipolar convention.
std::vector<double> qpsk_soft_demod(const CVec& equalized, const std::vector<double>& gain);

// Pilot REs owned by `layer` out of `n_layers` (round-robin by ordinal).
std::vector<int> layer_pilot_positions(const ResourceConfig& config, int layer, int n_layers);

DmrsSequence gen_dmrs(const ResourceConfig& config, int layer, std::uint64_t seed,
                      int n_layers = 1);

// Single-layer mapping; data_syms must cover every data RE.
TxGrid map_resources(const CVec& data_syms, const DmrsSequence& dmrs,
                     const ResourceConfig& config, double beta);

// Multi-layer mapping; per_layer_syms[l] covers every data RE of layer l.
TxGrid map_resources_layers(const std::vector<CVec>& per_layer_syms,
                            const std::vector<DmrsSequence>& dmrs,
                            const ResourceConfig& config, double beta);

// Inverse placement: (pilot observations, data observations), order-preserving.
std::pair<CVec, CVec> extract_resources(const CVec& grid, const ResourceConfig& config);

// Spatial-multiplexing symbol mapping: symbol t goes to layer t % n_layers,
// slot t / n_layers.
std::vector<CVec> layer_demux(const CVec& symbols, int n_layers);

// Inverse of layer_demux on per-layer soft-bit pairs.
std::vector<double> layer_mux_soft(const std::vector<std::vector<double>>& per_layer_soft,
                                   int n_layers);

}  // namespace shortblock
