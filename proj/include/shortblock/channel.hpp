#pragma once

#include "shortblock/phylayer.hpp"
#include "shortblock/rng.hpp"

#include <complex>
#include <vector>

namespace shortblock {

// Flat block-fading channel matrix: one draw per trial, constant over all REs.
struct ChannelRealization {
    int n_rx = 0;
    int n_tx = 0;
    std::vector<std::complex<double>> h;  // row-major n_rx x n_tx

    std::complex<double>& at(int rx, int tx) { return h[rx * n_tx + tx]; }
    const std::complex<double>& at(int rx, int tx) const { return h[rx * n_tx + tx]; }
};

// sigma2 is the variance per real noise component; SNR is referenced to
// unit-energy data symbols per receive antenna, so sigma2 = 10^(-snr/10) / 2.
struct NoiseParams {
    double sigma2 = 0.0;
    double snr_db = 0.0;
};

struct ReceivedGrid {
    std::vector<CVec> antennas;  // n_rx vectors of length N

    int n_rx() const { return static_cast<int>(antennas.size()); }
};

NoiseParams snr_to_sigma(double snr_db);

// i.i.d. CN(0,1) entries, row-major draw order.
ChannelRealization draw_channel(int n_rx, int n_tx, Rng& rng);

// y_a[t] = sum_l h(a,l) x_l[t] + z, with z drawn antenna-major, RE-minor.
ReceivedGrid apply_channel(const TxGrid& grid, const ChannelRealization& h,
                           const NoiseParams& noise, Rng& rng);

}  // namespace shortblock
