#include "shortblock/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace shortblock {

NoiseParams snr_to_sigma(double snr_db) {
    if (!std::isfinite(snr_db))
        throw std::invalid_argument("snr_to_sigma: SNR must be finite");
    NoiseParams params;
    params.snr_db = snr_db;
    params.sigma2 = std::pow(10.0, -snr_db / 10.0) / 2.0;
    return params;
}

ChannelRealization draw_channel(int n_rx, int n_tx, Rng& rng) {
    if (n_rx < 1 || n_tx < 1)
        throw std::invalid_argument("draw_channel: dimensions must be >= 1");
    ChannelRealization ch;
    ch.n_rx = n_rx;
    ch.n_tx = n_tx;
    ch.h.resize(static_cast<std::size_t>(n_rx) * n_tx);
    const double scale = std::sqrt(0.5);  // unit variance per complex entry
    for (auto& entry : ch.h)
        entry = scale * rng.cnormal();
    return ch;
}

ReceivedGrid apply_channel(const TxGrid& grid, const ChannelRealization& h,
                           const NoiseParams& noise, Rng& rng) {
    const int n_tx = static_cast<int>(grid.layers.size());
    if (n_tx != h.n_tx)
        throw std::invalid_argument("apply_channel: layer count must equal n_tx");
    const std::size_t n = grid.layers.empty() ? 0 : grid.layers[0].size();
    for (const auto& layer : grid.layers)
        if (layer.size() != n)
            throw std::invalid_argument("apply_channel: layer lengths differ");
    const double sigma = std::sqrt(noise.sigma2);
    ReceivedGrid rx;
    rx.antennas.assign(h.n_rx, CVec(n));
    for (int a = 0; a < h.n_rx; ++a) {
        for (std::size_t t = 0; t < n; ++t) {
            std::complex<double> y{0.0, 0.0};
            for (int l = 0; l < n_tx; ++l)
                y += h.at(a, l) * grid.layers[l][t];
            rx.antennas[a][t] = y + sigma * rng.cnormal();
        }
    }
    return rx;
}

}  // namespace shortblock
