#pragma once

#include "shortblock/receiver.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace shortblock {

inline constexpr const char* kVersionTag = "shortblock 0.1.0";

// One Monte Carlo study: code, receiver, antenna setup, pilot boost, SNR
// sweep, stopping rule, and resource profile. e = 0 derives the rate-match
// length from the grid (2 * N_d * n_tx); a nonzero e must match it.
struct SimConfig {
    int k = 11;
    ReceiverKind receiver = ReceiverKind::BlockFht;
    int n_rx = 4;
    int n_tx = 1;
    double beta = 1.0;
    std::vector<double> snr_db{0.0};
    std::uint64_t max_trials = 1000000;
    std::uint64_t min_block_errors = 100;
    std::uint64_t seed = 1;
    int prbs = 3;
    int symbols = 1;
    int e = 0;
    std::string basis_path = "data/gpp_rm_basis_32x11.txt";
    int threads = 0;  // 0 = hardware concurrency; 1 = single-threaded
    bool hard_demod = false;
};

struct BlerPoint {
    double snr_db = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t block_errors = 0;
    double bler = 0.0;
    double ci95 = 0.0;  // normal-approximation half width
};

struct SweepResult {
    SimConfig config;
    std::vector<BlerPoint> points;  // sorted by snr_db
    std::string version_tag = kVersionTag;
};

const char* receiver_name(ReceiverKind kind);
ReceiverKind parse_receiver(const std::string& name);

// Throws std::invalid_argument when fields are inconsistent.
void validate_config(const SimConfig& cfg);

// Immutable per-sweep state (codes, plan, DMRS, grid) shared across workers.
class SimContext {
public:
    explicit SimContext(const SimConfig& cfg);

    const SimConfig& config() const { return cfg_; }
    const ResourceConfig& grid() const { return grid_; }
    const SegmentPlan& plan() const { return plan_; }
    int e_total() const { return e_total_; }

    // One end-to-end trial; fully determined by (seed, snr_db, trial_index).
    bool run_trial(double snr_db, std::uint64_t trial_index) const;

private:
    SimConfig cfg_;
    ResourceConfig grid_;
    SegmentPlan plan_;
    std::vector<int> per_block_e_;
    std::vector<DmrsSequence> dmrs_;
    GppRmCode gpp_;
    MlTable ml_table_;
    int e_total_ = 0;
};

// Per SNR point: trials until min_block_errors or max_trials, counted in
// fixed-size chunks so thread count cannot change the outcome.
SweepResult run_sweep(const SimConfig& cfg);

// SNR at which the sweep crosses `target`, by log-linear interpolation
// between the bracketing points. Throws when the target is not bracketed.
double snr_at_bler(const SweepResult& sweep, double target);

// snr_at_bler(b) - snr_at_bler(a).
double gap_at_bler(const SweepResult& a, const SweepResult& b, double target);

std::string to_csv(const SweepResult& result);
std::string summary_json(const SweepResult& result);

// Keys present in the file replace the matching fields of `base`.
SimConfig config_from_json_file(const std::string& path, SimConfig base = SimConfig{});
std::string config_to_json(const SimConfig& cfg);

// Lightweight oracle suite behind the `selftest` CLI subcommand.
// Returns 0 on success, 1 on check failure; throws DataAssetError if the
// basis asset cannot be loaded.
int selftest(const std::string& basis_path);

}  // namespace shortblock
