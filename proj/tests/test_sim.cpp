#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "shortblock/sim.hpp"

#include <cstdio>
#include <fstream>
#include <string>

using namespace shortblock;

namespace {

const std::string kBasisPath = std::string(TEST_DATA_DIR) + "/gpp_rm_basis_32x11.txt";

SimConfig base_config() {
    SimConfig cfg;
    cfg.basis_path = kBasisPath;
    cfg.threads = 1;
    return cfg;
}

SweepResult synthetic_sweep(std::vector<std::pair<double, double>> pts) {
    SweepResult r;
    for (auto [snr, bler] : pts) {
        BlerPoint p;
        p.snr_db = snr;
        p.trials = 100000;
        p.block_errors = static_cast<std::uint64_t>(bler * 100000);
        p.bler = bler;
        p.ci95 = 0.0;
        r.points.push_back(p);
    }
    return r;
}

}  // namespace

TEST_CASE("receiver names round trip") {
    CHECK(parse_receiver("ml") == ReceiverKind::MlGpp);
    CHECK(parse_receiver("ht") == ReceiverKind::BlockHt);
    CHECK(parse_receiver("fht") == ReceiverKind::BlockFht);
    CHECK(std::string(receiver_name(ReceiverKind::BlockFht)) == "fht");
    CHECK_THROWS_AS(parse_receiver("viterbi"), std::invalid_argument);
}

TEST_CASE("config validation") {
    CHECK_NOTHROW(validate_config(base_config()));

    auto bad = base_config();
    bad.k = 2;
    CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);

    bad = base_config();
    bad.receiver = ReceiverKind::MlGpp;
    bad.k = 12;
    CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);

    bad = base_config();
    bad.n_tx = 2;
    CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);

    bad = base_config();
    bad.n_tx = 4;  // n_rx stays 4
    CHECK_NOTHROW(validate_config(bad));

    bad = base_config();
    bad.snr_db.clear();
    CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);

    bad = base_config();
    bad.e = 50;  // grid fill for prbs=3 SIMO is 48
    CHECK_THROWS_AS(validate_config(bad), std::invalid_argument);
    bad.e = 48;
    CHECK_NOTHROW(validate_config(bad));
}

TEST_CASE("noiseless trials never err") {
    SimContext ctx(base_config());
    CHECK(ctx.e_total() == 48);
    for (std::uint64_t t = 0; t < 1000; ++t)
        CHECK_FALSE(ctx.run_trial(100.0, t));
}

TEST_CASE("trials are deterministic in (seed, snr, index)") {
    SimContext ctx(base_config());
    for (std::uint64_t t = 0; t < 200; ++t)
        CHECK(ctx.run_trial(0.0, t) == ctx.run_trial(0.0, t));

    auto other = base_config();
    other.seed = 2;
    SimContext ctx2(other);
    int differences = 0;
    for (std::uint64_t t = 0; t < 200; ++t)
        differences += ctx.run_trial(-10.0, t) != ctx2.run_trial(-10.0, t);
    CHECK(differences > 0);  // different seed, different trials
}

TEST_CASE("run_sweep stop rule and ordering") {
    auto cfg = base_config();
    cfg.snr_db = {5.0, -10.0};  // unsorted on purpose
    cfg.max_trials = 50000;
    cfg.min_block_errors = 50;
    const auto result = run_sweep(cfg);
    REQUIRE(result.points.size() == 2);
    CHECK(result.points[0].snr_db == -10.0);  // sorted ascending
    CHECK(result.points[1].snr_db == 5.0);

    // At -10 dB errors are plentiful: early stop long before max_trials.
    CHECK(result.points[0].block_errors >= 50);
    CHECK(result.points[0].trials < 50000);
    // BLER decreases with SNR.
    CHECK(result.points[1].bler < result.points[0].bler);
    // Echoed config resolves e.
    CHECK(result.config.e == 48);
}

TEST_CASE("csv is byte-identical across thread counts") {
    auto cfg = base_config();
    cfg.snr_db = {-6.0, 0.0};
    cfg.max_trials = 3000;
    cfg.min_block_errors = 1000000;  // force full trial count
    cfg.threads = 1;
    const auto serial = run_sweep(cfg);
    cfg.threads = 4;
    const auto parallel = run_sweep(cfg);
    CHECK(to_csv(serial) == to_csv(parallel));
    CHECK(serial.points[0].block_errors == parallel.points[0].block_errors);
}

TEST_CASE("csv format") {
    auto cfg = base_config();
    cfg.snr_db = {0.0};
    cfg.max_trials = 100;
    cfg.min_block_errors = 5;
    const auto result = run_sweep(cfg);
    const std::string csv = to_csv(result);
    CHECK(csv.rfind("snr_db,trials,block_errors,bler,ci95,receiver,n_rx,n_tx,beta,k,e,seed\n",
                    0) == 0);
    CHECK(csv.find("fht") != std::string::npos);
    CHECK(csv.back() == '\n');
    // One header plus one row.
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
}

TEST_CASE("gap_at_bler on synthetic sweeps") {
    const auto a = synthetic_sweep({{-2, 0.04}, {-1, 0.02}, {0, 0.01}, {1, 0.005}});
    CHECK(gap_at_bler(a, a, 0.01) == doctest::Approx(0.0));

    auto shifted = a;
    for (auto& p : shifted.points)
        p.snr_db += 1.0;
    CHECK(gap_at_bler(a, shifted, 0.01) == doctest::Approx(1.0));
    CHECK(gap_at_bler(a, shifted, 0.015) == doctest::Approx(1.0));

    // Interpolation is log-linear between brackets.
    CHECK(snr_at_bler(a, 0.02) == doctest::Approx(-1.0));
    CHECK(snr_at_bler(a, std::sqrt(0.02 * 0.01)) == doctest::Approx(-0.5));

    const auto low = synthetic_sweep({{0, 0.4}, {1, 0.3}});
    CHECK_THROWS_AS(gap_at_bler(a, low, 0.01), std::runtime_error);
    CHECK_THROWS_AS(snr_at_bler(a, 0.0), std::invalid_argument);
}

TEST_CASE("json config round trip with overrides") {
    const std::string path = "/tmp/shortblock_config_test.json";
    {
        std::ofstream out(path);
        out << R"({"k": 11, "receiver": "ml", "n_rx": 8, "beta": 1.5,
                   "snr_db": [-4, -2], "max_trials": 500, "seed": 77})";
    }
    SimConfig base;
    base.basis_path = kBasisPath;
    const auto cfg = config_from_json_file(path, base);
    CHECK(cfg.k == 11);
    CHECK(cfg.receiver == ReceiverKind::MlGpp);
    CHECK(cfg.n_rx == 8);
    CHECK(cfg.beta == 1.5);
    CHECK(cfg.snr_db == std::vector<double>{-4, -2});
    CHECK(cfg.max_trials == 500);
    CHECK(cfg.seed == 77);
    CHECK(cfg.basis_path == kBasisPath);  // untouched keys keep the base value
    CHECK(cfg.prbs == 3);

    {
        std::ofstream out(path);
        out << R"({"bogus_key": 1})";
    }
    CHECK_THROWS_AS(config_from_json_file(path), std::invalid_argument);

    {
        std::ofstream out(path);
        out << "not json";
    }
    CHECK_THROWS_AS(config_from_json_file(path), std::invalid_argument);
}

TEST_CASE("summary json carries config echo and points") {
    auto cfg = base_config();
    cfg.snr_db = {0.0};
    cfg.max_trials = 64;
    cfg.min_block_errors = 4;
    const auto result = run_sweep(cfg);
    const std::string j = summary_json(result);
    CHECK(j.find("\"version\"") != std::string::npos);
    CHECK(j.find("\"receiver\": \"fht\"") != std::string::npos);
    CHECK(j.find("\"points\"") != std::string::npos);
    CHECK(j.find("\"bler\"") != std::string::npos);
}

TEST_CASE("paired ml and block trials share message, channel and noise draws") {
    // Same seed: the two contexts see identical randomness per trial, so the
    // decoder comparison is isolated from the Monte Carlo draws.
    auto fht_cfg = base_config();
    auto ml_cfg = base_config();
    ml_cfg.receiver = ReceiverKind::MlGpp;
    SimContext fht_ctx(fht_cfg);
    SimContext ml_ctx(ml_cfg);

    int fht_err = 0, ml_err = 0;
    for (std::uint64_t t = 0; t < 20000; ++t) {
        fht_err += fht_ctx.run_trial(0.0, t);
        ml_err += ml_ctx.run_trial(0.0, t);
    }
    // Paired at 0 dB, nRx=4: the ML baseline should not lose to the block
    // decoder on average.
    CHECK(ml_err <= fht_err);
    CHECK(fht_err > 0);
}

TEST_CASE("mimo sweep runs and improves with snr") {
    auto cfg = base_config();
    cfg.n_tx = 4;
    cfg.n_rx = 4;
    cfg.prbs = 2;
    cfg.snr_db = {-2.0, 8.0};
    cfg.max_trials = 4000;
    cfg.min_block_errors = 4000;
    const auto result = run_sweep(cfg);
    CHECK(result.config.e == 128);
    CHECK(result.points[1].bler < result.points[0].bler);
}

TEST_CASE("ml receiver with short payloads uses the truncated basis") {
    auto cfg = base_config();
    cfg.receiver = ReceiverKind::MlGpp;
    cfg.k = 5;
    SimContext ctx(cfg);
    for (std::uint64_t t = 0; t < 200; ++t)
        CHECK_FALSE(ctx.run_trial(100.0, t));  // noiseless loopback at k = 5
}

TEST_CASE("selftest passes on the shipped asset") {
    CHECK(selftest(kBasisPath) == 0);
}
