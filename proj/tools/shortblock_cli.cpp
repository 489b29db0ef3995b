#include "shortblock/sim.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace sb = shortblock;

namespace {

// "start:step:stop" (inclusive), "a,b,c", or a single value.
std::vector<double> parse_snr_spec(const std::string& spec) {
    std::vector<double> out;
    if (spec.find(':') != std::string::npos) {
        double start = 0, step = 0, stop = 0;
        if (std::sscanf(spec.c_str(), "%lf:%lf:%lf", &start, &step, &stop) != 3 || step <= 0)
            throw std::invalid_argument("bad --snr range '" + spec + "', expected start:step:stop");
        for (double v = start; v <= stop + 1e-9; v += step)
            out.push_back(v);
        return out;
    }
    std::size_t pos = 0;
    while (pos <= spec.size()) {
        const std::size_t comma = spec.find(',', pos);
        const std::string tok = spec.substr(pos, comma == std::string::npos ? comma : comma - pos);
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw std::invalid_argument("bad --snr value '" + tok + "'");
        }
        if (comma == std::string::npos)
            break;
        pos = comma + 1;
    }
    if (out.empty())
        throw std::invalid_argument("empty --snr list");
    return out;
}

std::uint64_t parse_payload_hex(const std::string& text, int k) {
    std::size_t used = 0;
    const std::uint64_t value = std::stoull(text, &used, 16);
    if (used != text.size())
        throw std::invalid_argument("bad hex payload '" + text + "'");
    if (k < 64 && value >> k)
        throw std::invalid_argument("payload does not fit in " + std::to_string(k) + " bits");
    return value;
}

std::string bits_to_string(const sb::BitVec& bits) {
    std::string s(bits.size(), '0');
    for (std::size_t i = 0; i < bits.size(); ++i)
        s[i] = static_cast<char>('0' + bits[i]);
    return s;
}

sb::BitVec string_to_bits(const std::string& s) {
    sb::BitVec bits(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '0' && s[i] != '1')
            throw std::invalid_argument("--bits must contain only '0' and '1'");
        bits[i] = static_cast<std::uint8_t>(s[i] - '0');
    }
    return bits;
}

sb::GppRmCode load_gpp_for_k(const std::string& path, int k) {
    const int columns = sb::gpp_asset_columns(path);
    sb::GppRmCode code = sb::load_gpp_code(path, columns);
    return columns == k ? code : sb::gpp_subcode(code, k);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << text;
}

// Flags shared by simulate and compare. Precedence: flag > config file >
// SHORTBLOCK_SEED (seed only) > built-in default.
struct SimFlags {
    CLI::App* cmd = nullptr;
    std::string config_path;
    std::string snr_spec;
    std::string receiver;
    std::uint64_t seed = 0;
    int n_rx = 0, n_tx = 0, prbs = 0, symbols = 0, e = 0, threads = -1, k_opt = 0;
    double beta = 1.0;
    std::uint64_t trials = 0, min_errors = 0;
    std::string basis;
    bool hard = false;

    void attach(CLI::App* sub) {
        cmd = sub;
        sub->add_option("--config", config_path, "JSON config file (flags override it)");
        sub->add_option("--seed", seed, "RNG seed");
        sub->add_option("--snr", snr_spec, "SNR points: start:step:stop or comma list (dB)");
        sub->add_option("--receiver", receiver, "ml, ht or fht");
        sub->add_option("--nrx", n_rx, "receive antennas");
        sub->add_option("--ntx", n_tx, "transmit layers (1, or 4 with --nrx 4)");
        sub->add_option("--beta", beta, "DMRS amplitude relative to data");
        sub->add_option("--trials", trials, "maximum trials per SNR point");
        sub->add_option("--min-errors", min_errors, "stop a point after this many block errors");
        sub->add_option("--prbs", prbs, "physical resource blocks");
        sub->add_option("--symbols", symbols, "symbols per slot");
        sub->add_option("--e", e, "rate-matched bits (0 = fill the data REs)");
        sub->add_option("--k", k_opt, "payload bits");
        sub->add_option("--basis", basis, "basis matrix asset for the ml receiver");
        sub->add_option("--threads", threads, "worker threads (0 = all cores, 1 = serial)");
        sub->add_flag("--hard", hard, "quantize soft bits to +-1 before decoding");
    }

    sb::SimConfig build() const {
        sb::SimConfig cfg;
        if (const char* env = std::getenv("SHORTBLOCK_SEED"))
            cfg.seed = std::strtoull(env, nullptr, 10);
        if (cmd->count("--config"))
            cfg = sb::config_from_json_file(config_path, cfg);
        if (cmd->count("--seed")) cfg.seed = seed;
        if (cmd->count("--snr")) cfg.snr_db = parse_snr_spec(snr_spec);
        if (cmd->count("--receiver")) cfg.receiver = sb::parse_receiver(receiver);
        if (cmd->count("--nrx")) cfg.n_rx = n_rx;
        if (cmd->count("--ntx")) cfg.n_tx = n_tx;
        if (cmd->count("--beta")) cfg.beta = beta;
        if (cmd->count("--trials")) cfg.max_trials = trials;
        if (cmd->count("--min-errors")) cfg.min_block_errors = min_errors;
        if (cmd->count("--prbs")) cfg.prbs = prbs;
        if (cmd->count("--symbols")) cfg.symbols = symbols;
        if (cmd->count("--e")) cfg.e = e;
        if (cmd->count("--k")) cfg.k = k_opt;
        if (cmd->count("--basis")) cfg.basis_path = basis;
        if (cmd->count("--threads")) cfg.threads = threads;
        if (cmd->count("--hard")) cfg.hard_demod = hard;
        sb::validate_config(cfg);
        return cfg;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Short-block channel codes with a block fast-Hadamard receiver"};
    app.set_version_flag("--version", sb::kVersionTag);
    app.require_subcommand(1);

    // codebook
    auto* codebook = app.add_subcommand("codebook", "dump a codebook, one codeword per line");
    int cb_m = 0, cb_k = 11;
    bool cb_gpp = false;
    std::string cb_basis = "data/gpp_rm_basis_32x11.txt", cb_out;
    codebook->add_option("--m", cb_m, "RM(1,m) order");
    codebook->add_flag("--gpp", cb_gpp, "dump the 3GPP C(32,k) codebook instead");
    codebook->add_option("--k", cb_k, "payload bits for --gpp");
    codebook->add_option("--basis", cb_basis, "basis matrix asset");
    codebook->add_option("--out", cb_out, "output file (default stdout)");
    codebook->callback([&] {
        std::string text;
        if (cb_gpp) {
            for (const auto& cw : sb::gpp_codebook(load_gpp_for_k(cb_basis, cb_k)))
                text += bits_to_string(cw.bits) += '\n';
        } else {
            if (codebook->count("--m") == 0)
                throw std::invalid_argument("codebook: need --m or --gpp");
            for (const auto& cw : sb::rm1_codebook(sb::build_rm1(cb_m)))
                text += bits_to_string(cw.bits) += '\n';
        }
        if (cb_out.empty())
            std::fputs(text.c_str(), stdout);
        else
            write_text(cb_out, text);
    });

    // encode
    auto* encode = app.add_subcommand("encode", "encode a hex payload");
    int en_k = 11, en_e = 0;
    bool en_gpp = false;
    std::string en_payload, en_basis = "data/gpp_rm_basis_32x11.txt";
    encode->add_option("--k", en_k, "payload bits")->required();
    encode->add_option("--payload", en_payload, "payload as hex, bit j of the value is message bit j")
        ->required();
    encode->add_flag("--gpp", en_gpp, "use the 3GPP C(32,k) code");
    encode->add_option("--e", en_e, "also print the rate-matched sequence of this length");
    encode->add_option("--basis", en_basis, "basis matrix asset");
    encode->callback([&] {
        const std::uint64_t value = parse_payload_hex(en_payload, en_k);
        sb::BitVec msg(en_k);
        for (int j = 0; j < en_k; ++j)
            msg[j] = static_cast<std::uint8_t>((value >> j) & 1);
        sb::ConcatenatedCodeword coded;
        if (en_gpp) {
            const auto gpp = load_gpp_for_k(en_basis, en_k);
            coded.bits = sb::encode_gpp(gpp, msg).bits;
            coded.boundaries = {0, gpp.n};
        } else {
            coded = sb::encode_blocks(msg, sb::plan_segments(en_k));
        }
        std::printf("codeword: %s\n", bits_to_string(coded.bits).c_str());
        if (en_e > 0)
            std::printf("rate_matched: %s\n",
                        bits_to_string(sb::rate_match(coded, en_e).bits).c_str());
    });

    // decode
    auto* decode = app.add_subcommand("decode", "decode a hard-bit codeword");
    int de_k = 11;
    bool de_gpp = false;
    std::string de_bits, de_basis = "data/gpp_rm_basis_32x11.txt";
    decode->add_option("--k", de_k, "payload bits")->required();
    decode->add_option("--bits", de_bits, "codeword bits as a 0/1 string")->required();
    decode->add_flag("--gpp", de_gpp, "use the 3GPP C(32,k) code");
    decode->add_option("--basis", de_basis, "basis matrix asset");
    decode->callback([&] {
        const sb::BitVec bits = string_to_bits(de_bits);
        std::vector<double> soft(bits.size());
        for (std::size_t i = 0; i < bits.size(); ++i)
            soft[i] = bits[i] ? -1.0 : 1.0;
        sb::BitVec msg;
        if (de_gpp) {
            const auto gpp = load_gpp_for_k(de_basis, de_k);
            if (bits.size() != 32)
                throw std::invalid_argument("decode: C(32,k) codewords have 32 bits");
            msg = sb::ml_decode(soft, gpp);
        } else {
            const auto plan = sb::plan_segments(de_k);
            if (static_cast<int>(bits.size()) != plan.total_code_bits())
                throw std::invalid_argument("decode: expected " +
                                            std::to_string(plan.total_code_bits()) + " bits");
            const auto block_soft = sb::derate_match(soft, plan.code_lengths, plan.code_lengths);
            msg = sb::decode_blocks(block_soft, plan).bits;
        }
        std::uint64_t value = 0;
        for (std::size_t j = 0; j < msg.size(); ++j)
            value |= static_cast<std::uint64_t>(msg[j]) << j;
        std::printf("payload: 0x%llX\n", static_cast<unsigned long long>(value));
    });

    // simulate
    auto* simulate = app.add_subcommand("simulate", "run one BLER sweep");
    SimFlags sim_flags;
    sim_flags.attach(simulate);
    std::string sim_out;
    bool sim_json = false;
    simulate->add_option("--out", sim_out, "write CSV here (default stdout)");
    simulate->add_flag("--json", sim_json, "print a JSON summary to stdout");
    simulate->callback([&] {
        const sb::SweepResult result = sb::run_sweep(sim_flags.build());
        const std::string csv = sb::to_csv(result);
        if (!sim_out.empty())
            write_text(sim_out, csv);
        if (sim_json)
            std::fputs((sb::summary_json(result) + "\n").c_str(), stdout);
        else if (sim_out.empty())
            std::fputs(csv.c_str(), stdout);
    });

    // compare
    auto* compare = app.add_subcommand("compare", "run two sweeps and report the SNR gap");
    SimFlags cmp_flags;
    cmp_flags.attach(compare);
    std::string cmp_a = "ml", cmp_b = "fht", cmp_out;
    double cmp_beta_a = -1.0, cmp_beta_b = -1.0, cmp_target = 0.01;
    bool cmp_json = false;
    compare->add_option("--receiver-a", cmp_a, "first receiver (reference)");
    compare->add_option("--receiver-b", cmp_b, "second receiver");
    compare->add_option("--beta-a", cmp_beta_a, "pilot boost for sweep A (default --beta)");
    compare->add_option("--beta-b", cmp_beta_b, "pilot boost for sweep B (default --beta)");
    compare->add_option("--target-bler", cmp_target, "BLER at which to measure the gap");
    compare->add_option("--out", cmp_out, "write combined CSV here");
    compare->add_flag("--json", cmp_json, "print a JSON summary to stdout");
    compare->callback([&] {
        sb::SimConfig base = cmp_flags.build();
        sb::SimConfig cfg_a = base, cfg_b = base;
        cfg_a.receiver = sb::parse_receiver(cmp_a);
        cfg_b.receiver = sb::parse_receiver(cmp_b);
        if (cmp_beta_a >= 0.0) cfg_a.beta = cmp_beta_a;
        if (cmp_beta_b >= 0.0) cfg_b.beta = cmp_beta_b;
        sb::validate_config(cfg_a);
        sb::validate_config(cfg_b);
        const sb::SweepResult a = sb::run_sweep(cfg_a);
        const sb::SweepResult b = sb::run_sweep(cfg_b);
        const double gap = sb::gap_at_bler(a, b, cmp_target);
        if (!cmp_out.empty()) {
            std::string csv = sb::to_csv(a);
            const std::string csv_b = sb::to_csv(b);
            csv += csv_b.substr(csv_b.find('\n') + 1);  // drop the second header
            write_text(cmp_out, csv);
        }
        if (cmp_json) {
            std::printf("{\"target_bler\": %g, \"gap_db\": %.6g, \"a\": %s, \"b\": %s}\n",
                        cmp_target, gap, sb::summary_json(a).c_str(),
                        sb::summary_json(b).c_str());
        } else {
            std::printf("gap at BLER %g: %.3f dB (%s -> %s)\n", cmp_target, gap,
                        sb::receiver_name(cfg_a.receiver), sb::receiver_name(cfg_b.receiver));
        }
    });

    // selftest
    auto* selftest = app.add_subcommand("selftest", "run the built-in oracle checks");
    std::string st_basis = "data/gpp_rm_basis_32x11.txt";
    selftest->add_option("--basis", st_basis, "basis matrix asset");
    int selftest_rc = 0;
    selftest->callback([&] { selftest_rc = sb::selftest(st_basis); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    } catch (const sb::DataAssetError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return selftest_rc;
}
