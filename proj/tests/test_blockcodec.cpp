#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "shortblock/blockcodec.hpp"
#include "shortblock/hadamard.hpp"
#include "shortblock/rng.hpp"

#include <numeric>

using namespace shortblock;

namespace {

BitVec random_bits(Rng& rng, int count) {
    BitVec bits(count);
    const std::uint64_t w = rng.next_u64();
    for (int j = 0; j < count; ++j)
        bits[j] = static_cast<std::uint8_t>((w >> j) & 1);
    return bits;
}

std::vector<double> bipolar(const BitVec& bits) {
    std::vector<double> u(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i)
        u[i] = bits[i] ? -1.0 : 1.0;
    return u;
}

}  // namespace

TEST_CASE("plan_segments pins the 11-bit split") {
    const auto plan = plan_segments(11);
    CHECK(plan.block_sizes == std::vector<int>{5, 6});
    CHECK(plan.orders == std::vector<int>{4, 5});
    CHECK(plan.code_lengths == std::vector<int>{16, 32});
    CHECK(plan.total_code_bits() == 48);
}

TEST_CASE("plan_segments single block") {
    const auto plan = plan_segments(6);
    CHECK(plan.block_sizes == std::vector<int>{6});
}

TEST_CASE("plan_segments policy over the full payload range") {
    for (int k = 3; k <= 64; ++k) {
        const auto plan = plan_segments(k);
        CHECK(plan.block_count() == (k + 5) / 6);
        CHECK(std::accumulate(plan.block_sizes.begin(), plan.block_sizes.end(), 0) == k);
        for (int b = 0; b < plan.block_count(); ++b) {
            CHECK(plan.block_sizes[b] >= 2);
            CHECK(plan.block_sizes[b] <= 7);
            CHECK(plan.orders[b] == plan.block_sizes[b] - 1);
            CHECK(plan.code_lengths[b] == (1 << plan.orders[b]));
            if (b > 0)
                CHECK(plan.block_sizes[b] >= plan.block_sizes[b - 1]);  // smaller first
        }
        // As equal as possible: sizes differ by at most one.
        CHECK(plan.block_sizes.back() - plan.block_sizes.front() <= 1);
    }
    CHECK_THROWS_AS(plan_segments(2), std::invalid_argument);
    CHECK_THROWS_AS(plan_segments(65), std::invalid_argument);
}

TEST_CASE("encode_blocks basics") {
    const auto plan = plan_segments(11);

    CHECK(encode_blocks(BitVec(11, 0), plan).bits == BitVec(48, 0));

    // Only the first sub-block's m0 set: first codeword all ones, second zero.
    BitVec msg(11, 0);
    msg[0] = 1;
    const auto cw = encode_blocks(msg, plan);
    for (int j = 0; j < 16; ++j)
        CHECK(cw.bits[j] == 1);
    for (int j = 16; j < 48; ++j)
        CHECK(cw.bits[j] == 0);
    CHECK(cw.boundaries == std::vector<int>{0, 16, 48});

    CHECK_THROWS_AS(encode_blocks(BitVec(10, 0), plan), std::invalid_argument);
}

TEST_CASE("encode_blocks equals per-block encoding") {
    Rng rng(stream_key(11, 0));
    const auto plan = plan_segments(11);
    const auto rm4 = build_rm1(4);
    const auto rm5 = build_rm1(5);
    for (int rep = 0; rep < 200; ++rep) {
        const BitVec msg = random_bits(rng, 11);
        const auto cw = encode_blocks(msg, plan);
        const auto c1 = encode_rm1(rm4, BitVec(msg.begin(), msg.begin() + 5)).bits;
        const auto c2 = encode_rm1(rm5, BitVec(msg.begin() + 5, msg.end())).bits;
        CHECK(BitVec(cw.bits.begin(), cw.bits.begin() + 16) == c1);
        CHECK(BitVec(cw.bits.begin() + 16, cw.bits.end()) == c2);
    }
}

TEST_CASE("split_rate_match largest remainder") {
    CHECK(split_rate_match({16, 32}, 48) == std::vector<int>{16, 32});
    CHECK(split_rate_match({16, 32}, 96) == std::vector<int>{32, 64});
    // 32 * 16/48 = 10.67, 32 * 32/48 = 21.33: the larger remainder wins the spare bit.
    CHECK(split_rate_match({16, 32}, 32) == std::vector<int>{11, 21});
    CHECK_THROWS_AS(split_rate_match({16, 32}, 3), std::invalid_argument);
    CHECK_THROWS_AS(split_rate_match({16, 32}, 2), std::invalid_argument);
}

TEST_CASE("rate_match identity, repetition, puncture") {
    Rng rng(stream_key(12, 0));
    const auto plan = plan_segments(11);
    const auto cw = encode_blocks(random_bits(rng, 11), plan);

    const auto identity = rate_match(cw, 48);
    CHECK(identity.bits == cw.bits);
    CHECK(identity.per_block_e == std::vector<int>{16, 32});

    const auto doubled = rate_match(cw, 96);
    for (int j = 0; j < 16; ++j) {
        CHECK(doubled.bits[j] == cw.bits[j]);
        CHECK(doubled.bits[16 + j] == cw.bits[j]);  // block 1 repeated
    }
    for (int j = 0; j < 32; ++j) {
        CHECK(doubled.bits[32 + j] == cw.bits[16 + j]);
        CHECK(doubled.bits[64 + j] == cw.bits[16 + j]);  // block 2 repeated
    }

    const auto punctured = rate_match(cw, 32);
    CHECK(punctured.per_block_e == std::vector<int>{11, 21});
    for (int j = 0; j < 11; ++j)
        CHECK(punctured.bits[j] == cw.bits[j]);
    for (int j = 0; j < 21; ++j)
        CHECK(punctured.bits[11 + j] == cw.bits[16 + j]);
}

TEST_CASE("derate_match combining rules") {
    // Identity: values pass through, split at block boundaries.
    std::vector<double> soft(48);
    for (int i = 0; i < 48; ++i)
        soft[i] = 0.25 * i;
    const auto identity = derate_match(soft, std::vector<int>{16, 32}, std::vector<int>{16, 32});
    REQUIRE(identity.size() == 2);
    for (int i = 0; i < 16; ++i)
        CHECK(identity[0][i] == doctest::Approx(soft[i]));
    for (int i = 0; i < 32; ++i)
        CHECK(identity[1][i] == doctest::Approx(soft[16 + i]));

    // Double repetition: every combined value is 2v.
    const std::vector<double> rep(32, 0.7);
    const auto combined = derate_match(rep, std::vector<int>{16}, std::vector<int>{32});
    for (double v : combined[0])
        CHECK(v == doctest::Approx(1.4));

    // Punctured tail positions are exact zeros.
    const std::vector<double> punct(11, 1.0);
    const auto sparse = derate_match(punct, std::vector<int>{16}, std::vector<int>{11});
    for (int i = 0; i < 11; ++i)
        CHECK(sparse[0][i] == 1.0);
    for (int i = 11; i < 16; ++i)
        CHECK(sparse[0][i] == 0.0);

    CHECK_THROWS_AS(derate_match(std::vector<double>(10, 0.0), std::vector<int>{16}, std::vector<int>{11}),
                    std::invalid_argument);
}

TEST_CASE("index_to_message examples and round trip") {
    CHECK(index_to_message(0, +1, 4) == BitVec{0, 0, 0, 0, 0});
    CHECK(index_to_message(1, +1, 4) == BitVec{0, 0, 0, 0, 1});
    CHECK(index_to_message(8, -1, 4) == BitVec{1, 1, 0, 0, 0});
    CHECK_THROWS_AS(index_to_message(16, +1, 4), std::invalid_argument);

    // encode -> bipolar -> fht -> argmax inverts index_to_message everywhere.
    for (int m = 1; m <= 5; ++m) {
        const auto code = build_rm1(m);
        for (int i = 0; i < (1 << m); ++i) {
            for (int sign : {+1, -1}) {
                const BitVec msg = index_to_message(i, sign, m);
                const auto spec = fht(bipolar(encode_rm1(code, msg).bits), m);
                const auto best = argmax_abs(spec);
                CHECK(best.index == i);
                CHECK(best.sign == sign);
                CHECK(best.magnitude == doctest::Approx(1 << m));
            }
        }
    }
}

TEST_CASE("decode_blocks exhaustive clean round trip, K in {5, 6, 11}") {
    for (int k : {5, 6, 11}) {
        const auto plan = plan_segments(k);
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << k); ++v) {
            BitVec msg(k);
            for (int j = 0; j < k; ++j)
                msg[j] = static_cast<std::uint8_t>((v >> j) & 1);
            const auto cw = encode_blocks(msg, plan);
            const auto softs = derate_match(bipolar(cw.bits), plan, plan.code_lengths);
            CHECK(decode_blocks(softs, plan, Transform::Fht).bits == msg);
            CHECK(decode_blocks(softs, plan, Transform::Ht).bits == msg);
        }
    }
}

TEST_CASE("decode_blocks degenerate and symmetry rules") {
    const auto plan = plan_segments(11);

    // All-zero soft input decodes to the tie-break default.
    std::vector<std::vector<double>> zeros{std::vector<double>(16, 0.0),
                                           std::vector<double>(32, 0.0)};
    CHECK(decode_blocks(zeros, plan).bits == BitVec(11, 0));

    // Negating one block's softs flips only that block's m0 bit.
    Rng rng(stream_key(13, 0));
    for (int rep = 0; rep < 100; ++rep) {
        const BitVec msg = random_bits(rng, 11);
        const auto cw = encode_blocks(msg, plan);
        auto softs = derate_match(bipolar(cw.bits), plan, plan.code_lengths);
        for (auto& v : softs[1])
            v = -v;
        BitVec expect = msg;
        expect[5] ^= 1;  // the second block starts at bit 5 and leads with its m0
        CHECK(decode_blocks(softs, plan).bits == expect);
    }
}

TEST_CASE("decode decision invariant under positive scaling") {
    Rng rng(stream_key(14, 0));
    const auto plan = plan_segments(11);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<std::vector<double>> softs;
        for (int len : plan.code_lengths) {
            std::vector<double> v(len);
            for (auto& x : v)
                x = rng.cnormal().real();
            softs.push_back(std::move(v));
        }
        auto scaled = softs;
        const double c = 0.5 + 7.0 * rng.uniform();
        for (auto& block : scaled)
            for (auto& x : block)
                x *= c;
        CHECK(decode_blocks(softs, plan).bits == decode_blocks(scaled, plan).bits);
    }
}

TEST_CASE("HT and FHT block decoding decide identically on noisy inputs") {
    Rng rng(stream_key(15, 0));
    const auto plan = plan_segments(11);
    for (int rep = 0; rep < 500; ++rep) {
        std::vector<std::vector<double>> softs;
        for (int len : plan.code_lengths) {
            std::vector<double> v(len);
            for (auto& x : v)
                x = rng.cnormal().real();
            softs.push_back(std::move(v));
        }
        CHECK(decode_blocks(softs, plan, Transform::Fht).bits ==
              decode_blocks(softs, plan, Transform::Ht).bits);
    }
}

TEST_CASE("rate matching round trip is lossless when E_b >= N'_b") {
    Rng rng(stream_key(16, 0));
    for (int k : {5, 6, 11}) {
        const auto plan = plan_segments(k);
        const int n_total = plan.total_code_bits();
        for (int e : {n_total, n_total + 2, 2 * n_total}) {
            for (int rep = 0; rep < 50; ++rep) {
                const BitVec msg = random_bits(rng, k);
                const auto cw = encode_blocks(msg, plan);
                const auto matched = rate_match(cw, e);
                bool all_cover = true;
                for (int b = 0; b < plan.block_count(); ++b)
                    all_cover = all_cover && matched.per_block_e[b] >= plan.code_lengths[b];
                REQUIRE(all_cover);
                const auto softs =
                    derate_match(bipolar(matched.bits), plan, matched.per_block_e);
                CHECK(decode_blocks(softs, plan).bits == msg);
            }
        }
    }
}
