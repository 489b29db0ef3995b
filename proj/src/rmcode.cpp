#include "shortblock/rmcode.hpp"

#include <bit>
#include <cstddef>
#include <fstream>

namespace shortblock {

Rm1Code build_rm1(int m) {
    if (m < 1 || m > 15)
        throw std::invalid_argument("build_rm1: m must be in [1, 15]");
    Rm1Code code;
    code.order = m;
    code.k = m + 1;
    code.n = 1 << m;
    code.generator.assign(code.k, BitVec(code.n));
    for (int j = 0; j < code.n; ++j) {
        code.generator[0][j] = 1;  // the all-ones monomial
        for (int r = 1; r <= m; ++r)
            code.generator[r][j] = static_cast<std::uint8_t>((j >> (m - r)) & 1);
    }
    return code;
}

CodewordBits encode_rm1(const Rm1Code& code, const BitVec& msg) {
    if (static_cast<int>(msg.size()) != code.k)
        throw std::invalid_argument("encode_rm1: message length must equal m+1");
    CodewordBits cw;
    cw.bits.assign(code.n, 0);
    for (int r = 0; r < code.k; ++r) {
        if (!msg[r])
            continue;
        for (int j = 0; j < code.n; ++j)
            cw.bits[j] ^= code.generator[r][j];
    }
    return cw;
}

std::vector<CodewordBits> rm1_codebook(const Rm1Code& code) {
    if (code.order > 10)
        throw std::invalid_argument("rm1_codebook: m must be <= 10");
    const int m = code.order;
    std::vector<CodewordBits> book;
    book.reserve(std::size_t{2} << m);
    BitVec msg(code.k);
    for (int v = 0; v < (2 << m); ++v) {
        msg[0] = static_cast<std::uint8_t>((v >> m) & 1);  // m0
        for (int r = 1; r <= m; ++r)
            msg[m + 1 - r] = static_cast<std::uint8_t>((v >> (r - 1)) & 1);  // m_r
        book.push_back(encode_rm1(code, msg));
    }
    return book;
}

GppRmCode load_gpp_code(const std::string& path, int k) {
    if (k < 3 || k > 11)
        throw std::invalid_argument("load_gpp_code: k must be in [3, 11]");
    std::ifstream in(path);
    if (!in)
        throw DataAssetError("cannot open basis asset: " + path);
    GppRmCode code;
    code.k = k;
    std::string line;
    int row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() && in.peek() == std::char_traits<char>::eof())
            break;  // trailing newline
        if (row >= 32)
            throw DataAssetError(path + ": more than 32 rows");
        if (static_cast<int>(line.size()) != k)
            throw DataAssetError(path + ": row " + std::to_string(row) + " has " +
                                 std::to_string(line.size()) + " columns, expected " +
                                 std::to_string(k));
        BitVec bits(k);
        for (int col = 0; col < k; ++col) {
            const char c = line[col];
            if (c != '0' && c != '1')
                throw DataAssetError(path + ": row " + std::to_string(row) + " column " +
                                     std::to_string(col) + " is not '0' or '1'");
            bits[col] = static_cast<std::uint8_t>(c - '0');
        }
        code.basis.push_back(std::move(bits));
        ++row;
    }
    if (row != 32)
        throw DataAssetError(path + ": " + std::to_string(row) + " rows, expected 32");
    return code;
}

int gpp_asset_columns(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw DataAssetError("cannot open basis asset: " + path);
    std::string line;
    if (!std::getline(in, line))
        throw DataAssetError(path + ": empty asset");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    return static_cast<int>(line.size());
}

GppRmCode gpp_subcode(const GppRmCode& code, int k) {
    if (k < 3 || k > code.k)
        throw std::invalid_argument("gpp_subcode: k must be in [3, " +
                                    std::to_string(code.k) + "]");
    GppRmCode sub;
    sub.k = k;
    sub.n = code.n;
    sub.basis.reserve(code.basis.size());
    for (const auto& row : code.basis)
        sub.basis.emplace_back(row.begin(), row.begin() + k);
    return sub;
}

CodewordBits encode_gpp(const GppRmCode& code, const BitVec& msg) {
    if (static_cast<int>(msg.size()) != code.k)
        throw std::invalid_argument("encode_gpp: message length must equal k");
    CodewordBits cw;
    cw.bits.assign(code.n, 0);
    for (int i = 0; i < code.n; ++i) {
        std::uint8_t b = 0;
        for (int j = 0; j < code.k; ++j)
            b ^= static_cast<std::uint8_t>(msg[j] & code.basis[i][j]);
        cw.bits[i] = b;
    }
    return cw;
}

std::vector<CodewordBits> gpp_codebook(const GppRmCode& code) {
    std::vector<CodewordBits> book;
    book.reserve(std::size_t{1} << code.k);
    BitVec msg(code.k);
    for (std::uint32_t i = 0; i < (std::uint32_t{1} << code.k); ++i) {
        for (int j = 0; j < code.k; ++j)
            msg[j] = static_cast<std::uint8_t>((i >> j) & 1);
        book.push_back(encode_gpp(code, msg));
    }
    return book;
}

int min_distance(const std::vector<CodewordBits>& codebook) {
    if (codebook.size() < 2)
        throw std::invalid_argument("min_distance: need at least two codewords");
    const std::size_t len = codebook[0].bits.size();
    for (const auto& cw : codebook)
        if (cw.bits.size() != len)
            throw std::invalid_argument("min_distance: codeword lengths differ");
    // Pack into 64-bit words so the pairwise scan is popcounts.
    const std::size_t words = (len + 63) / 64;
    std::vector<std::vector<std::uint64_t>> packed(codebook.size(),
                                                   std::vector<std::uint64_t>(words, 0));
    for (std::size_t c = 0; c < codebook.size(); ++c)
        for (std::size_t j = 0; j < len; ++j)
            if (codebook[c].bits[j])
                packed[c][j / 64] |= std::uint64_t{1} << (j % 64);
    int best = static_cast<int>(len) + 1;
    for (std::size_t a = 0; a + 1 < packed.size(); ++a) {
        for (std::size_t b = a + 1; b < packed.size(); ++b) {
            int d = 0;
            for (std::size_t w = 0; w < words; ++w)
                d += std::popcount(packed[a][w] ^ packed[b][w]);
            if (d < best)
                best = d;
        }
    }
    return best;
}

}  // namespace shortblock
