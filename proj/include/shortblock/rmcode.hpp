#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace shortblock {

using BitVec = std::vector<std::uint8_t>;

// First-order Reed-Muller code RM(1,m): k = m+1 message bits, n = 2^m code
// bits. Generator rows are ordered (1, v_m, ..., v_1), where v_r at column j
// is bit (r-1) of j; messages follow the same order (m0, m_m, ..., m_1).
struct Rm1Code {
    int order = 0;  // m
    int k = 0;      // m + 1
    int n = 0;      // 2^m
    std::vector<BitVec> generator;  // (m+1) x 2^m
};

// 3GPP C(32,k) short block code, k in 3..11. The 32 x k basis matrix is a
// data asset loaded from disk (see data/gpp_rm_basis_32x11.txt).
struct GppRmCode {
    int k = 0;
    int n = 32;
    std::vector<BitVec> basis;  // 32 rows, k columns
};

struct CodewordBits {
    BitVec bits;
    int block_id = 0;
};

// Malformed or missing data asset (bad dimensions, non-binary characters).
class DataAssetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Rm1Code build_rm1(int m);

// msg is (m0, m_m, ..., m_1); returns msg * G over GF(2).
CodewordBits encode_rm1(const Rm1Code& code, const BitVec& msg);

// All 2^(m+1) codewords. Entry v encodes the message whose Hadamard index is
// v mod 2^m and whose m0 bit is v / 2^m, so entries [0, 2^m) are in bipolar
// form exactly the rows of sylvester(m) and the rest their complements.
std::vector<CodewordBits> rm1_codebook(const Rm1Code& code);

// The file must hold exactly 32 lines of k '0'/'1' characters.
GppRmCode load_gpp_code(const std::string& path, int k);

// Column count of a basis asset (width of its first row).
int gpp_asset_columns(const std::string& path);

// Restriction to the first k basis columns; payloads shorter than the asset
// width use this subcode.
GppRmCode gpp_subcode(const GppRmCode& code, int k);

CodewordBits encode_gpp(const GppRmCode& code, const BitVec& msg);

// All 2^k codewords; entry i encodes msg bit j = bit j of i.
std::vector<CodewordBits> gpp_codebook(const GppRmCode& code);

// Minimum pairwise Hamming distance over the codebook.
int min_distance(const std::vector<CodewordBits>& codebook);

}  // namespace shortblock
