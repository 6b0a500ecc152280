#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "geoindex/jump.hpp"

namespace geoindex {

/// Clause names a jump-bounds report must carry (and pass) before Morse
/// numbers may be truncated at degree 2N.
inline constexpr const char* kBelowWindowClause = "below-window";
inline constexpr const char* kAboveWindowClause = "above-window";

/// Rational Betti numbers of the free loop space of S^3 relative to the
/// constant loops: 1 in degree 2, 2 in degrees 4, 6, ..., 0 otherwise.
int betti(std::int64_t q);

/// sum_{i=1}^{top} (-1)^i b_i.
std::int64_t betti_alternating(std::int64_t top);

/// Dimension of the critical module of c^m in degree q: 1 iff q = i(c^m) and
/// i(c^m) - i(c) is even. Throws Error(Degenerate) when ν(c^m) > 0.
int critical_dim(const IndexGerm& germ, std::int64_t m, std::int64_t q, const PrecisionBudget& budget = {});

/// M_q for 0 <= q <= q_max, counting iterates m <= 2 m_k of every curve.
struct MorseCounts {
    std::int64_t q_max = 0;
    std::vector<std::int64_t> M;

    std::int64_t at(std::int64_t q) const { return q < 0 || q > q_max ? 0 : M[static_cast<std::size_t>(q)]; }
};

/// Requires q_max <= 2N and a passed jump-bounds report (which makes the
/// truncation at 2 m_k exact in those degrees); throws Error(TruncationUnsound)
/// otherwise.
MorseCounts morse_numbers_up_to(const std::vector<IndexGerm>& system, const JumpCertificate& cert,
                                const VerificationReport& jump_bounds, std::int64_t q_max,
                                const PrecisionBudget& budget = {});

/// sum_{i=1}^{top} (-1)^i M_i.
std::int64_t alternating_sum(const MorseCounts& counts, std::int64_t top);

struct MorseInequalities {
    bool alternating_holds = true;   // sum_{i<=q} (-1)^{q-i} (M_i - b_i) >= 0 for all q <= top
    std::int64_t alternating_first_violation = -1;
    bool termwise_holds = true;      // M_q >= b_q for all q <= top
    std::int64_t termwise_first_violation = -1;
};

MorseInequalities morse_inequalities(const MorseCounts& counts, std::int64_t top);

/// (sum_{m=1}^{2 m_k} (-1)^{i(c^m)} dim C_{i(c^m)}(c^m), 2 m_k γ_c).
std::pair<std::int64_t, Rational> euler_block_identity(const IndexGerm& germ, std::int64_t m_k,
                                                       const PrecisionBudget& budget = {});

/// (n^e_+, n^o_+): curves whose top index i(c_k^{2 m_k}) exceeds n and has the
/// parity of i(c_k), split by that parity.
std::pair<int, int> parity_counts(const std::vector<IndexGerm>& system, const JumpCertificate& cert, std::int64_t n,
                                  const PrecisionBudget& budget = {});
std::pair<int, int> parity_counts(const std::vector<std::int64_t>& initial_indices,
                                  const std::vector<std::int64_t>& top_indices, std::int64_t n);

/// The few Morse quantities the impossibility argument needs at the window
/// 2N, accumulated in one pass over the iterates without a dense table.
struct WindowTally {
    std::int64_t N = 0;
    std::int64_t alternating_2N = 0;        // sum_{i<=2N} (-1)^i M_i
    std::int64_t alternating_2N_minus_1 = 0;
    std::int64_t M_2N = 0;
    std::int64_t M_2N_minus_1 = 0;
    std::int64_t euler_total = 0;           // sum_k of the block sums over m <= 2 m_k
    std::vector<std::int64_t> euler_per_curve;
};

/// Same preconditions as morse_numbers_up_to with q_max = 2N.
WindowTally window_tally(const std::vector<IndexGerm>& system, const JumpCertificate& cert,
                         const VerificationReport& jump_bounds, const PrecisionBudget& budget = {});

}  // namespace geoindex
