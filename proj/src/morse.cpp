#include "geoindex/morse.hpp"

#include <algorithm>

namespace geoindex {

namespace {

bool even(std::int64_t v) { return v % 2 == 0; }
std::int64_t sign_of_degree(std::int64_t q) { return even(q) ? 1 : -1; }

void require_truncation(const JumpCertificate& cert, const VerificationReport& jump_bounds, std::int64_t q_max) {
    bool below = false, above = false;
    for (const auto& c : jump_bounds.checks) {
        below = below || c.clause == kBelowWindowClause;
        above = above || c.clause == kAboveWindowClause;
    }
    if (!below || !above || !jump_bounds.passed())
        throw Error(ErrorCode::TruncationUnsound,
                    "Morse numbers need a passed jump-bounds verification for this certificate");
    if (q_max > 2 * cert.N)
        throw Error(ErrorCode::TruncationUnsound, "degree " + std::to_string(q_max) + " exceeds 2N = " +
                                                      std::to_string(2 * cert.N));
}

void require_nondegenerate(const IndexGerm& germ, std::int64_t m, int nullity) {
    if (nullity > 0)
        throw Error(ErrorCode::Degenerate, "curve '" + germ.name + "' is degenerate at iterate " + std::to_string(m) +
                                               " (nullity " + std::to_string(nullity) + ")");
}

}  // namespace

int betti(std::int64_t q) {
    if (q == 2) return 1;
    if (q >= 4 && even(q)) return 2;
    return 0;
}

std::int64_t betti_alternating(std::int64_t top) {
    std::int64_t total = 0;
    for (std::int64_t i = 1; i <= top; ++i) total += sign_of_degree(i) * betti(i);
    return total;
}

int critical_dim(const IndexGerm& germ, std::int64_t m, std::int64_t q, const PrecisionBudget& budget) {
    require_nondegenerate(germ, m, nullity_at(germ, m, budget));
    std::int64_t i_m = index_at(germ, m, budget);
    return q == i_m && even(i_m - germ.initial_index) ? 1 : 0;
}

MorseCounts morse_numbers_up_to(const std::vector<IndexGerm>& system, const JumpCertificate& cert,
                                const VerificationReport& jump_bounds, std::int64_t q_max,
                                const PrecisionBudget& budget) {
    if (q_max < 0) throw Error(ErrorCode::InvalidArgument, "q_max must be non-negative");
    if (system.size() != cert.m.size())
        throw Error(ErrorCode::InvalidArgument, "certificate does not match the system");
    require_truncation(cert, jump_bounds, q_max);
    MorseCounts counts;
    counts.q_max = q_max;
    counts.M.assign(static_cast<std::size_t>(q_max + 1), 0);
    for (std::size_t k = 0; k < system.size(); ++k) {
        IndexEvaluator eval(system[k], budget);
        for (std::int64_t m = 1; m <= 2 * cert.m[k]; ++m) {
            std::int64_t i_m = eval.index(m);
            if (i_m < 0 || i_m > q_max || !even(i_m - system[k].initial_index)) continue;
            require_nondegenerate(system[k], m, eval.nullity(m));
            ++counts.M[static_cast<std::size_t>(i_m)];
        }
    }
    return counts;
}

std::int64_t alternating_sum(const MorseCounts& counts, std::int64_t top) {
    std::int64_t total = 0;
    for (std::int64_t i = 1; i <= top; ++i) total += sign_of_degree(i) * counts.at(i);
    return total;
}

MorseInequalities morse_inequalities(const MorseCounts& counts, std::int64_t top) {
    MorseInequalities result;
    // running = sum_{i<=q} (-1)^{q-i} (M_i - b_i)
    std::int64_t running = 0;
    for (std::int64_t q = 0; q <= top; ++q) {
        std::int64_t diff = counts.at(q) - betti(q);
        running = diff - running;
        if (running < 0 && result.alternating_holds) {
            result.alternating_holds = false;
            result.alternating_first_violation = q;
        }
        if (diff < 0 && result.termwise_holds) {
            result.termwise_holds = false;
            result.termwise_first_violation = q;
        }
    }
    return result;
}

std::pair<std::int64_t, Rational> euler_block_identity(const IndexGerm& germ, std::int64_t m_k,
                                                       const PrecisionBudget& budget) {
    if (m_k < 1) throw Error(ErrorCode::InvalidArgument, "m_k must be positive");
    IndexEvaluator eval(germ, budget);
    std::int64_t lhs = 0;
    for (std::int64_t m = 1; m <= 2 * m_k; ++m) {
        require_nondegenerate(germ, m, eval.nullity(m));
        std::int64_t i_m = eval.index(m);
        if (even(i_m - germ.initial_index)) lhs += sign_of_degree(i_m);
    }
    Rational gamma = gamma_invariant(eval.index(1), eval.index(2));
    return {lhs, Rational(2 * m_k) * gamma};
}

std::pair<int, int> parity_counts(const std::vector<std::int64_t>& initial_indices,
                                  const std::vector<std::int64_t>& top_indices, std::int64_t n) {
    int e = 0, o = 0;
    for (std::size_t k = 0; k < initial_indices.size(); ++k) {
        std::int64_t top = top_indices.at(k);
        if (top <= n) continue;
        bool top_even = even(top), base_even = even(initial_indices[k]);
        if (top_even && base_even) ++e;
        if (!top_even && !base_even) ++o;
    }
    return {e, o};
}

std::pair<int, int> parity_counts(const std::vector<IndexGerm>& system, const JumpCertificate& cert, std::int64_t n,
                                  const PrecisionBudget& budget) {
    if (system.size() != cert.m.size())
        throw Error(ErrorCode::InvalidArgument, "certificate does not match the system");
    std::vector<std::int64_t> initial, top;
    for (std::size_t k = 0; k < system.size(); ++k) {
        initial.push_back(system[k].initial_index);
        top.push_back(index_at(system[k], 2 * cert.m[k], budget));
    }
    return parity_counts(initial, top, n);
}

WindowTally window_tally(const std::vector<IndexGerm>& system, const JumpCertificate& cert,
                         const VerificationReport& jump_bounds, const PrecisionBudget& budget) {
    if (system.size() != cert.m.size())
        throw Error(ErrorCode::InvalidArgument, "certificate does not match the system");
    const std::int64_t top = 2 * cert.N;
    require_truncation(cert, jump_bounds, top);
    WindowTally t;
    t.N = cert.N;
    for (std::size_t k = 0; k < system.size(); ++k) {
        IndexEvaluator eval(system[k], budget);
        std::int64_t block = 0;
        for (std::int64_t m = 1; m <= 2 * cert.m[k]; ++m) {
            std::int64_t i_m = eval.index(m);
            if (!even(i_m - system[k].initial_index)) continue;
            require_nondegenerate(system[k], m, eval.nullity(m));
            std::int64_t s = sign_of_degree(i_m);
            block += s;
            if (i_m < 1 || i_m > top) continue;
            t.alternating_2N += s;
            if (i_m < top) t.alternating_2N_minus_1 += s;
            if (i_m == top) ++t.M_2N;
            if (i_m == top - 1) ++t.M_2N_minus_1;
        }
        t.euler_per_curve.push_back(block);
        t.euler_total += block;
    }
    return t;
}

}  // namespace geoindex
