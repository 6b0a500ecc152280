#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "geoindex/normal_forms.hpp"

namespace geoindex {

/// A symplectic path germ: the index of the first iterate and the normal-form
/// decomposition of the end matrix.
struct IndexGerm {
    std::string name;
    std::int64_t initial_index = 0;
    BlockList blocks;
};

/// Throws Error(Range) unless the blocks have dimension 2n - 2.
void check_dimension(const IndexGerm& germ, int n = 3);

/// Block data the iteration formula consumes.
struct SpectralSummary {
    int s_plus = 0;  // S^+_M(1)
    int c = 0;       // C(M)
    std::int64_t beta = 0;  // i(γ,1) + S^+ - C
    std::vector<EllipticTerm> terms;
};

SpectralSummary summarize(const IndexGerm& germ);

/// i(γ, m) from the closed iteration formula, every E(·) certified.
std::int64_t index_at(const IndexGerm& germ, std::int64_t m, const PrecisionBudget& budget = {});

/// ν(γ, m) as the sum of block nullities of M^m.
int nullity_at(const IndexGerm& germ, std::int64_t m, const PrecisionBudget& budget = {});

/// î(γ, 1); exact whenever every angle is rational.
CertifiedReal mean_index(const IndexGerm& germ);

/// (S^+ + C, C - S^+): for every m >= 1,
///   m·î - lower <= i(γ,m) < m·î + upper.
std::pair<int, int> deviation_bounds(const IndexGerm& germ);

/// γ_c ∈ {±1/2, ±1} from i(c) and i(c²).
Rational gamma_invariant(std::int64_t i1, std::int64_t i2);

/// No eigenvalue 1 at any iterate: no N1 blocks, every angle declared irrational.
bool is_bumpy(const IndexGerm& germ);

/// Least m0 >= 1 with i(γ, m + m0) >= i(γ,1) + 4 for all m >= 1.
/// Throws Error(Unbounded) when î <= 0.
std::int64_t mbar_single(const IndexGerm& germ, const PrecisionBudget& budget = {});

/// Maximum of mbar_single over the system.
std::int64_t mbar(const std::vector<IndexGerm>& system, const PrecisionBudget& budget = {});

struct BottPositivity {
    bool holds = true;
    std::int64_t horizon = 0;          // checked directly for m < horizon
    std::int64_t first_violation = 0;  // 0 when none
};

/// i(γ,m) >= i(γ,1) for all m >= 1: checked directly below the horizon where
/// the linear lower bound takes over. Requires î > 0.
BottPositivity bott_positivity(const IndexGerm& germ, const PrecisionBudget& budget = {});

/// Index table over an m-range, computed on construction.
struct IndexProfile {
    std::string germ_name;
    std::int64_t m_min = 1;
    std::vector<std::int64_t> index;
    std::vector<int> nullity;

    std::int64_t m_max() const { return m_min + static_cast<std::int64_t>(index.size()) - 1; }
    std::int64_t index_of(std::int64_t m) const { return index.at(static_cast<std::size_t>(m - m_min)); }
    int nullity_of(std::int64_t m) const { return nullity.at(static_cast<std::size_t>(m - m_min)); }
};

IndexProfile index_profile(const IndexGerm& germ, std::int64_t m_min, std::int64_t m_max,
                           const PrecisionBudget& budget = {});

/// Fast evaluator for long runs of iterates. Rational angles use integer
/// arithmetic; irrational ones a floating-point estimate with a rigorous
/// error bound, falling back to certified arithmetic near integers. Results
/// agree with index_at/nullity_at exactly.
class IndexEvaluator {
public:
    explicit IndexEvaluator(const IndexGerm& germ, PrecisionBudget budget = {});

    std::int64_t index(std::int64_t m) const;
    int nullity(std::int64_t m) const;

    const SpectralSummary& summary() const noexcept { return summary_; }

private:
    struct Term {
        bool rational = false;
        std::int64_t num = 0;  // alpha = num/den when rational
        std::int64_t den = 1;
        double approx = 0.0;
        double error = 0.0;
        int weight = 0;
        CertifiedReal alpha;
    };

    // E(m·alpha/2)
    std::int64_t ceil_half_multiple(const Term& term, std::int64_t m) const;

    IndexGerm germ_;
    SpectralSummary summary_;
    std::vector<Term> terms_;
    PrecisionBudget budget_;
};

}  // namespace geoindex
