#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "geoindex/morse.hpp"

namespace geoindex {

/// Prime closed geodesics on S^3, each given by its index germ.
struct GeodesicSystem {
    std::vector<IndexGerm> curves;
    int dim = 3;
    std::optional<PrecisionBudget> precision;

    PrecisionBudget budget() const { return precision.value_or(PrecisionBudget::from_env()); }
};

struct Admissibility {
    bool dimension_ok = true;
    bool bumpy = true;
    bool positive_indices = true;
    bool positive_means = true;
    bool bott_positive = true;
    std::vector<std::string> problems;

    bool ok() const { return problems.empty(); }
};

Admissibility check_admissibility(const GeodesicSystem& system);

struct SearchBudget {
    std::int64_t n_min = 1;
    std::int64_t n_max = 10'000'000;
    Rational delta{1, 64};
    Rational epsilon{1, 64};
    std::int64_t p_hat = 4;
    int workers = 0;
    std::int64_t m0 = 1;
    std::optional<std::int64_t> mbar_override;
};

using Witness = nlohmann::ordered_json;

struct Stage {
    std::string name;
    std::string verdict;  // PASS, CONTRADICTION, INCONCLUSIVE, COMPUTED
    Witness witness = Witness::object();
};

struct ImpossibilityReport {
    GeodesicSystem system;
    SearchBudget budget;
    std::vector<Stage> stages;
    std::string final_verdict;
    std::optional<JumpCertificate> certificate;
    std::optional<JumpCertificate> scaled_certificate;
    std::int64_t m_bar = 0;

    bool contradiction() const { return final_verdict.rfind("CONTRADICTION", 0) == 0; }
    const Stage* stage(const std::string& name) const;
};

/// Lower and upper window bounds around 2N that every curve must respect:
/// iterates below 2 m_k stay at or below 2N - i(c_k), iterates above reach at
/// least 2N + i(c_k). Also checks 0 <= Delta_k <= C(M_k) <= 2.
VerificationReport verify_jump_bounds(const std::vector<IndexGerm>& curves, const JumpCertificate& cert,
                                      const PrecisionBudget& budget = {});

/// Parity pattern of the initial indices. PASS means the (1, even, even)
/// pattern the main argument handles; the other patterns end here.
Stage screen_parities(const GeodesicSystem& system, const SearchBudget& search_budget);

/// i(c_k^{2 m_k}) for the even-index curves must all equal 2N, else M_{2N} < b_{2N}.
Stage forced_top_indices(const std::vector<IndexGerm>& curves, const JumpCertificate& cert, const WindowTally& tally,
                         const PrecisionBudget& budget = {});

struct SandwichResult {
    Rational S;
    std::int64_t lower = 0;  // bounds on S forced by the alternating Morse inequalities
    std::int64_t upper = 0;
    Stage stage;
};

/// S = sum 2 m_k γ_k against the alternating Morse inequalities at 2N and 2N - 1.
SandwichResult sandwich(const std::vector<IndexGerm>& curves, const JumpCertificate& cert, const WindowTally& tally,
                        const PrecisionBudget& budget = {});

struct Mod4Verdict {
    bool contradiction = false;
    bool scaling_consistent = false;  // S_hat = 4 S
    bool half_integral = false;       // 2 S in Z
    std::int64_t window_lower = 0;    // 8N - 2
    std::int64_t window_upper = 0;    // 8N - 1
    std::string explanation;
};

/// The scaled run forces S_hat into [8N - 2, 8N - 1]; S_hat = 4 S with 2S
/// integral is even, so it can only sit at 8N - 2, and for S in the base
/// window it cannot reach it at all.
Mod4Verdict mod4_clash(std::int64_t N, const Rational& S, const Rational& S_hat);

/// Runs every stage in order and stops at the first CONTRADICTION or
/// INCONCLUSIVE verdict. Throws Error(Admissibility) for inadmissible systems
/// and Error(NotFound) when the search budget is exhausted.
ImpossibilityReport run_pipeline(const GeodesicSystem& system, const SearchBudget& search_budget = {});

/// Recomputes every stage from the certificates echoed in the report (no
/// search) and checks that verdicts and witnesses are reproduced.
VerificationReport reverify(const ImpossibilityReport& report);

}  // namespace geoindex
