#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "geoindex/iteration.hpp"

namespace geoindex {

/// Per-curve data of the simultaneous approximation problem.
struct JumpCurve {
    std::string name;
    std::int64_t beta = 0;
    std::vector<CertifiedReal> alphas;  // θ/π repeated S^- times
    CertifiedReal mean;                 // D = beta + sum(alphas)
    int rho = 1;
    int s_plus = 0;
    int c = 0;
};

struct JumpProblem {
    std::vector<IndexGerm> germs;
    std::vector<JumpCurve> curves;
    Rational delta;
    Rational epsilon;
    std::int64_t M = 1;
    std::int64_t M0 = 1;
    std::int64_t m_bar = 1;
    // first q entries 1/(M|D_i|), then alpha_{i,j}/|D_i| curve by curve
    std::vector<CertifiedReal> v;
    PrecisionBudget budget;

    std::size_t q() const { return curves.size(); }
    std::size_t l() const { return v.size(); }
    int max_mu() const;
};

/// When epsilon is absent it defaults to delta / (2 max(ceil(M|D_i|), 1)).
/// When m_bar is absent it is the iteration horizon over the positive-mean curves.
JumpProblem build_problem(const std::vector<IndexGerm>& germs, const Rational& delta,
                          std::optional<Rational> epsilon = std::nullopt, std::int64_t M0 = 1,
                          std::optional<std::int64_t> m_bar = std::nullopt, const PrecisionBudget& budget = {});

struct JumpCertificate {
    std::int64_t N = 0;
    std::int64_t M = 1;
    std::int64_t M0 = 1;
    Rational delta;
    Rational epsilon;
    std::vector<int> chi;  // length l
    std::vector<std::string> names;
    std::vector<std::int64_t> m;
    std::vector<int> Delta;
    std::vector<int> rho;

    friend bool operator==(const JumpCertificate&, const JumpCertificate&) = default;
};

struct Check {
    std::string clause;
    std::string curve;
    bool pass = true;
    std::string witness;
};

struct VerificationReport {
    std::vector<Check> checks;

    bool passed() const;
    const Check* first_failure() const;
    void add(Check check) { checks.push_back(std::move(check)); }
    void append(const VerificationReport& other);
};

/// Vertex data of N·v when every coordinate is within epsilon of an integer.
/// Throws PrecisionInsufficient when closeness cannot be decided.
std::optional<JumpCertificate> candidate_at(const JumpProblem& problem, std::int64_t N);

/// Sum-of-rounding identity, fraction closeness, rational integrality, the
/// Delta count and vertex closeness.
VerificationReport verify_diophantine(const JumpProblem& problem, const JumpCertificate& cert);

/// Nullity and index jump identities for 1 <= m <= m_bar, angle closeness at
/// every unit-circle eigenvalue, and the formula for m_i.
VerificationReport verify_index_jump(const JumpProblem& problem, const JumpCertificate& cert);

struct SearchOptions {
    int workers = 0;  // 0: hardware concurrency
    std::int64_t chunk = 1 << 16;
};

struct SearchStats {
    std::int64_t scanned = 0;
    std::int64_t vertex_hits = 0;
    std::int64_t rejected = 0;    // vertex-close but an identity failed
    std::int64_t undecided = 0;   // skipped for lack of precision
};

struct SearchResult {
    JumpCertificate certificate;
    SearchStats stats;
};

/// Smallest multiple N of M0 in [n_min, n_max] whose certificate passes both
/// verifications. Throws Error(NotFound) otherwise.
SearchResult search_with_stats(const JumpProblem& problem, std::int64_t n_min, std::int64_t n_max,
                               const SearchOptions& options = {});
JumpCertificate search(const JumpProblem& problem, std::int64_t n_min, std::int64_t n_max,
                       const SearchOptions& options = {});

struct ScaledCertificate {
    JumpCertificate base;
    std::int64_t p_hat = 1;
    std::int64_t N_hat = 0;
    Rational delta_hat;
    Rational epsilon_hat;
    std::vector<std::int64_t> m_hat;
    std::vector<int> chi_hat;
    std::vector<int> Delta_hat;
    VerificationReport ledger;

    /// The scaled data as a certificate at tolerances p_hat·delta, p_hat·epsilon.
    JumpCertificate as_certificate() const;
};

/// Scales N by p_hat and recomputes chi, m, Delta from scratch. The ledger
/// records the scaling relations, the fractional-part identity and the index
/// identities at the scaled tuple. Throws Error(ScaleMismatch) when a scaling
/// relation fails.
ScaledCertificate scale(const JumpProblem& problem, const JumpCertificate& cert, std::int64_t p_hat);

/// The problem with tolerances multiplied by p_hat (same curves, M, v).
JumpProblem rescaled_problem(const JumpProblem& problem, std::int64_t p_hat);

/// Delta recounted under delta1 and delta2 agree for every curve.
bool delta_invariance(const JumpProblem& problem, const JumpCertificate& cert, const Rational& delta1,
                      const Rational& delta2);

/// Delta_i under an arbitrary threshold.
int count_delta(const JumpCurve& curve, std::int64_t m, const Rational& delta, const PrecisionBudget& budget);

}  // namespace geoindex
