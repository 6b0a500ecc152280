#pragma once

#include <array>
#include <string>
#include <variant>
#include <vector>

#include "geoindex/exact_arith.hpp"

namespace geoindex {

/// θ/π for θ ∈ (0,π) ∪ (π,2π).
class Angle {
public:
    explicit Angle(CertifiedReal over_pi, const PrecisionBudget& budget = {});

    const CertifiedReal& over_pi() const noexcept { return over_pi_; }

private:
    CertifiedReal over_pi_;
};

enum class BClass { positive, zero, negative };
enum class N2Kind { trivial, nontrivial };

// [[λ, b], [0, λ]] with λ = ±1; only the sign class of b is kept.
struct N1Block {
    int eigenvalue = 1;
    BClass b = BClass::positive;
};

// diag(λ, 1/λ), λ ∉ {0, ±1}.
struct DBlock {
    CertifiedReal lambda;
};

// Rotation by θ.
struct RBlock {
    Angle theta;
};

// [[R(θ), B], [0, R(θ)]]; B is summarised by the trivial/nontrivial class.
struct N2Block {
    Angle theta;
    N2Kind kind = N2Kind::nontrivial;
};

using BasicBlock = std::variant<N1Block, DBlock, RBlock, N2Block>;
using BlockList = std::vector<BasicBlock>;

N1Block make_n1(int eigenvalue, BClass b);
DBlock make_d(CertifiedReal lambda, const PrecisionBudget& budget = {});

struct SplittingPair {
    int s_plus = 0;
    int s_minus = 0;

    friend bool operator==(const SplittingPair&, const SplittingPair&) = default;
    SplittingPair& operator+=(const SplittingPair& other) {
        s_plus += other.s_plus;
        s_minus += other.s_minus;
        return *this;
    }
};

/// A unit-circle eigenvalue e^{iπ·angle_over_pi} of a block, angle in [0, 2),
/// with the splitting numbers the block carries there.
struct SpectralPoint {
    CertifiedReal angle_over_pi;
    SplittingPair splitting;
};

/// The splitting-number table: every unit-circle eigenvalue of the block and
/// its (S+, S-). This is the single place the convention lives.
std::vector<SpectralPoint> spectral_points(const BasicBlock& block);

int block_dimension(const BasicBlock& block);
int total_dimension(const BlockList& blocks);

/// omega = e^{iπ·omega_over_pi}, omega_over_pi in [0, 2).
SplittingPair splitting_at(const BasicBlock& block, const CertifiedReal& omega_over_pi,
                           const PrecisionBudget& budget = {});
SplittingPair splitting_sum(const BlockList& blocks, const CertifiedReal& omega_over_pi,
                            const PrecisionBudget& budget = {});

/// S^+_M(1).
int s_plus_at_one(const BlockList& blocks);

/// C(M): sum of S^- over unit-circle points other than 1.
int big_C(const BlockList& blocks);

/// dim ker(block^m - I).
int nullity_contribution(const BasicBlock& block, std::int64_t m, const PrecisionBudget& budget = {});

/// Total algebraic multiplicity of unit-circle eigenvalues.
int elliptic_height(const BlockList& blocks);

/// One term of the iteration formula: angle θ/π in (0,2) weighted by S^-.
struct EllipticTerm {
    CertifiedReal alpha;
    int weight = 0;
};

/// Points 0 < θ < 2π carrying S^- > 0, one entry per block.
std::vector<EllipticTerm> elliptic_terms(const BlockList& blocks);

/// Realises a 2×2 symplectic matrix (row-major a, b, c, d) as a basic
/// normal form.
BasicBlock classify_2x2(const std::array<CertifiedReal, 4>& matrix, const PrecisionBudget& budget = {});

std::string describe(const BasicBlock& block);

}  // namespace geoindex
