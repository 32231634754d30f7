#pragma once

#include "fracdt/spectral.hpp"

#include <vector>

namespace fracdt {

/// Finite increasing positive sequence a_j, j in [j_min, j_max].
class LacunarySequence {
public:
    /// Checks positivity, strict monotonicity and a_{j+1}/a_j >= lambda.
    LacunarySequence(std::vector<double> terms, double lambda, long j_min = 0);

    /// Increasing sequence with no lacunarity requirement (lambda = 1).
    static LacunarySequence increasing(std::vector<double> terms, long j_min = 0);

    double lambda() const { return lambda_; }
    long j_min() const { return j_min_; }
    long j_max() const { return j_min_ + static_cast<long>(terms_.size()) - 1; }
    std::size_t size() const { return terms_.size(); }
    bool contains(long j) const { return j >= j_min() && j <= j_max(); }

    /// a_j; throws std::out_of_range outside [j_min, j_max].
    double at(long j) const;
    const std::vector<double>& terms() const { return terms_; }

    double min_ratio() const;
    double max_ratio() const;

private:
    LacunarySequence() = default;
    std::vector<double> terms_;
    double lambda_ = 1.0;
    long j_min_ = 0;
};

LacunarySequence validate_lacunary(std::vector<double> terms, double lambda, long j_min = 0);

/// a_j = base * lambda^j for j in [j_min, j_max].
LacunarySequence geometric_sequence(double lambda, long j_min, long j_max, double base = 1.0);

/// a_j = base * lambda^j (1 + 0.3 sin j), validated against its own min ratio.
LacunarySequence perturbed_geometric_sequence(double lambda, long j_min, long j_max, double base = 1.0);

/// v_j aligned with the indices of a LacunarySequence.
class WeightSequence {
public:
    WeightSequence(std::vector<double> values, long j_min = 0);

    long j_min() const { return j_min_; }
    long j_max() const { return j_min_ + static_cast<long>(values_.size()) - 1; }
    std::size_t size() const { return values_.size(); }
    double at(long j) const;
    const std::vector<double>& values() const { return values_; }

    double norm_linf() const;
    double norm_lp(double p) const;
    bool aligned_with(const LacunarySequence& seq) const;

private:
    std::vector<double> values_;
    long j_min_ = 0;
};

/**
 * Output of the refinement construction.
 *
 * Refined indices keep the original numbering at the anchor (index 0 when it
 * lies in range, else j_min): eta at the anchor equals a at the anchor.
 * Block J(j) lists the refined indices k whose step [eta_k, eta_{k+1}] lies
 * inside [a_j, a_{j+1}]; omega_k = v_j on J(j).
 */
struct RefinementResult {
    LacunarySequence eta;
    WeightSequence omega;
    /// position[j - a.j_min()] = refined index k with eta_k = a_j.
    std::vector<long> position;
    long source_j_min = 0;

    long refined_index(long j) const;
    /// J(j) = [first, last] (inclusive) range of refined indices.
    std::pair<long, long> block(long j) const;
    /// (N1, N2) -> (N1', N2') with eta_{N1'} = a_{N1} and eta_{N2'+1} = a_{N2+1}.
    std::pair<long, long> window_map(long n1, long n2) const;
};

/// Inserts lambda-multiples between consecutive terms until every ratio lies
/// in [lambda, lambda^2].
RefinementResult refine(const LacunarySequence& seq, const WeightSequence& v);

}  // namespace fracdt
