#include "fracdt/lacunary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracdt {

namespace {

// Relative slack on ratio comparisons: multiplication by lambda may land one
// ulp short of lambda * previous.
constexpr double kRatioSlack = 1e-12;

}  // namespace

LacunarySequence::LacunarySequence(std::vector<double> terms, double lambda, long j_min)
    : terms_(std::move(terms)), lambda_(lambda), j_min_(j_min) {
    if (terms_.empty()) throw Error("sequence must be non-empty");
    if (!(lambda_ >= 1.0)) throw Error("lacunarity constant must be >= 1");
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (!(terms_[i] > 0.0) || !std::isfinite(terms_[i]))
            throw Error("sequence term at j=" + std::to_string(j_min_ + static_cast<long>(i)) + " is not positive");
        if (i == 0) continue;
        const long j = j_min_ + static_cast<long>(i) - 1;
        if (!(terms_[i] > terms_[i - 1])) throw Error("sequence is not strictly increasing at j=" + std::to_string(j));
        const double ratio = terms_[i] / terms_[i - 1];
        if (ratio < lambda_ * (1.0 - kRatioSlack))
            throw Error("lacunarity violated at j=" + std::to_string(j) + ": ratio " + std::to_string(ratio) +
                        " < lambda " + std::to_string(lambda_));
    }
}

LacunarySequence LacunarySequence::increasing(std::vector<double> terms, long j_min) {
    return LacunarySequence(std::move(terms), 1.0, j_min);
}

double LacunarySequence::at(long j) const {
    if (!contains(j)) throw std::out_of_range("sequence index " + std::to_string(j) + " out of range");
    return terms_[static_cast<std::size_t>(j - j_min_)];
}

double LacunarySequence::min_ratio() const {
    double r = HUGE_VAL;
    for (std::size_t i = 1; i < terms_.size(); ++i) r = std::min(r, terms_[i] / terms_[i - 1]);
    return r;
}

double LacunarySequence::max_ratio() const {
    double r = 0.0;
    for (std::size_t i = 1; i < terms_.size(); ++i) r = std::max(r, terms_[i] / terms_[i - 1]);
    return r;
}

LacunarySequence validate_lacunary(std::vector<double> terms, double lambda, long j_min) {
    if (!(lambda > 1.0)) throw Error("lacunarity constant must exceed 1");
    return LacunarySequence(std::move(terms), lambda, j_min);
}

LacunarySequence geometric_sequence(double lambda, long j_min, long j_max, double base) {
    if (j_max < j_min) throw Error("empty index range");
    std::vector<double> t;
    for (long j = j_min; j <= j_max; ++j) t.push_back(base * std::pow(lambda, static_cast<double>(j)));
    return validate_lacunary(std::move(t), lambda, j_min);
}

LacunarySequence perturbed_geometric_sequence(double lambda, long j_min, long j_max, double base) {
    if (j_max < j_min) throw Error("empty index range");
    std::vector<double> t;
    for (long j = j_min; j <= j_max; ++j) {
        const double x = static_cast<double>(j);
        t.push_back(base * std::pow(lambda, x) * (1.0 + 0.3 * std::sin(x)));
    }
    auto probe = LacunarySequence::increasing(t, j_min);
    const double effective = t.size() > 1 ? probe.min_ratio() : lambda;
    if (!(effective > 1.0)) throw Error("perturbed sequence is not lacunary for this lambda");
    return LacunarySequence(std::move(t), effective, j_min);
}

WeightSequence::WeightSequence(std::vector<double> values, long j_min) : values_(std::move(values)), j_min_(j_min) {
    for (double v : values_)
        if (!std::isfinite(v)) throw Error("weight sequence has a non-finite value");
}

double WeightSequence::at(long j) const {
    if (j < j_min() || j > j_max()) throw std::out_of_range("weight index " + std::to_string(j) + " out of range");
    return values_[static_cast<std::size_t>(j - j_min_)];
}

double WeightSequence::norm_linf() const {
    double r = 0.0;
    for (double v : values_) r = std::max(r, std::abs(v));
    return r;
}

double WeightSequence::norm_lp(double p) const {
    if (std::isinf(p)) return norm_linf();
    if (!(p >= 1.0)) throw Error("l^p norm needs p >= 1");
    double s = 0.0;
    for (double v : values_) s += std::pow(std::abs(v), p);
    return std::pow(s, 1.0 / p);
}

bool WeightSequence::aligned_with(const LacunarySequence& seq) const {
    return j_min() == seq.j_min() && j_max() == seq.j_max();
}

long RefinementResult::refined_index(long j) const {
    const long i = j - source_j_min;
    if (i < 0 || i >= static_cast<long>(position.size()))
        throw std::out_of_range("original index " + std::to_string(j) + " out of range");
    return position[static_cast<std::size_t>(i)];
}

std::pair<long, long> RefinementResult::block(long j) const {
    const long first = refined_index(j);
    const long last_j = source_j_min + static_cast<long>(position.size()) - 1;
    if (j == last_j) return {first, first};
    return {first, refined_index(j + 1) - 1};
}

std::pair<long, long> RefinementResult::window_map(long n1, long n2) const {
    return {refined_index(n1), refined_index(n2 + 1) - 1};
}

RefinementResult refine(const LacunarySequence& seq, const WeightSequence& v) {
    if (!v.aligned_with(seq)) throw Error("weights are not aligned with the sequence indices");
    const double lam = seq.lambda();
    if (!(lam > 1.0)) throw Error("refinement needs lambda > 1");
    const double upper = lam * lam * (1.0 + kRatioSlack);
    const long anchor = std::clamp(0L, seq.j_min(), seq.j_max());

    // Upward from the anchor: eta_anchor = a_anchor, then a_{j+1} or lambda * last.
    std::vector<double> up{seq.at(anchor)};
    std::vector<long> up_pos{0};  // offsets from the anchor
    for (long j = anchor; j < seq.j_max(); ++j) {
        const double next = seq.at(j + 1);
        double cur = up.back();
        while (next / cur > upper) {
            cur *= lam;
            up.push_back(cur);
        }
        up.push_back(next);
        up_pos.push_back(static_cast<long>(up.size()) - 1);
    }
    // Downward: a_{j-1} or last / lambda.
    std::vector<double> down;
    std::vector<long> down_pos;  // negative offsets, nearest first
    double cur = seq.at(anchor);
    for (long j = anchor; j > seq.j_min(); --j) {
        const double prev = seq.at(j - 1);
        while (cur / prev > upper) {
            cur /= lam;
            down.push_back(cur);
        }
        down.push_back(prev);
        down_pos.push_back(-static_cast<long>(down.size()));
        cur = prev;
    }

    const long refined_min = anchor - static_cast<long>(down.size());
    std::vector<double> eta(down.rbegin(), down.rend());
    eta.insert(eta.end(), up.begin(), up.end());

    std::vector<long> position(seq.size());
    for (std::size_t i = 0; i < down_pos.size(); ++i)
        position[static_cast<std::size_t>(anchor - 1 - static_cast<long>(i) - seq.j_min())] = anchor + down_pos[i];
    for (std::size_t i = 0; i < up_pos.size(); ++i)
        position[static_cast<std::size_t>(anchor + static_cast<long>(i) - seq.j_min())] = anchor + up_pos[i];

    std::vector<double> omega(eta.size());
    for (long j = seq.j_min(); j <= seq.j_max(); ++j) {
        const long first = position[static_cast<std::size_t>(j - seq.j_min())];
        const long last = j == seq.j_max() ? first : position[static_cast<std::size_t>(j + 1 - seq.j_min())] - 1;
        for (long k = first; k <= last; ++k) omega[static_cast<std::size_t>(k - refined_min)] = v.at(j);
    }

    return RefinementResult{LacunarySequence(std::move(eta), lam, refined_min),
                            WeightSequence(std::move(omega), refined_min), std::move(position), seq.j_min()};
}

}  // namespace fracdt
