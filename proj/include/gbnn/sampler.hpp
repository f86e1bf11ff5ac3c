#pragma once

// Random binomial ideals in the n-d-s model: s binomials, each the difference
// of two distinct monomials drawn uniformly from the nonconstant monomials of
// degree exactly d (exact mode) or of degree 1..d (up-to mode).

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "gbnn/algebra.hpp"
#include "gbnn/error.hpp"
#include "gbnn/random.hpp"

namespace gbnn {

enum class DegreeMode { exact_degree, up_to_degree };

inline std::string_view to_string(DegreeMode m) {
    return m == DegreeMode::exact_degree ? "exact" : "upto";
}

inline DegreeMode parse_degree_mode(std::string_view s) {
    if (s == "exact" || s == "homogeneous") return DegreeMode::exact_degree;
    if (s == "upto" || s == "general") return DegreeMode::up_to_degree;
    throw ArgumentError("unknown degree mode: " + std::string(s));
}

struct RandomModel {
    std::size_t n = 3;
    int d = 7;
    std::size_t s = 5;
    DegreeMode mode = DegreeMode::exact_degree;
    std::uint64_t seed = 0;

    void validate() const {
        if (n < 1 || n > kMaxVariables) throw ArgumentError("model: n out of range");
        if (d < 1) throw ArgumentError("model: d must be >= 1");
        if (s < 1) throw ArgumentError("model: s must be >= 1");
    }

    friend bool operator==(const RandomModel&, const RandomModel&) = default;
};

struct IdealSample {
    RandomModel model;
    std::uint64_t index = 0;
    std::vector<Binomial> gens;

    std::vector<Polynomial> polynomials() const {
        std::vector<Polynomial> out;
        out.reserve(gens.size());
        for (const auto& b : gens) out.push_back(b.to_polynomial());
        return out;
    }

    friend bool operator==(const IdealSample&, const IdealSample&) = default;
};

/// Number of exponent vectors in n variables with total degree exactly k: C(k+n-1, n-1).
inline std::uint64_t count_monomials(std::size_t n, int k) {
    if (n < 1) throw ArgumentError("count_monomials: n must be >= 1");
    if (k < 0) throw ArgumentError("count_monomials: negative degree");
    // C(k + r, r) with r = n - 1, built incrementally; each partial product is an exact binomial.
    unsigned __int128 c = 1;
    const std::uint64_t r = n - 1;
    for (std::uint64_t i = 1; i <= r; ++i) {
        c = c * (static_cast<std::uint64_t>(k) + i) / i;
        if (c > std::numeric_limits<std::uint64_t>::max()) throw ArgumentError("count_monomials: overflow");
    }
    return static_cast<std::uint64_t>(c);
}

/// The rank-th degree-k exponent vector in descending lexicographic order:
/// rank 0 is (k,0,...,0), the last rank is (0,...,0,k).
inline Exponent unrank_monomial(std::size_t n, int k, std::uint64_t rank) {
    if (rank >= count_monomials(n, k)) throw ArgumentError("unrank_monomial: rank out of range");
    Exponent out(n);
    int remaining = k;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (int e = remaining; e >= 0; --e) {
            const std::uint64_t block = count_monomials(n - i - 1, remaining - e);
            if (rank < block) {
                out.set(i, e);
                remaining -= e;
                break;
            }
            rank -= block;
        }
    }
    out.set(n - 1, remaining);
    return out;
}

/// Inverse of unrank_monomial.
inline std::uint64_t rank_monomial(const Exponent& m) {
    const std::size_t n = m.size();
    if (n == 0) throw ArgumentError("rank_monomial: empty exponent");
    std::uint64_t rank = 0;
    int remaining = m.degree();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        for (int e = remaining; e > m[i]; --e) rank += count_monomials(n - i - 1, remaining - e);
        remaining -= m[i];
    }
    return rank;
}

/// Size of the sampling support: monomials of degree d, or of degrees 1..d.
inline std::uint64_t support_size(const RandomModel& model) {
    if (model.mode == DegreeMode::exact_degree) return count_monomials(model.n, model.d);
    std::uint64_t total = 0;
    for (int k = 1; k <= model.d; ++k) total += count_monomials(model.n, k);
    return total;
}

inline Exponent sample_monomial(const RandomModel& model, SplitMix64& rng) {
    model.validate();
    if (model.mode == DegreeMode::exact_degree)
        return unrank_monomial(model.n, model.d, rng.below(count_monomials(model.n, model.d)));
    std::uint64_t r = rng.below(support_size(model));
    for (int k = 1;; ++k) {
        const std::uint64_t c = count_monomials(model.n, k);
        if (r < c) return unrank_monomial(model.n, k, r);
        r -= c;
    }
}

/// Pure function of (model, index); the per-sample stream depends on
/// model.seed and index only.
inline IdealSample sample_ideal(const RandomModel& model, std::uint64_t index) {
    model.validate();
    if (support_size(model) < 2) throw ArgumentError("sample_ideal: fewer than two monomials to choose from");
    SplitMix64 rng = SplitMix64::stream(model.seed, index);
    IdealSample out{model, index, {}};
    out.gens.reserve(model.s);
    for (std::size_t g = 0; g < model.s; ++g) {
        const Exponent a = sample_monomial(model, rng);
        Exponent b = sample_monomial(model, rng);
        while (b == a) b = sample_monomial(model, rng);
        out.gens.push_back(Binomial::from_pair(a, b));
    }
    return out;
}

}  // namespace gbnn
