#pragma once

// Lossless exponent encodings of sampled ideals and the engineered feature
// vector (degree statistics, Krull dimension, degree of the variety).

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "gbnn/algebra.hpp"
#include "gbnn/error.hpp"
#include "gbnn/sampler.hpp"

namespace gbnn {

// ---------------------------------------------------------------------------
// Encodings

/// Generator-major exponents: lead then trail of each binomial, 2*n*s values.
struct FlatEncoding {
    std::vector<int> values;

    friend bool operator==(const FlatEncoding&, const FlatEncoding&) = default;
};

/// Sorts generators descending by (lead, trail) under grevlex. Idempotent.
inline IdealSample canonicalize(IdealSample sample) {
    std::stable_sort(sample.gens.begin(), sample.gens.end(), [](const Binomial& a, const Binomial& b) {
        auto ord = grevlex_compare(a.lead, b.lead);
        if (ord != 0) return ord > 0;
        return grevlex_compare(a.trail, b.trail) > 0;
    });
    return sample;
}

inline FlatEncoding encode_flat(const IdealSample& sample, bool canonical) {
    const IdealSample& src = canonical ? canonicalize(sample) : sample;
    FlatEncoding out;
    const std::size_t n = sample.model.n;
    out.values.reserve(2 * n * src.gens.size());
    for (const auto& g : src.gens) {
        if (g.nvars() != n) throw DimensionError("encode_flat: generator dimension mismatch");
        for (auto e : g.lead.entries()) out.values.push_back(e);
        for (auto e : g.trail.entries()) out.values.push_back(e);
    }
    return out;
}

/// Inverse of encode_flat; model supplies n and s (and is copied into the sample).
inline IdealSample decode_flat(std::span<const int> values, const RandomModel& model, std::uint64_t index = 0) {
    const std::size_t n = model.n;
    const std::size_t s = model.s;
    if (values.size() != 2 * n * s)
        throw DimensionError("decode_flat: expected " + std::to_string(2 * n * s) + " values, got " +
                             std::to_string(values.size()));
    IdealSample out{model, index, {}};
    out.gens.reserve(s);
    for (std::size_t g = 0; g < s; ++g) {
        auto row = values.subspan(2 * n * g, 2 * n);
        if (std::any_of(row.begin(), row.end(), [](int v) { return v < 0; }))
            throw MalformedEncoding("generator " + std::to_string(g) + ": negative exponent");
        Exponent lead(row.first(n));
        Exponent trail(row.last(n));
        if (grevlex_compare(lead, trail) <= 0)
            throw MalformedEncoding("generator " + std::to_string(g) + ": lead does not exceed trail");
        out.gens.emplace_back(std::move(lead), std::move(trail));
    }
    return out;
}

/// decode_flat without a known model: d is taken as the largest lead degree.
inline IdealSample decode_flat(std::span<const int> values, std::size_t n, std::size_t s) {
    RandomModel model;
    model.n = n;
    model.s = s;
    model.d = 1;
    if (n == 0 || s == 0) throw DimensionError("decode_flat: n and s must be positive");
    IdealSample out = decode_flat(values, model);
    bool homogeneous = true;
    for (const auto& g : out.gens) {
        out.model.d = std::max(out.model.d, g.degree());
        homogeneous = homogeneous && g.lead.degree() == g.trail.degree() &&
                      g.degree() == out.gens.front().degree();
    }
    out.model.mode = homogeneous ? DegreeMode::exact_degree : DegreeMode::up_to_degree;
    return out;
}

inline double euclidean_distance(std::span<const int> u, std::span<const int> v) {
    if (u.size() != v.size()) throw DimensionError("euclidean_distance: length mismatch");
    double sum = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double diff = static_cast<double>(u[i]) - static_cast<double>(v[i]);
        sum += diff * diff;
    }
    return std::sqrt(sum);
}

inline double euclidean_distance(const FlatEncoding& u, const FlatEncoding& v) {
    return euclidean_distance(std::span<const int>(u.values), std::span<const int>(v.values));
}

// ---------------------------------------------------------------------------
// Degree statistics

struct DegreeStats {
    int min = 0;
    int max = 0;
    double mean = 0;
    double var = 0;  // population variance
};

/// Generator degree is the lead monomial's total degree.
inline DegreeStats degree_stats(const IdealSample& sample) {
    if (sample.gens.empty()) throw ArgumentError("degree_stats: no generators");
    DegreeStats st;
    st.min = st.max = sample.gens.front().degree();
    double sum = 0;
    for (const auto& g : sample.gens) {
        st.min = std::min(st.min, g.degree());
        st.max = std::max(st.max, g.degree());
        sum += g.degree();
    }
    const double count = static_cast<double>(sample.gens.size());
    st.mean = sum / count;
    double sq = 0;
    for (const auto& g : sample.gens) sq += (g.degree() - st.mean) * (g.degree() - st.mean);
    st.var = sq / count;
    return st;
}

// ---------------------------------------------------------------------------
// Monomial ideal invariants

/// Drops generators divisible by another generator (and duplicates).
inline std::vector<Exponent> minimalize_monomials(std::vector<Exponent> gens) {
    std::stable_sort(gens.begin(), gens.end(), GrevlexLess{});
    std::vector<Exponent> out;
    for (auto& m : gens) {
        const bool redundant = std::any_of(out.begin(), out.end(), [&](const Exponent& k) {
            return monomial_divides(k, m);
        });
        if (!redundant) out.push_back(std::move(m));
    }
    return out;
}

namespace detail {

inline std::uint32_t support_mask(const Exponent& m) {
    std::uint32_t mask = 0;
    for (std::size_t i = 0; i < m.size(); ++i)
        if (m[i] > 0) mask |= 1u << i;
    return mask;
}

// Smallest number of variables hitting every support, searched by branching
// on the variables of the first support not yet hit.
inline int min_hitting_set(const std::vector<std::uint32_t>& supports, std::uint32_t chosen, int used, int best) {
    if (used >= best) return best;
    for (auto sup : supports) {
        if (sup & chosen) continue;
        for (std::uint32_t rest = sup; rest; rest &= rest - 1) {
            const std::uint32_t bit = rest & (~rest + 1);
            best = min_hitting_set(supports, chosen | bit, used + 1, best);
        }
        return best;
    }
    return used;
}

}  // namespace detail

/// Krull dimension of R/I for the monomial ideal I generated by `lead_monomials`:
/// the size of the largest variable set containing no generator's support.
/// -1 for the unit ideal, n for the zero ideal.
inline int krull_dimension(const std::vector<Exponent>& lead_monomials, std::size_t n) {
    std::vector<std::uint32_t> supports;
    for (const auto& m : lead_monomials) {
        if (m.size() != n) throw DimensionError("krull_dimension: variable count mismatch");
        if (m.is_constant()) return -1;
        supports.push_back(detail::support_mask(m));
    }
    std::sort(supports.begin(), supports.end());
    supports.erase(std::unique(supports.begin(), supports.end()), supports.end());
    const int cover = detail::min_hitting_set(supports, 0, 0, static_cast<int>(n) + 1);
    return static_cast<int>(n) - cover;
}

/// Integer polynomial in t, coefficient i of t^i. Trailing zeros trimmed.
struct HilbertNumerator {
    std::vector<std::int64_t> coeffs;

    std::int64_t operator()(std::int64_t t) const {
        std::int64_t v = 0;
        for (std::size_t i = coeffs.size(); i-- > 0;) v = v * t + coeffs[i];
        return v;
    }

    friend bool operator==(const HilbertNumerator&, const HilbertNumerator&) = default;
};

enum class PivotRule {
    /// Most frequent variable among non-pure-power generators, raised to its
    /// smallest positive exponent among them.
    most_frequent,
    /// Lowest-index variable occurring in a non-pure-power generator, to the first power.
    first_variable_linear,
};

namespace detail {

using IntPoly = std::vector<std::int64_t>;

inline void trim(IntPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

inline IntPoly multiply(const IntPoly& a, const IntPoly& b) {
    if (a.empty() || b.empty()) return {};
    IntPoly out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    trim(out);
    return out;
}

inline void add_shifted(IntPoly& acc, const IntPoly& p, std::size_t shift) {
    if (acc.size() < p.size() + shift) acc.resize(p.size() + shift, 0);
    for (std::size_t i = 0; i < p.size(); ++i) acc[i + shift] += p[i];
    trim(acc);
}

inline IntPoly one_minus_t_power(int k) {
    IntPoly p(static_cast<std::size_t>(k) + 1, 0);
    p[0] += 1;
    p[static_cast<std::size_t>(k)] -= 1;
    trim(p);
    return p;
}

inline bool pairwise_coprime(const std::vector<Exponent>& gens) {
    std::uint32_t seen = 0;
    for (const auto& m : gens) {
        const std::uint32_t mask = support_mask(m);
        if (mask & seen) return false;
        seen |= mask;
    }
    return true;
}

inline IntPoly hilbert_numerator_rec(std::vector<Exponent> gens, std::size_t n, PivotRule rule) {
    gens = minimalize_monomials(std::move(gens));
    if (gens.empty()) return {1};
    if (pairwise_coprime(gens)) {
        IntPoly acc{1};
        for (const auto& m : gens) acc = multiply(acc, one_minus_t_power(m.degree()));
        return acc;
    }

    // Non-coprime minimal generators always include one with support >= 2.
    std::vector<int> freq(n, 0);
    std::vector<int> min_exp(n, 0);
    for (const auto& m : gens) {
        if (std::popcount(support_mask(m)) < 2) continue;
        for (std::size_t i = 0; i < n; ++i) {
            if (m[i] == 0) continue;
            ++freq[i];
            min_exp[i] = min_exp[i] == 0 ? m[i] : std::min(min_exp[i], m[i]);
        }
    }
    std::size_t var = n;
    int power = 1;
    if (rule == PivotRule::most_frequent) {
        for (std::size_t i = 0; i < n; ++i)
            if (freq[i] > 0 && (var == n || freq[i] > freq[var])) var = i;
        power = min_exp[var];
    } else {
        for (std::size_t i = 0; i < n && var == n; ++i)
            if (freq[i] > 0) var = i;
    }
    Exponent pivot(n);
    pivot.set(var, power);

    std::vector<Exponent> sum = gens;
    sum.push_back(pivot);
    std::vector<Exponent> quotient;
    quotient.reserve(gens.size());
    for (const auto& m : gens) {
        Exponent q = m;
        q.set(var, std::max(0, m[var] - power));
        quotient.push_back(q);
    }

    IntPoly result = hilbert_numerator_rec(std::move(sum), n, rule);
    add_shifted(result, hilbert_numerator_rec(std::move(quotient), n, rule), static_cast<std::size_t>(power));
    return result;
}

}  // namespace detail

/// Numerator N(t) of the Hilbert series N(t)/(1-t)^n of R/I for the monomial ideal I.
/// Uses N(I) = N(I + (p)) + t^deg(p) N(I : p) on a variable-power pivot p.
inline HilbertNumerator hilbert_numerator(const std::vector<Exponent>& gens, std::size_t n,
                                          PivotRule rule = PivotRule::most_frequent) {
    for (const auto& m : gens)
        if (m.size() != n) throw DimensionError("hilbert_numerator: variable count mismatch");
    return {detail::hilbert_numerator_rec(gens, n, rule)};
}

/// Q(1) where N(t) = (1-t)^(n-dim) Q(t).
inline std::int64_t variety_degree(const HilbertNumerator& numerator, std::size_t n, int dim) {
    if (dim < 0 || dim > static_cast<int>(n)) throw ArgumentError("variety_degree: dimension out of range");
    detail::IntPoly q = numerator.coeffs;
    for (std::size_t k = 0; k < n - static_cast<std::size_t>(dim); ++k) {
        // q = (1 - t) * next  <=>  next_i = sum_{j<=i} q_j, with remainder sum(q) == 0.
        std::int64_t total = 0;
        for (auto c : q) total += c;
        if (q.empty() || total != 0)
            throw InconsistencyError("variety_degree: (1-t)^" + std::to_string(n - dim) +
                                     " does not divide the Hilbert numerator");
        detail::IntPoly next(q.size() - 1, 0);
        std::int64_t running = 0;
        for (std::size_t i = 0; i + 1 < q.size(); ++i) {
            running += q[i];
            next[i] = running;
        }
        detail::trim(next);
        q = std::move(next);
    }
    std::int64_t value = 0;
    for (auto c : q) value += c;
    if (value == 0)
        throw InconsistencyError("variety_degree: Q(1) = 0, dimension is smaller than the pole order");
    return value;
}

// ---------------------------------------------------------------------------
// Feature vector

inline constexpr const char* kFeatureHeader = "min_deg,max_deg,mean_deg,var_deg,num_gens,dim,degree";

struct FeatureVector {
    int min_deg = 0;
    int max_deg = 0;
    double mean_deg = 0;
    double var_deg = 0;
    std::size_t num_gens = 0;
    int dim = 0;
    std::int64_t degree = 0;

    std::vector<double> as_row() const {
        return {double(min_deg), double(max_deg), mean_deg, var_deg, double(num_gens), double(dim), double(degree)};
    }
};

/// Features of `sample`; dim and degree come from the initial ideal of its
/// reduced Gröbner basis `basis`.
inline FeatureVector compute_features(const IdealSample& sample, const std::vector<Polynomial>& basis) {
    const DegreeStats st = degree_stats(sample);
    FeatureVector fv;
    fv.min_deg = st.min;
    fv.max_deg = st.max;
    fv.mean_deg = st.mean;
    fv.var_deg = st.var;
    fv.num_gens = sample.gens.size();
    std::vector<Exponent> leads;
    for (const auto& g : basis) leads.push_back(g.leading_monomial());
    fv.dim = krull_dimension(leads, sample.model.n);
    if (fv.dim < 0) {
        fv.degree = 0;
    } else {
        fv.degree = variety_degree(hilbert_numerator(leads, sample.model.n), sample.model.n, fv.dim);
    }
    return fv;
}

}  // namespace gbnn
