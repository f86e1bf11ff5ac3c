#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "gbnn/features.hpp"
#include "gbnn/groebner.hpp"
#include "test_support.hpp"

using namespace gbnn;

namespace {

IdealSample sample_from(const std::vector<int>& flat, std::size_t n, std::size_t s) { return decode_flat(flat, n, s); }

std::vector<Exponent> random_monomials(SplitMix64& rng, std::size_t n, std::size_t count, int max_degree) {
    std::vector<Exponent> out;
    while (out.size() < count) {
        Exponent e(n);
        const int deg = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_degree)));
        for (int k = 0; k < deg; ++k) {
            const std::size_t v = rng.below(n);
            e.set(v, e[v] + 1);
        }
        out.push_back(e);
    }
    return out;
}

// Number of degree-k monomials outside the ideal, by enumeration.
std::int64_t standard_count(const std::vector<Exponent>& gens, std::size_t n, int k) {
    std::int64_t count = 0;
    Exponent e(n);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
        if (i + 1 == n) {
            e.set(i, left);
            bool in = false;
            for (const auto& g : gens) in = in || monomial_divides(g, e);
            count += !in;
            return;
        }
        for (int a = 0; a <= left; ++a) {
            e.set(i, a);
            rec(i + 1, left - a);
        }
    };
    rec(0, k);
    return count;
}

// Hilbert function from N(t)/(1-t)^n as a power series up to degree K.
std::vector<std::int64_t> series(const HilbertNumerator& num, std::size_t n, int K) {
    std::vector<std::int64_t> a(static_cast<std::size_t>(K) + 1, 0);
    for (std::size_t i = 0; i < num.coeffs.size() && i <= static_cast<std::size_t>(K); ++i) a[i] = num.coeffs[i];
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t i = 1; i < a.size(); ++i) a[i] += a[i - 1];
    return a;
}

// Largest variable subset containing no generator support.
int brute_force_dimension(const std::vector<Exponent>& gens, std::size_t n) {
    int best = -1;
    for (std::uint32_t S = 0; S < (1u << n); ++S) {
        bool independent = true;
        for (const auto& g : gens) {
            bool inside = true;
            for (std::size_t i = 0; i < n; ++i)
                if (g[i] > 0 && !(S & (1u << i))) inside = false;
            if (inside) independent = false;
        }
        if (independent) best = std::max(best, std::popcount(S));
    }
    return best;
}

}  // namespace

TEST(Canonicalize, SortsDescendingAndIsIdempotent) {
    const IdealSample s = sample_from({0, 1, 1, 0, 0, 2, 2, 0, 0, 1, 1, 0, 1, 1, 0, 0, 2, 0}, 3, 3);
    const IdealSample c = canonicalize(s);
    ASSERT_EQ(c.gens.size(), 3u);
    EXPECT_EQ(c.gens[0].lead, (Exponent{2, 0, 0}));
    EXPECT_EQ(c.gens[1].lead, (Exponent{1, 1, 0}));
    EXPECT_EQ(c.gens[2].lead, (Exponent{0, 1, 1}));
    EXPECT_EQ(canonicalize(c), c);
}

TEST(Encode, WorkedExampleAsGiven) {
    std::vector<int> flat;
    for (const auto& r : tu::kWorkedExampleRows) flat.insert(flat.end(), r.begin(), r.end());
    const IdealSample s = sample_from(flat, 5, 5);
    EXPECT_EQ(encode_flat(s, false).values, flat);
    EXPECT_EQ(s.model.d, 15);
    EXPECT_EQ(s.model.mode, DegreeMode::up_to_degree);
}

TEST(Decode, Errors) {
    RandomModel m;
    m.n = 2;
    m.s = 1;
    EXPECT_THROW(decode_flat(std::vector<int>{1, 0, 0}, m), DimensionError);
    EXPECT_THROW(decode_flat(std::vector<int>{0, 1, 1, 0}, m), MalformedEncoding);
    EXPECT_THROW(decode_flat(std::vector<int>{1, 0, 1, 0}, m), MalformedEncoding);
    EXPECT_THROW(decode_flat(std::vector<int>{-1, 2, 0, 1}, m), MalformedEncoding);
    EXPECT_NO_THROW(decode_flat(std::vector<int>{1, 0, 0, 1}, m));
}

TEST(Encode, RoundTrip) {
    for (auto mode : {DegreeMode::exact_degree, DegreeMode::up_to_degree}) {
        RandomModel m;
        m.n = 3;
        m.d = 7;
        m.s = 5;
        m.mode = mode;
        m.seed = 77;
        for (std::uint64_t i = 0; i < 5000; ++i) {
            const IdealSample s = sample_ideal(m, i);
            const FlatEncoding e = encode_flat(s, false);
            ASSERT_EQ(e.values.size(), 30u);
            EXPECT_EQ(decode_flat(e.values, m, i), s);
            EXPECT_EQ(decode_flat(encode_flat(s, true).values, m, i), canonicalize(s));
        }
    }
}

TEST(Distance, TableIdeals) {
    const FlatEncoding I{tu::kTableVectorI}, J{tu::kTableVectorJ}, K{tu::kTableVectorK};
    EXPECT_NEAR(euclidean_distance(I, K), 10.770329614269007, 1e-12);
    EXPECT_NEAR(euclidean_distance(J, K), 13.638181696985855, 1e-12);
    EXPECT_NEAR(euclidean_distance(I, J), 14.422205101855956, 1e-12);
    EXPECT_EQ(euclidean_distance(I, I), 0.0);
    EXPECT_EQ(euclidean_distance(I, J), euclidean_distance(J, I));
    EXPECT_THROW(euclidean_distance(std::vector<int>{1}, std::vector<int>{1, 2}), DimensionError);
}

TEST(DegreeStats, Example) {
    const IdealSample s = sample_from({3, 0, 0, 0, 1, 2, 7, 0, 0, 0, 0, 1, 5, 0, 0, 0, 0, 1}, 3, 3);
    const DegreeStats st = degree_stats(s);
    EXPECT_EQ(st.min, 3);
    EXPECT_EQ(st.max, 7);
    EXPECT_DOUBLE_EQ(st.mean, 5.0);
    EXPECT_DOUBLE_EQ(st.var, 8.0 / 3.0);
}

TEST(KrullDimension, Examples) {
    EXPECT_EQ(krull_dimension({Exponent{2, 0, 0}, Exponent{1, 1, 0}, Exponent{0, 2, 0}}, 3), 1);
    EXPECT_EQ(krull_dimension({Exponent{1, 0, 0}}, 3), 2);
    EXPECT_EQ(krull_dimension({}, 3), 3);
    EXPECT_EQ(krull_dimension({Exponent{0, 0, 0}}, 3), -1);
    EXPECT_EQ(krull_dimension({Exponent{1, 0, 0}, Exponent{0, 3, 0}, Exponent{0, 0, 2}}, 3), 0);
    EXPECT_EQ(krull_dimension({Exponent{1, 1, 1}}, 3), 2);
    EXPECT_THROW(krull_dimension({Exponent{1, 0}}, 3), DimensionError);
}

TEST(KrullDimension, MatchesBruteForce) {
    SplitMix64 rng(13);
    for (int trial = 0; trial < 400; ++trial) {
        const std::size_t n = 1 + rng.below(8);
        const auto gens = random_monomials(rng, n, 1 + rng.below(6), 4);
        EXPECT_EQ(krull_dimension(gens, n), brute_force_dimension(gens, n));
    }
}

TEST(Hilbert, Examples) {
    const auto h = hilbert_numerator({Exponent{2, 0, 0}, Exponent{1, 1, 0}, Exponent{0, 2, 0}}, 3);
    EXPECT_EQ(h.coeffs, (std::vector<std::int64_t>{1, 0, -3, 2}));
    EXPECT_EQ(hilbert_numerator({}, 2).coeffs, (std::vector<std::int64_t>{1}));
    EXPECT_EQ(hilbert_numerator({Exponent{0, 3}}, 2).coeffs, (std::vector<std::int64_t>{1, 0, 0, -1}));
    EXPECT_EQ(hilbert_numerator({Exponent{1, 0}, Exponent{0, 1}}, 2).coeffs, (std::vector<std::int64_t>{1, -2, 1}));
    EXPECT_EQ(h(1), 0);
}

TEST(Hilbert, MatchesEnumeratedHilbertFunction) {
    SplitMix64 rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng.below(4);
        const auto gens = random_monomials(rng, n, 1 + rng.below(5), 6);
        const auto num = hilbert_numerator(gens, n);
        const auto hf = series(num, n, 10);
        for (int k = 0; k <= 10; ++k) ASSERT_EQ(hf[static_cast<std::size_t>(k)], standard_count(gens, n, k)) << k;
    }
}

TEST(Hilbert, PivotRuleDoesNotMatter) {
    SplitMix64 rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 2 + rng.below(5);
        const auto gens = random_monomials(rng, n, 1 + rng.below(7), 7);
        EXPECT_EQ(hilbert_numerator(gens, n, PivotRule::most_frequent),
                  hilbert_numerator(gens, n, PivotRule::first_variable_linear));
    }
}

TEST(VarietyDegree, Examples) {
    const auto fat_point_line = hilbert_numerator({Exponent{2, 0, 0}, Exponent{1, 1, 0}, Exponent{0, 2, 0}}, 3);
    EXPECT_EQ(variety_degree(fat_point_line, 3, 1), 3);
    EXPECT_EQ(variety_degree(hilbert_numerator({Exponent{1, 0, 0}}, 3), 3, 2), 1);
    EXPECT_EQ(variety_degree(hilbert_numerator({Exponent{2, 0}}, 2), 2, 1), 2);
    EXPECT_EQ(variety_degree(hilbert_numerator({Exponent{1, 0}, Exponent{0, 1}}, 2), 2, 0), 1);
    EXPECT_EQ(variety_degree(hilbert_numerator({}, 3), 3, 3), 1);
    EXPECT_THROW(variety_degree(fat_point_line, 3, 2), InconsistencyError);
    EXPECT_THROW(variety_degree(fat_point_line, 3, 4), ArgumentError);
}

TEST(VarietyDegree, MatchesLeadingCoefficientOfHilbertFunction) {
    SplitMix64 rng(34);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng.below(4);
        const auto gens = random_monomials(rng, n, 1 + rng.below(5), 6);
        const int dim = krull_dimension(gens, n);
        const std::int64_t deg = variety_degree(hilbert_numerator(gens, n), n, dim);
        if (dim == 0) {
            std::int64_t total = 0;
            for (int k = 0; k <= 30; ++k) total += standard_count(gens, n, k);
            EXPECT_EQ(deg, total);
        } else {
            // (dim-1)-th difference of the Hilbert function is eventually the degree.
            auto hf = series(hilbert_numerator(gens, n), n, 40);
            for (int r = 0; r < dim - 1; ++r)
                for (std::size_t i = hf.size(); i-- > 1;) hf[i] -= hf[i - 1];
            EXPECT_EQ(hf.back(), deg);
        }
    }
}

TEST(Features, WorkedExample) {
    std::vector<int> flat;
    for (const auto& r : tu::kWorkedExampleRows) flat.insert(flat.end(), r.begin(), r.end());
    const IdealSample s = sample_from(flat, 5, 5);
    const auto fv = compute_features(s, buchberger(s.polynomials()).basis);
    // lead degrees 15, 15, 14, 11, 11
    EXPECT_EQ(fv.min_deg, 11);
    EXPECT_EQ(fv.max_deg, 15);
    EXPECT_DOUBLE_EQ(fv.mean_deg, 13.2);
    EXPECT_NEAR(fv.var_deg, 3.36, 1e-12);
    EXPECT_EQ(fv.num_gens, 5u);
    EXPECT_GE(fv.dim, 0);
    EXPECT_GT(fv.degree, 0);
    EXPECT_EQ(fv.as_row().size(), 7u);
}

TEST(Features, UnitIdeal) {
    const IdealSample s = sample_from({1, 0, 0, 1}, 2, 1);
    const auto fv = compute_features(s, {Polynomial::monomial(Exponent(2))});
    EXPECT_EQ(fv.dim, -1);
    EXPECT_EQ(fv.degree, 0);
}

TEST(Features, BinomialIdealsHaveConsistentDimensionAndDegree) {
    RandomModel m;
    m.n = 3;
    m.d = 5;
    m.s = 3;
    m.seed = 3;
    for (std::uint64_t i = 0; i < 200; ++i) {
        const IdealSample s = sample_ideal(m, i);
        const auto fv = compute_features(s, buchberger(s.polynomials()).basis);
        // s homogeneous generators in 3 variables cut out something of dimension >= 3 - s.
        EXPECT_GE(fv.dim, 1);
        EXPECT_LE(fv.dim, 2);
        EXPECT_GE(fv.degree, 1);
    }
}
