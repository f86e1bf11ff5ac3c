#pragma once

// Buchberger's algorithm over Q with grevlex, reduced bases, and the two
// complexity labels (basis cardinality, maximum total degree).

#include <cstdint>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "gbnn/algebra.hpp"
#include "gbnn/error.hpp"

namespace gbnn {

enum class PairStrategy { normal };

struct BuchbergerOptions {
    bool use_coprime_criterion = true;
    bool use_chain_criterion = true;
    PairStrategy pair_strategy = PairStrategy::normal;
    /// Upper bound on S-pairs taken from the queue; must be positive when set.
    std::optional<std::uint64_t> max_pairs;
};

struct GroebnerResult {
    std::vector<Polynomial> basis;
    std::size_t cardinality = 0;
    int max_total_degree = 0;
    std::uint64_t pairs_processed = 0;
    std::uint64_t reductions_to_zero = 0;
};

struct GbMetrics {
    std::size_t cardinality = 0;
    int max_total_degree = 0;

    friend bool operator==(const GbMetrics&, const GbMetrics&) = default;
};

namespace detail {

inline std::size_t common_nvars(const std::vector<Polynomial>& polys) {
    if (polys.empty()) return 0;
    const std::size_t n = polys.front().nvars();
    for (const auto& p : polys)
        if (p.nvars() != n) throw DimensionError("polynomials with different variable counts");
    return n;
}

}  // namespace detail

inline Polynomial s_polynomial(const Polynomial& f, const Polynomial& g) {
    if (f.is_zero() || g.is_zero()) throw ArgumentError("s_polynomial of zero polynomial");
    if (f.nvars() != g.nvars()) throw DimensionError("s_polynomial: variable count mismatch");
    const Exponent l = monomial_lcm(f.leading_monomial(), g.leading_monomial());
    Polynomial lhs = add_scaled(Polynomial(f.nvars()), Rational(1) / f.leading_coeff(),
                                monomial_quotient(l, f.leading_monomial()), f);
    return add_scaled(lhs, Rational(-1) / g.leading_coeff(),
                      monomial_quotient(l, g.leading_monomial()), g);
}

/// Full reduction of f modulo G. Among the elements whose leading monomial
/// divides the current term, the one with the grevlex-smallest leading
/// monomial (first occurrence on ties) is used.
inline Polynomial normal_form(const Polynomial& f, const std::vector<Polynomial>& G) {
    for (const auto& g : G) {
        if (g.is_zero()) throw ArgumentError("normal_form: zero divisor");
        if (g.nvars() != f.nvars()) throw DimensionError("normal_form: variable count mismatch");
    }
    Polynomial h = f;
    Polynomial r(f.nvars());
    while (!h.is_zero()) {
        const Term& lt = h.leading_term();
        const Polynomial* reducer = nullptr;
        for (const auto& g : G) {
            if (!monomial_divides(g.leading_monomial(), lt.monomial)) continue;
            if (!reducer || grevlex_compare(g.leading_monomial(), reducer->leading_monomial()) < 0)
                reducer = &g;
        }
        if (reducer) {
            h = add_scaled(h, -lt.coeff / reducer->leading_coeff(),
                           monomial_quotient(lt.monomial, reducer->leading_monomial()), *reducer);
        } else {
            r.push_back_smaller(lt);
            h = h.tail();
        }
    }
    return r;
}

/// Minimalizes, normalizes to monic and tail-reduces a Gröbner basis; output
/// sorted ascending by leading monomial.
inline std::vector<Polynomial> reduce_basis(const std::vector<Polynomial>& G) {
    detail::common_nvars(G);
    std::vector<Polynomial> monic;
    for (const auto& g : G)
        if (!g.is_zero()) monic.push_back(g.monic());
    std::stable_sort(monic.begin(), monic.end(), [](const Polynomial& a, const Polynomial& b) {
        return grevlex_compare(a.leading_monomial(), b.leading_monomial()) < 0;
    });

    // A divisor of a monomial is never grevlex-greater, so ascending order
    // visits every potential divisor first.
    std::vector<Polynomial> minimal;
    for (auto& g : monic) {
        bool redundant = false;
        for (const auto& kept : minimal) {
            if (monomial_divides(kept.leading_monomial(), g.leading_monomial())) {
                redundant = true;
                break;
            }
        }
        if (!redundant) minimal.push_back(std::move(g));
    }

    std::vector<Polynomial> reduced;
    reduced.reserve(minimal.size());
    std::vector<Polynomial> others;
    for (std::size_t i = 0; i < minimal.size(); ++i) {
        others.clear();
        for (std::size_t j = 0; j < minimal.size(); ++j)
            if (j != i) others.push_back(minimal[j]);
        reduced.push_back(normal_form(minimal[i], others));
    }
    return reduced;
}

/// Buchberger's criterion: every S-polynomial reduces to zero.
inline bool verify_groebner(const std::vector<Polynomial>& G) {
    detail::common_nvars(G);
    for (std::size_t i = 0; i < G.size(); ++i)
        for (std::size_t j = i + 1; j < G.size(); ++j)
            if (!normal_form(s_polynomial(G[i], G[j]), G).is_zero()) return false;
    return true;
}

inline GbMetrics gb_metrics(const std::vector<Polynomial>& basis) {
    GbMetrics m;
    m.cardinality = basis.size();
    for (const auto& g : basis) m.max_total_degree = std::max(m.max_total_degree, g.max_degree());
    return m;
}

namespace detail {

struct CriticalPair {
    std::size_t i, j;
    Exponent lcm;
    std::uint64_t created;
};

struct NormalStrategyOrder {
    bool operator()(const CriticalPair& a, const CriticalPair& b) const {
        auto ord = grevlex_compare(a.lcm, b.lcm);
        if (ord != 0) return ord < 0;
        return a.created < b.created;
    }
};

class PairMatrix {
public:
    void grow(std::size_t n) {
        for (auto& row : rows_) row.resize(n, false);
        rows_.resize(n, std::vector<bool>(n, false));
    }
    void set(std::size_t i, std::size_t j, bool v) {
        rows_[i][j] = v;
        rows_[j][i] = v;
    }
    bool get(std::size_t i, std::size_t j) const { return rows_[i][j]; }

private:
    std::vector<std::vector<bool>> rows_;
};

}  // namespace detail

inline GroebnerResult buchberger(const std::vector<Polynomial>& gens, const BuchbergerOptions& opts = {}) {
    if (gens.empty()) throw ArgumentError("buchberger: empty generator set");
    if (opts.max_pairs && *opts.max_pairs == 0) throw ArgumentError("buchberger: max_pairs must be positive");
    const std::size_t n = detail::common_nvars(gens);

    GroebnerResult result;
    std::vector<Polynomial> G;
    std::set<detail::CriticalPair, detail::NormalStrategyOrder> queue;
    detail::PairMatrix pending;
    std::uint64_t created = 0;
    bool unit = false;

    auto insert = [&](Polynomial g) {
        const std::size_t k = G.size();
        G.push_back(g.monic());
        pending.grow(G.size());
        if (G.back().leading_monomial().is_constant()) unit = true;
        for (std::size_t i = 0; i < k; ++i) {
            queue.insert({i, k, monomial_lcm(G[i].leading_monomial(), G[k].leading_monomial()), created++});
            pending.set(i, k, true);
        }
    };

    for (const auto& g : gens) {
        if (g.is_zero()) throw ArgumentError("buchberger: zero generator");
        insert(g);
    }

    while (!queue.empty() && !unit) {
        if (opts.max_pairs && result.pairs_processed >= *opts.max_pairs)
            throw BudgetExceeded(result.pairs_processed, result.reductions_to_zero, G.size());
        detail::CriticalPair pair = *queue.begin();
        queue.erase(queue.begin());
        pending.set(pair.i, pair.j, false);
        ++result.pairs_processed;

        const Exponent& lm_i = G[pair.i].leading_monomial();
        const Exponent& lm_j = G[pair.j].leading_monomial();
        if (opts.use_coprime_criterion && monomials_coprime(lm_i, lm_j)) continue;
        if (opts.use_chain_criterion) {
            bool skip = false;
            for (std::size_t k = 0; k < G.size() && !skip; ++k) {
                if (k == pair.i || k == pair.j) continue;
                if (pending.get(pair.i, k) || pending.get(pair.j, k)) continue;
                skip = monomial_divides(G[k].leading_monomial(), pair.lcm);
            }
            if (skip) continue;
        }

        Polynomial r = normal_form(s_polynomial(G[pair.i], G[pair.j]), G);
        if (r.is_zero()) {
            ++result.reductions_to_zero;
            continue;
        }
        insert(std::move(r));
    }

    if (unit) {
        result.basis = {Polynomial::monomial(Exponent(n))};
    } else {
        result.basis = reduce_basis(G);
    }
    const GbMetrics m = gb_metrics(result.basis);
    result.cardinality = m.cardinality;
    result.max_total_degree = m.max_total_degree;
    return result;
}

}  // namespace gbnn
