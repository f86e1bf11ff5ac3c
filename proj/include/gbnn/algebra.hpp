#pragma once

// Exact multivariate monomials and polynomials over Q under the graded
// reverse lexicographic order. Variable 0 is the greatest variable.

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "gbnn/error.hpp"

namespace gbnn {

inline constexpr std::size_t kMaxVariables = 16;

using Rational = mpq_class;

/// Exponent vector of a monomial. Storage is inline; unused slots stay zero.
class Exponent {
public:
    Exponent() = default;

    explicit Exponent(std::size_t n) : n_(checked_size(n)) {}

    Exponent(std::initializer_list<int> entries) : Exponent(std::span<const int>(entries.begin(), entries.size())) {}

    explicit Exponent(std::span<const int> entries) : n_(checked_size(entries.size())) {
        for (std::size_t i = 0; i < entries.size(); ++i) set(i, entries[i]);
    }

    std::size_t size() const noexcept { return n_; }
    int degree() const noexcept { return degree_; }
    int operator[](std::size_t i) const noexcept { return e_[i]; }

    void set(std::size_t i, int value) {
        if (value < 0) throw ArgumentError("negative exponent");
        degree_ += value - e_[i];
        e_[i] = value;
    }

    std::span<const std::int32_t> entries() const noexcept { return {e_.data(), n_}; }

    bool is_constant() const noexcept { return degree_ == 0; }

    friend bool operator==(const Exponent& a, const Exponent& b) noexcept {
        return a.n_ == b.n_ && a.e_ == b.e_;
    }

private:
    static std::uint8_t checked_size(std::size_t n) {
        if (n > kMaxVariables) throw DimensionError("too many variables: " + std::to_string(n));
        return static_cast<std::uint8_t>(n);
    }

    std::array<std::int32_t, kMaxVariables> e_{};
    std::int32_t degree_ = 0;
    std::uint8_t n_ = 0;
};

inline void require_same_size(const Exponent& a, const Exponent& b) {
    if (a.size() != b.size())
        throw DimensionError("exponent length mismatch: " + std::to_string(a.size()) + " vs " +
                             std::to_string(b.size()));
}

/// Graded reverse lexicographic comparison: higher degree wins; on ties the
/// monomial whose rightmost nonzero entry of (a - b) is negative is greater.
inline std::strong_ordering grevlex_compare(const Exponent& a, const Exponent& b) {
    require_same_size(a, b);
    if (a.degree() != b.degree()) return a.degree() <=> b.degree();
    for (std::size_t i = a.size(); i-- > 0;) {
        if (a[i] != b[i]) return b[i] <=> a[i];
    }
    return std::strong_ordering::equal;
}

struct GrevlexLess {
    bool operator()(const Exponent& a, const Exponent& b) const { return grevlex_compare(a, b) < 0; }
};

struct GrevlexGreater {
    bool operator()(const Exponent& a, const Exponent& b) const { return grevlex_compare(a, b) > 0; }
};

/// True iff `a` divides `b`, i.e. a <= b componentwise.
inline bool monomial_divides(const Exponent& a, const Exponent& b) {
    require_same_size(a, b);
    if (a.degree() > b.degree()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

inline Exponent monomial_lcm(const Exponent& a, const Exponent& b) {
    require_same_size(a, b);
    Exponent out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out.set(i, std::max(a[i], b[i]));
    return out;
}

inline Exponent monomial_gcd(const Exponent& a, const Exponent& b) {
    require_same_size(a, b);
    Exponent out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out.set(i, std::min(a[i], b[i]));
    return out;
}

inline bool monomials_coprime(const Exponent& a, const Exponent& b) {
    require_same_size(a, b);
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0 && b[i] != 0) return false;
    return true;
}

inline Exponent monomial_product(const Exponent& a, const Exponent& b) {
    require_same_size(a, b);
    Exponent out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out.set(i, a[i] + b[i]);
    return out;
}

/// b / a; requires monomial_divides(a, b).
inline Exponent monomial_quotient(const Exponent& b, const Exponent& a) {
    require_same_size(a, b);
    Exponent out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) throw ArgumentError("monomial quotient: divisor does not divide");
        out.set(i, b[i] - a[i]);
    }
    return out;
}

struct Term {
    Rational coeff;
    Exponent monomial;

    friend bool operator==(const Term&, const Term&) = default;
};

/// Sparse polynomial; terms strictly descending under grevlex, no zero coefficients.
class Polynomial {
public:
    Polynomial() = default;

    explicit Polynomial(std::size_t n) : n_(n) {}

    /// Normalizes arbitrary input terms (sort, combine, drop zeros).
    Polynomial(std::vector<Term> raw, std::size_t n) : terms_(std::move(raw)), n_(n) { normalize(); }

    /// c * m
    static Polynomial monomial(const Exponent& m, Rational c = 1) {
        Polynomial p(m.size());
        if (c != 0) p.terms_.push_back({std::move(c), m});
        return p;
    }

    /// lead - trail
    static Polynomial binomial(const Exponent& lead, const Exponent& trail) {
        return Polynomial({{Rational(1), lead}, {Rational(-1), trail}}, lead.size());
    }

    std::size_t nvars() const noexcept { return n_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    std::size_t size() const noexcept { return terms_.size(); }
    const std::vector<Term>& terms() const noexcept { return terms_; }

    const Term& leading_term() const {
        if (terms_.empty()) throw ArgumentError("leading term of zero polynomial");
        return terms_.front();
    }
    const Exponent& leading_monomial() const { return leading_term().monomial; }
    const Rational& leading_coeff() const { return leading_term().coeff; }

    /// Largest total degree among the terms; 0 for the zero polynomial.
    int max_degree() const noexcept {
        int d = 0;
        for (const auto& t : terms_) d = std::max(d, t.monomial.degree());
        return d;
    }

    bool is_homogeneous() const noexcept {
        return std::all_of(terms_.begin(), terms_.end(), [&](const Term& t) {
            return t.monomial.degree() == terms_.front().monomial.degree();
        });
    }

    Polynomial monic() const {
        if (is_zero()) return *this;
        Polynomial out = *this;
        const Rational lc = leading_coeff();
        for (auto& t : out.terms_) t.coeff /= lc;
        return out;
    }

    Polynomial scaled(const Rational& c) const {
        if (c == 0) return Polynomial(n_);
        Polynomial out = *this;
        for (auto& t : out.terms_) t.coeff *= c;
        return out;
    }

    /// Everything but the leading term.
    Polynomial tail() const {
        Polynomial out(n_);
        if (terms_.size() > 1) out.terms_.assign(terms_.begin() + 1, terms_.end());
        return out;
    }

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

    friend Polynomial add_scaled(const Polynomial& f, const Rational& c, const Exponent& m,
                                 const Polynomial& g);

    // Appends a term known to be smaller than every current term.
    void push_back_smaller(Term t) {
        if (t.monomial.size() != n_) throw DimensionError("term dimension mismatch");
        if (!terms_.empty() && grevlex_compare(terms_.back().monomial, t.monomial) <= 0)
            throw ArgumentError("push_back_smaller: term out of order");
        if (t.coeff != 0) terms_.push_back(std::move(t));
    }

private:
    void normalize() {
        for (const auto& t : terms_)
            if (t.monomial.size() != n_) throw DimensionError("term dimension mismatch");
        std::stable_sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) {
            return grevlex_compare(a.monomial, b.monomial) > 0;
        });
        std::vector<Term> merged;
        merged.reserve(terms_.size());
        for (auto& t : terms_) {
            if (!merged.empty() && merged.back().monomial == t.monomial) {
                merged.back().coeff += t.coeff;
            } else {
                if (!merged.empty() && merged.back().coeff == 0) merged.pop_back();
                merged.push_back(std::move(t));
            }
        }
        if (!merged.empty() && merged.back().coeff == 0) merged.pop_back();
        terms_ = std::move(merged);
    }

    std::vector<Term> terms_;
    std::size_t n_ = 0;
};

inline Polynomial poly_normalize(std::vector<Term> raw, std::size_t n) {
    return Polynomial(std::move(raw), n);
}

/// f + c * m * g, computed exactly by a single merge pass.
inline Polynomial add_scaled(const Polynomial& f, const Rational& c, const Exponent& m,
                             const Polynomial& g) {
    if (f.nvars() != g.nvars() || m.size() != f.nvars())
        throw DimensionError("add_scaled: variable count mismatch");
    if (c == 0 || g.is_zero()) return f;

    Polynomial out(f.nvars());
    out.terms_.reserve(f.size() + g.size());
    auto fi = f.terms_.begin();
    auto gi = g.terms_.begin();
    while (fi != f.terms_.end() || gi != g.terms_.end()) {
        if (gi == g.terms_.end()) {
            out.terms_.push_back(*fi++);
            continue;
        }
        Exponent gm = monomial_product(gi->monomial, m);
        if (fi == f.terms_.end()) {
            out.terms_.push_back({c * gi->coeff, std::move(gm)});
            ++gi;
            continue;
        }
        auto ord = grevlex_compare(fi->monomial, gm);
        if (ord > 0) {
            out.terms_.push_back(*fi++);
        } else if (ord < 0) {
            out.terms_.push_back({c * gi->coeff, std::move(gm)});
            ++gi;
        } else {
            Rational sum = fi->coeff + c * gi->coeff;
            if (sum != 0) out.terms_.push_back({std::move(sum), std::move(gm)});
            ++fi;
            ++gi;
        }
    }
    return out;
}

inline Polynomial operator+(const Polynomial& f, const Polynomial& g) {
    return add_scaled(f, Rational(1), Exponent(f.nvars()), g);
}

inline Polynomial operator-(const Polynomial& f, const Polynomial& g) {
    return add_scaled(f, Rational(-1), Exponent(f.nvars()), g);
}

/// lead - trail with unit coefficients; lead is grevlex-greater than trail.
struct Binomial {
    Exponent lead;
    Exponent trail;

    Binomial() = default;

    Binomial(Exponent lead_, Exponent trail_) : lead(std::move(lead_)), trail(std::move(trail_)) {
        if (grevlex_compare(lead, trail) <= 0) throw ArgumentError("binomial lead must exceed trail");
    }

    /// Orders the two distinct monomials lead-first.
    static Binomial from_pair(const Exponent& a, const Exponent& b) {
        return grevlex_compare(a, b) > 0 ? Binomial(a, b) : Binomial(b, a);
    }

    std::size_t nvars() const noexcept { return lead.size(); }
    int degree() const noexcept { return lead.degree(); }
    Polynomial to_polynomial() const { return Polynomial::binomial(lead, trail); }

    friend bool operator==(const Binomial&, const Binomial&) = default;
};

/// Default variable names: x,y,z prefixes for n<=3; v,w,x,y,z for n in {4,5}; x1..xn otherwise.
inline std::vector<std::string> default_variable_names(std::size_t n) {
    static const char* five[] = {"v", "w", "x", "y", "z"};
    std::vector<std::string> names;
    if (n <= 3) {
        for (std::size_t i = 0; i < n; ++i) names.emplace_back(five[2 + i]);
    } else if (n <= 5) {
        for (std::size_t i = 0; i < n; ++i) names.emplace_back(five[5 - n + i]);
    } else {
        for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i + 1));
    }
    return names;
}

/// Caret-style factor string, e.g. `v^2*x^2*y*z^2`; the constant monomial prints as `1`.
inline std::string to_string(const Exponent& m, const std::vector<std::string>& names) {
    if (names.size() < m.size()) throw DimensionError("not enough variable names");
    std::string out;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0) continue;
        if (!out.empty()) out += '*';
        out += names[i];
        if (m[i] > 1) out += '^' + std::to_string(m[i]);
    }
    return out.empty() ? "1" : out;
}

inline std::string to_string(const Exponent& m) { return to_string(m, default_variable_names(m.size())); }

inline std::string to_string(const Polynomial& f, const std::vector<std::string>& names) {
    if (f.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& t : f.terms()) {
        Rational mag = abs(t.coeff);
        const bool negative = sgn(t.coeff) < 0;
        if (first) {
            if (negative) out += '-';
        } else {
            out += negative ? " - " : " + ";
        }
        first = false;
        const bool unit = mag == 1;
        if (!unit) out += mag.get_str();
        if (t.monomial.is_constant()) {
            if (unit) out += '1';
        } else {
            if (!unit) out += '*';
            out += to_string(t.monomial, names);
        }
    }
    return out;
}

inline std::string to_string(const Polynomial& f) { return to_string(f, default_variable_names(f.nvars())); }

}  // namespace gbnn
