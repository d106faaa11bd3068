#include <catch2/catch_amalgamated.hpp>

#include "micromorph/random.hpp"
#include "micromorph/series.hpp"

#include <map>
#include <vector>

using namespace micromorph;

namespace {

VarSetPtr px_vars() {
    return make_varset(concat(momentum_vars(1), position_vars(1)));
}

FormalSeries mono(const VarSetPtr& vs, int trunc, std::vector<std::uint16_t> e, Scalar c) {
    MultiIndex m(vs->size());
    for (std::size_t j = 0; j < e.size(); ++j)
        m.e[j] = e[j];
    return FormalSeries::monomial(vs, trunc, m, c);
}

// independent dense convolution for two univariate polynomials
std::vector<Scalar> dense_mul(const std::vector<Scalar>& a, const std::vector<Scalar>& b,
                              std::size_t cap) {
    std::vector<Scalar> r(cap + 1, Scalar(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            if (i + j <= cap)
                r[i + j] += a[i] * b[j];
    return r;
}

}  // namespace

TEST_CASE("add: inverses, disjoint supports, boundary degree") {
    auto vs = make_varset(position_vars(1));
    auto x = FormalSeries::var(vs, 4, "x1");
    CHECK((x + (-x)).is_zero());

    auto one = FormalSeries::constant(vs, 4, Scalar(1));
    auto s = (one + x) + x * x;
    CHECK(s.coeff(MultiIndex(1)) == Scalar(1));
    CHECK(s.terms().size() == 3);

    // a term exactly at the cap is kept
    auto top = mono(vs, 4, {4}, Scalar(7));
    auto kept = top + FormalSeries::zero(vs, 4);
    CHECK(kept == top);
}

TEST_CASE("mul: difference of squares, truncation, convolution oracle") {
    auto vs = make_varset(position_vars(1));
    auto x = FormalSeries::var(vs, 6, "x1");
    auto one = FormalSeries::constant(vs, 6, Scalar(1));
    auto d = (one + x) * (one - x);
    CHECK(d == one - x * x);

    auto xa = mono(vs, 4, {3}, Scalar(1));
    auto xb = mono(vs, 4, {2}, Scalar(1));
    CHECK((xa * xb).is_zero());
    CHECK((xa * xb).reliable() == 4);  // drop recorded

    // (1+x+x^2)(1+x) at N=2 vs independent convolution
    auto vs2 = make_varset(position_vars(1));
    auto p = FormalSeries::constant(vs2, 2, Scalar(1)) + FormalSeries::var(vs2, 2, "x1") +
             mono(vs2, 2, {2}, Scalar(1));
    auto q = FormalSeries::constant(vs2, 2, Scalar(1)) + FormalSeries::var(vs2, 2, "x1");
    auto prod = p * q;
    auto oracle = dense_mul({Scalar(1), Scalar(1), Scalar(1)}, {Scalar(1), Scalar(1)}, 2);
    for (std::size_t k = 0; k <= 2; ++k) {
        MultiIndex m(1);
        m.e[0] = static_cast<std::uint16_t>(k);
        CHECK(prod.coeff(m) == oracle[k]);
    }
    CHECK(prod.coeff(MultiIndex(1)) == Scalar(1));
}

TEST_CASE("derive basics") {
    auto vs = px_vars();
    auto p = FormalSeries::var(vs, 5, "p1");
    auto x = FormalSeries::var(vs, 5, "x1");
    CHECK((x * p).derive("x1") == p);
    CHECK(FormalSeries::constant(vs, 5, Scalar(3)).derive("x1").is_zero());
    auto s = p * p * x + p * x * x;
    CHECK(s.derive("p1") == Scalar(2) * p * x + x * x);
    CHECK_THROWS(s.derive("nope"));
}

TEST_CASE("substitute: examples and hand oracle") {
    auto vs = px_vars();
    auto one = FormalSeries::constant(vs, 4, Scalar(1));
    auto p = FormalSeries::var(vs, 4, "p1");
    auto x = FormalSeries::var(vs, 4, "x1");
    auto s = one + x + x * p;
    auto r = substitute(s, {{"x1", FormalSeries::zero(vs, 4)}}, vs, 4);
    CHECK(r == one);

    // y -> x + x^2 in y^2 at N=3 gives x^2 + 2x^3 (hand expansion)
    auto vy = make_varset(position_vars(1, "y"));
    auto vx = make_varset(position_vars(1));
    auto y2 = FormalSeries::var(vy, 3, "y1") * FormalSeries::var(vy, 3, "y1");
    auto xx = FormalSeries::var(vx, 3, "x1");
    auto img = substitute(y2, {{"y1", xx + xx * xx}}, vx, 3);
    auto expect = xx * xx + Scalar(2) * xx.pow(3);
    CHECK(img == expect);

    // identity substitution
    CHECK(substitute(s, {{"x1", x}}, vs, 4) == s);
}

TEST_CASE("exp_zero") {
    auto vs = make_varset(position_vars(2));
    CHECK(exp_zero(FormalSeries::zero(vs, 3)) ==
          FormalSeries::constant(vs, 3, Scalar(1)));

    auto x = FormalSeries::var(vs, 3, "x1");
    auto e = exp_zero(x);
    MultiIndex m2(2), m3(2);
    m2.e[0] = 2;
    m3.e[0] = 3;
    CHECK(e.coeff(m2) == Scalar::of(1, 2));
    CHECK(e.coeff(m3) == Scalar::of(1, 6));

    auto y = FormalSeries::var(vs, 5, "x2");
    auto x5 = FormalSeries::var(vs, 5, "x1");
    auto prod = exp_zero(x5 + y) * exp_zero(Scalar(-1) * (x5 + y));
    CHECK(prod == FormalSeries::constant(vs, 5, Scalar(1)));

    CHECK_THROWS(exp_zero(FormalSeries::constant(vs, 3, Scalar(1))));
}

TEST_CASE("solve_implicit: Catalan, linear, residual") {
    // u = q + u^2  =>  u(q) = q + q^2 + 2q^3 + 5q^4 + 14q^5
    auto vq = make_varset(position_vars(1, "q"));
    auto vall = make_varset(concat(position_vars(1, "q"), position_vars(1, "u")));
    int N = 5;
    auto u = FormalSeries::var(vall, N, "u1");
    auto q = FormalSeries::var(vall, N, "q1");
    auto eq = u - q - u * u;
    auto sol = solve_implicit({eq}, {"u1"}, {{Scalar(1)}}, vq, N);
    const auto& uq = sol.at("u1");

    // independent fixpoint-iteration oracle: iterate u <- q + u^2
    auto fix = FormalSeries::zero(vq, N);
    auto qq = FormalSeries::var(vq, N, "q1");
    for (int it = 0; it < N + 1; ++it)
        fix = qq + fix * fix;
    CHECK(uq == fix);
    long catalan[] = {0, 1, 1, 2, 5, 14};
    for (int k = 1; k <= N; ++k) {
        MultiIndex m(1);
        m.e[0] = static_cast<std::uint16_t>(k);
        CHECK(uq.coeff(m) == Scalar(catalan[k]));
    }

    // trivially linear system
    auto eq2 = u - q;
    auto sol2 = solve_implicit({eq2}, {"u1"}, {{Scalar(1)}}, vq, N);
    CHECK(sol2.at("u1") == qq);

    // plugging back in gives zero residual exactly
    auto res = substitute(eq, {{"u1", uq}}, vq, N);
    CHECK(res.is_zero());

    // singular linear part
    CHECK_THROWS(solve_implicit({eq}, {"u1"}, {{Scalar(0)}}, vq, N));
}

TEST_CASE("ring axioms and Leibniz on random inputs") {
    SplitMix64 rng(20260810);
    auto vs = make_varset(concat(momentum_vars(2), position_vars(2)));
    const int N = 6;
    for (int trial = 0; trial < 30; ++trial) {
        auto a = random_series(rng, vs, N, 0, 4, 5, true);
        auto b = random_series(rng, vs, N, 0, 4, 5, true);
        auto c = random_series(rng, vs, N, 0, 4, 5, true);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * b == b * a);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);

        // derivatives commute
        CHECK(a.derive("p1").derive("x2") == a.derive("x2").derive("p1"));

        // Leibniz up to degree N-1
        auto lhs = (a * b).derive("x1").truncated(N - 1);
        auto rhs = (a.derive("x1") * b + a * b.derive("x1")).truncated(N - 1);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("substitute is functorial for zero-constant assignments") {
    SplitMix64 rng(777);
    auto vs = make_varset(position_vars(2));
    const int N = 5;
    for (int trial = 0; trial < 10; ++trial) {
        auto s = random_series(rng, vs, N, 0, 3, 4);
        auto g1 = random_series(rng, vs, N, 1, 3, 3);
        auto g2 = random_series(rng, vs, N, 1, 3, 3);
        std::map<std::string, FormalSeries> sigma = {{"x1", g1}, {"x2", g2}};
        auto h1 = random_series(rng, vs, N, 1, 3, 3);
        auto h2 = random_series(rng, vs, N, 1, 3, 3);
        std::map<std::string, FormalSeries> tau = {{"x1", h1}, {"x2", h2}};

        auto lhs = substitute(substitute(s, sigma, vs, N), tau, vs, N);
        std::map<std::string, FormalSeries> comp = {{"x1", substitute(g1, tau, vs, N)},
                                                    {"x2", substitute(g2, tau, vs, N)}};
        auto rhs = substitute(s, comp, vs, N);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("hbar series arithmetic") {
    auto vs = px_vars();
    HbarSeries a(vs, 4, 2), b(vs, 4, 2);
    a.coeff(0) = FormalSeries::var(vs, 4, "x1");
    a.coeff(1) = FormalSeries::var(vs, 4, "p1");
    b.coeff(0) = FormalSeries::constant(vs, 4, Scalar(1));
    b.coeff(2) = FormalSeries::var(vs, 4, "x1");

    auto s = a + b;
    CHECK(s.coeff(1) == FormalSeries::var(vs, 4, "p1"));
    auto m = a * b;
    CHECK(m.coeff(0) == FormalSeries::var(vs, 4, "x1"));
    // hbar^2 coefficient: a0*b2 + a1*b1 + a2*b0 = x1*x1
    CHECK(m.coeff(2) == FormalSeries::var(vs, 4, "x1") * FormalSeries::var(vs, 4, "x1"));
    CHECK(a.shifted(1).coeff(1) == a.coeff(0));
}
