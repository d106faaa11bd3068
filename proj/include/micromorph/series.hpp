#pragma once

// Truncated multivariate formal power series over exact Gaussian rationals,
// and formal power series in hbar on top of them. The coefficient carrier
// for the whole calculus.
//
// A FormalSeries is a jet: a finite term map over one VarSet with a
// total-degree cap. Besides the cap it carries an "effective reliable
// degree": the strata up to that degree agree with the true underlying
// function. Exact polynomials (nothing ever dropped) report EXACT_DEGREE;
// a derivative of a non-exact jet loses one degree; binary operations take
// the minimum. This keeps top-degree strata from being silently wrong.

#include "micromorph/linalg.hpp"
#include "micromorph/scalar.hpp"
#include "micromorph/varset.hpp"

#include <complex>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace micromorph {

inline constexpr int EXACT_DEGREE = 1 << 20;

class FormalSeries {
  public:
    FormalSeries() = default;
    FormalSeries(VarSetPtr vars, int trunc) : vars_(std::move(vars)), trunc_(trunc) {}

    static FormalSeries zero(VarSetPtr vars, int trunc) { return {std::move(vars), trunc}; }
    static FormalSeries constant(VarSetPtr vars, int trunc, const Scalar& c) {
        FormalSeries s(std::move(vars), trunc);
        s.set(MultiIndex(s.vars_->size()), c);
        return s;
    }
    static FormalSeries monomial(VarSetPtr vars, int trunc, const MultiIndex& m, const Scalar& c) {
        FormalSeries s(std::move(vars), trunc);
        s.set(m, c);
        return s;
    }
    static FormalSeries var(VarSetPtr vars, int trunc, const std::string& name) {
        FormalSeries s(vars, trunc);
        MultiIndex m(vars->size());
        m.e[vars->index_of(name)] = 1;
        s.set(m, Scalar(1));
        return s;
    }

    const VarSetPtr& vars() const { return vars_; }
    int truncation() const { return trunc_; }
    int reliable() const { return reliable_; }
    void set_reliable(int r) { reliable_ = std::min(r, EXACT_DEGREE); }
    const std::map<MultiIndex, Scalar>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    unsigned degree() const {
        unsigned d = 0;
        for (const auto& [m, c] : terms_)
            d = std::max(d, m.total());
        return d;
    }
    // lowest total degree of a nonzero term; nullopt for the zero series
    std::optional<unsigned> lowest_degree() const {
        std::optional<unsigned> d;
        for (const auto& [m, c] : terms_)
            d = d ? std::min(*d, m.total()) : m.total();
        return d;
    }

    Scalar coeff(const MultiIndex& m) const {
        auto it = terms_.find(m);
        return it == terms_.end() ? Scalar(0) : it->second;
    }
    Scalar constant_term() const { return coeff(MultiIndex(vars_->size())); }

    // Inserting a term above the cap records that true information was
    // dropped; the jet's reliable degree is then capped at the truncation.
    void set(const MultiIndex& m, const Scalar& c) {
        if (static_cast<int>(m.total()) > trunc_) {
            if (!c.is_zero())
                note_drop();
            return;
        }
        if (c.is_zero())
            terms_.erase(m);
        else
            terms_[m] = c;
    }
    void add_term(const MultiIndex& m, const Scalar& c) {
        if (static_cast<int>(m.total()) > trunc_) {
            if (!c.is_zero())
                note_drop();
            return;
        }
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            if (!c.is_zero())
                terms_.emplace(m, c);
        } else {
            it->second += c;
            if (it->second.is_zero())
                terms_.erase(it);
        }
    }

    FormalSeries truncated(int new_trunc) const {
        FormalSeries r(vars_, new_trunc);
        bool dropped = false;
        for (const auto& [m, c] : terms_) {
            if (static_cast<int>(m.total()) > new_trunc)
                dropped = true;
            else
                r.terms_[m] = c;
        }
        r.reliable_ = reliable_;
        if (dropped)
            r.reliable_ = std::min(r.reliable_, new_trunc);
        return r;
    }

    friend bool operator==(const FormalSeries& a, const FormalSeries& b) {
        return *a.vars_ == *b.vars_ && a.trunc_ == b.trunc_ && a.terms_ == b.terms_;
    }
    friend bool operator!=(const FormalSeries& a, const FormalSeries& b) { return !(a == b); }

    friend FormalSeries operator-(const FormalSeries& s) {
        FormalSeries r = s;
        for (auto& [m, c] : r.terms_)
            c = -c;
        return r;
    }

    friend FormalSeries operator+(const FormalSeries& a, const FormalSeries& b) {
        check_same_vars(a, b);
        FormalSeries r(a.vars_, std::min(a.trunc_, b.trunc_));
        r.reliable_ = std::min(a.reliable_, b.reliable_);
        for (const auto& [m, c] : a.terms_)
            r.add_term(m, c);
        for (const auto& [m, c] : b.terms_)
            r.add_term(m, c);
        return r;
    }
    friend FormalSeries operator-(const FormalSeries& a, const FormalSeries& b) {
        return a + (-b);
    }

    friend FormalSeries operator*(const FormalSeries& a, const FormalSeries& b) {
        check_same_vars(a, b);
        FormalSeries r(a.vars_, std::min(a.trunc_, b.trunc_));
        r.reliable_ = std::min(a.reliable_, b.reliable_);
        for (const auto& [ma, ca] : a.terms_) {
            unsigned da = ma.total();
            for (const auto& [mb, cb] : b.terms_) {
                if (static_cast<int>(da + mb.total()) > r.trunc_) {
                    r.note_drop();
                    continue;
                }
                r.add_term(ma + mb, ca * cb);
            }
        }
        return r;
    }
    friend FormalSeries operator*(const Scalar& c, const FormalSeries& s) {
        FormalSeries r(s.vars_, s.trunc_);
        r.reliable_ = s.reliable_;
        if (!c.is_zero())
            for (const auto& [m, x] : s.terms_)
                r.terms_[m] = c * x;
        return r;
    }

    FormalSeries pow(unsigned e) const {
        FormalSeries acc = constant(vars_, trunc_, Scalar(1));
        FormalSeries base = *this;
        while (e) {
            if (e & 1u)
                acc = acc * base;
            base = e > 1 ? base * base : base;
            e >>= 1u;
        }
        return acc;
    }

    FormalSeries derive(const std::string& name) const {
        std::size_t j = vars_->index_of(name);
        FormalSeries r(vars_, trunc_);
        r.reliable_ = reliable_ == EXACT_DEGREE ? EXACT_DEGREE : reliable_ - 1;
        for (const auto& [m, c] : terms_) {
            if (m.e[j] == 0)
                continue;
            MultiIndex d = m;
            d.e[j] -= 1;
            r.add_term(d, Scalar(long(m.e[j])) * c);
        }
        return r;
    }

    // Re-express over a variable set that contains every variable of this
    // series (by name); roles may differ.
    FormalSeries embedded(const VarSetPtr& target, int trunc) const {
        std::vector<std::size_t> map_idx(vars_->size());
        for (std::size_t j = 0; j < vars_->size(); ++j)
            map_idx[j] = target->index_of(vars_->at(j).name);
        FormalSeries r(target, trunc);
        r.reliable_ = reliable_;
        for (const auto& [m, c] : terms_) {
            MultiIndex t(target->size());
            for (std::size_t j = 0; j < vars_->size(); ++j)
                t.e[map_idx[j]] = m.e[j];
            r.add_term(t, c);
        }
        return r;
    }

    // Restrict to a smaller variable set; throws if a dropped variable
    // occurs with nonzero exponent.
    FormalSeries projected(const VarSetPtr& target, int trunc) const {
        std::vector<long> map_idx(vars_->size(), -1);
        for (std::size_t j = 0; j < vars_->size(); ++j)
            if (target->contains(vars_->at(j).name))
                map_idx[j] = static_cast<long>(target->index_of(vars_->at(j).name));
        FormalSeries r(target, trunc);
        r.reliable_ = reliable_;
        for (const auto& [m, c] : terms_) {
            MultiIndex t(target->size());
            for (std::size_t j = 0; j < vars_->size(); ++j) {
                if (m.e[j] == 0)
                    continue;
                if (map_idx[j] < 0)
                    throw std::invalid_argument("projected: series depends on dropped variable " +
                                                vars_->at(j).name);
                t.e[static_cast<std::size_t>(map_idx[j])] = m.e[j];
            }
            r.add_term(t, c);
        }
        return r;
    }

    std::complex<double> eval(const std::map<std::string, std::complex<double>>& point) const {
        std::vector<std::complex<double>> v(vars_->size());
        for (std::size_t j = 0; j < vars_->size(); ++j) {
            auto it = point.find(vars_->at(j).name);
            if (it == point.end())
                throw std::invalid_argument("eval: missing value for " + vars_->at(j).name);
            v[j] = it->second;
        }
        std::complex<double> acc = 0.0;
        for (const auto& [m, c] : terms_) {
            std::complex<double> t = c.to_complex();
            for (std::size_t j = 0; j < vars_->size(); ++j)
                for (unsigned e = 0; e < m.e[j]; ++e)
                    t *= v[j];
            acc += t;
        }
        return acc;
    }

  private:
    static void check_same_vars(const FormalSeries& a, const FormalSeries& b) {
        if (!(*a.vars_ == *b.vars_))
            throw std::invalid_argument("FormalSeries: variable-set mismatch");
    }
    void note_drop() { reliable_ = std::min(reliable_, trunc_); }

    VarSetPtr vars_;
    int trunc_{0};
    int reliable_{EXACT_DEGREE};
    std::map<MultiIndex, Scalar> terms_;
};

// Formal composition s(v -> assignment(v)). Unassigned variables must exist
// in the target set and map to themselves. All series here are polynomial
// jets, so the substitution always terminates within the truncation.
inline FormalSeries substitute(const FormalSeries& s,
                               const std::map<std::string, FormalSeries>& assign,
                               const VarSetPtr& target, int trunc) {
    std::vector<const FormalSeries*> mapped(s.vars()->size(), nullptr);
    std::vector<FormalSeries> identity_pool;
    identity_pool.reserve(s.vars()->size());
    bool all_exact = s.reliable() == EXACT_DEGREE;
    int assign_rel = EXACT_DEGREE;
    bool nonzero_const = false;
    for (const auto& [name, series] : assign) {
        if (!(*series.vars() == *target))
            throw std::invalid_argument("substitute: assignment not over target variables");
        if (series.reliable() != EXACT_DEGREE) {
            all_exact = false;
            assign_rel = std::min(assign_rel, series.reliable());
        }
        if (!series.constant_term().is_zero())
            nonzero_const = true;
    }
    for (std::size_t j = 0; j < s.vars()->size(); ++j) {
        const std::string& name = s.vars()->at(j).name;
        auto it = assign.find(name);
        if (it != assign.end()) {
            mapped[j] = &it->second;
        } else {
            identity_pool.push_back(FormalSeries::var(target, trunc, name));
            mapped[j] = &identity_pool.back();
        }
    }
    // minimum degree (over substituted variables) of any term actually using them
    unsigned dmin = 0;
    bool have_dmin = false;
    for (const auto& [m, c] : s.terms()) {
        unsigned d = 0;
        for (std::size_t j = 0; j < s.vars()->size(); ++j)
            if (m.e[j] && assign.count(s.vars()->at(j).name))
                d += m.e[j];
        if (d > 0) {
            dmin = have_dmin ? std::min(dmin, d) : d;
            have_dmin = true;
        }
    }

    std::vector<std::vector<FormalSeries>> pow_cache(s.vars()->size());
    auto power_of = [&](std::size_t j, unsigned e) -> const FormalSeries& {
        auto& cache = pow_cache[j];
        if (cache.empty())
            cache.push_back(FormalSeries::constant(target, trunc, Scalar(1)));
        while (cache.size() <= e)
            cache.push_back(cache.back() * (*mapped[j]));
        return cache[e];
    };

    FormalSeries out(target, trunc);
    for (const auto& [m, c] : s.terms()) {
        FormalSeries t = FormalSeries::constant(target, trunc, c);
        for (std::size_t j = 0; j < s.vars()->size(); ++j)
            if (m.e[j])
                t = t * power_of(j, m.e[j]);
        out = out + t;
    }
    int r = out.reliable();  // tracks drops during assembly
    if (s.reliable() != EXACT_DEGREE)
        r = std::min(r, s.reliable());
    if (!all_exact) {
        if (nonzero_const)
            r = 0;  // shifted-base jets: only exact data keeps meaning here
        else if (have_dmin && assign_rel != EXACT_DEGREE)
            r = std::min(r, assign_rel + static_cast<int>(dmin) - 1);
    }
    out.set_reliable(r);
    return out;
}

// exp(s) = sum s^m / m! for a series with zero constant term.
inline FormalSeries exp_zero(const FormalSeries& s) {
    if (!s.constant_term().is_zero())
        throw std::invalid_argument("exp_zero: nonzero constant term");
    FormalSeries acc = FormalSeries::constant(s.vars(), s.truncation(), Scalar(1));
    FormalSeries pw = acc;
    for (int m = 1; m <= s.truncation(); ++m) {
        pw = pw * s;
        if (pw.is_zero())
            break;
        acc = acc + Scalar(Rational(BigInt(1), factorial(unsigned(m)).re().numerator())) * pw;
    }
    acc.set_reliable(std::min(acc.reliable(), s.reliable()));
    return acc;
}

// Unique formal solution u(q) with u(0)=0 of equations(u,q)=0 whose Jacobian
// in u at the origin is the given invertible linear part. Quasi-Newton on
// jets: each sweep raises the vanishing order of the residual by at least
// one degree.
inline std::map<std::string, FormalSeries> solve_implicit(
    const std::vector<FormalSeries>& equations, const std::vector<std::string>& unknowns,
    const ScalarMatrix& linear_part, const VarSetPtr& param_vars, int trunc) {
    const std::size_t n = unknowns.size();
    if (equations.size() != n)
        throw std::invalid_argument("solve_implicit: need one equation per unknown");
    for (const auto& eq : equations)
        if (!eq.constant_term().is_zero())
            throw std::invalid_argument("solve_implicit: equations must vanish at the origin");
    ScalarMatrix linv = mat_inverse(linear_part);  // throws on singular linear part

    std::vector<FormalSeries> u(n, FormalSeries::zero(param_vars, trunc));
    auto residual = [&](const std::vector<FormalSeries>& cur) {
        std::map<std::string, FormalSeries> assign;
        for (std::size_t j = 0; j < n; ++j)
            assign.emplace(unknowns[j], cur[j]);
        std::vector<FormalSeries> r;
        r.reserve(n);
        for (const auto& eq : equations)
            r.push_back(substitute(eq, assign, param_vars, trunc));
        return r;
    };

    for (int it = 0; it <= trunc + 1; ++it) {
        std::vector<FormalSeries> r = residual(u);
        bool zero = true;
        for (const auto& ri : r)
            if (!ri.is_zero()) {
                zero = false;
                break;
            }
        if (zero) {
            std::map<std::string, FormalSeries> out;
            for (std::size_t j = 0; j < n; ++j)
                out.emplace(unknowns[j], u[j]);
            return out;
        }
        for (std::size_t j = 0; j < n; ++j) {
            FormalSeries step = FormalSeries::zero(param_vars, trunc);
            for (std::size_t k = 0; k < n; ++k)
                step = step + linv[j][k] * r[k];
            u[j] = u[j] - step;
        }
    }
    throw std::domain_error("solve_implicit: residual not eliminable (inconsistent system)");
}

// Power series in hbar whose coefficients are FormalSeries sharing one
// variable set and truncation.
class HbarSeries {
  public:
    HbarSeries() = default;
    HbarSeries(VarSetPtr vars, int trunc, int order)
        : order_(order), coeffs_(static_cast<std::size_t>(order) + 1,
                                 FormalSeries::zero(vars, trunc)) {}
    explicit HbarSeries(const FormalSeries& order0, int order) : order_(order) {
        coeffs_.assign(static_cast<std::size_t>(order) + 1,
                       FormalSeries::zero(order0.vars(), order0.truncation()));
        coeffs_[0] = order0;
    }

    int order() const { return order_; }
    const VarSetPtr& vars() const { return coeffs_.at(0).vars(); }
    int truncation() const { return coeffs_.at(0).truncation(); }
    const FormalSeries& coeff(int j) const { return coeffs_.at(static_cast<std::size_t>(j)); }
    FormalSeries& coeff(int j) { return coeffs_.at(static_cast<std::size_t>(j)); }

    bool is_zero() const {
        for (const auto& c : coeffs_)
            if (!c.is_zero())
                return false;
        return true;
    }

    HbarSeries restricted(int new_order) const {
        HbarSeries r(vars(), truncation(), new_order);
        for (int j = 0; j <= std::min(new_order, order_); ++j)
            r.coeffs_[static_cast<std::size_t>(j)] = coeffs_[static_cast<std::size_t>(j)];
        return r;
    }

    friend HbarSeries operator+(const HbarSeries& a, const HbarSeries& b) {
        int n = std::min(a.order_, b.order_);
        HbarSeries r(a.vars(), std::min(a.truncation(), b.truncation()), n);
        for (int j = 0; j <= n; ++j)
            r.coeffs_[j] = a.coeffs_[j].truncated(r.truncation()) +
                           b.coeffs_[j].truncated(r.truncation());
        return r;
    }
    friend HbarSeries operator-(const HbarSeries& a, const HbarSeries& b) {
        return a + (Scalar(-1) * b);
    }
    friend HbarSeries operator*(const Scalar& c, const HbarSeries& s) {
        HbarSeries r = s;
        for (auto& x : r.coeffs_)
            x = c * x;
        return r;
    }
    friend HbarSeries operator*(const HbarSeries& a, const HbarSeries& b) {
        int n = std::min(a.order_, b.order_);
        HbarSeries r(a.vars(), std::min(a.truncation(), b.truncation()), n);
        for (int i = 0; i <= n; ++i)
            for (int j = 0; i + j <= n; ++j) {
                if (a.coeffs_[i].is_zero() || b.coeffs_[j].is_zero())
                    continue;
                r.coeffs_[i + j] =
                    r.coeffs_[i + j] + a.coeffs_[i].truncated(r.truncation()) *
                                           b.coeffs_[j].truncated(r.truncation());
            }
        return r;
    }
    friend bool operator==(const HbarSeries& a, const HbarSeries& b) {
        if (a.order_ != b.order_)
            return false;
        for (int j = 0; j <= a.order_; ++j)
            if (a.coeffs_[j] != b.coeffs_[j])
                return false;
        return true;
    }
    friend bool operator!=(const HbarSeries& a, const HbarSeries& b) { return !(a == b); }

    // multiply by hbar^k
    HbarSeries shifted(int k) const {
        HbarSeries r(vars(), truncation(), order_);
        for (int j = 0; j + k <= order_; ++j)
            r.coeffs_[j + k] = coeffs_[j];
        return r;
    }

    int reliable() const {
        int r = EXACT_DEGREE;
        for (const auto& c : coeffs_)
            r = std::min(r, c.reliable());
        return r;
    }

  private:
    int order_{0};
    std::vector<FormalSeries> coeffs_;
};

}  // namespace micromorph
