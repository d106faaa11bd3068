#pragma once

// Variable universes for formal series. A VarSet is an ordered list of named,
// role-tagged variables; ordering is canonical (role-major, declaration order
// within a role) so printed forms are deterministic. Multi-indices are dense
// exponent vectors over one VarSet.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace micromorph {

enum class Role : std::uint8_t {
    momentum = 0,
    position = 1,
    time = 2,
    energy = 3,
    fiber = 4,
    hbar_external = 5,
};

struct Var {
    std::string name;
    Role role{Role::position};
};

class VarSet {
  public:
    VarSet() = default;
    explicit VarSet(std::vector<Var> vars) {
        std::stable_sort(vars.begin(), vars.end(), [](const Var& a, const Var& b) {
            return static_cast<int>(a.role) < static_cast<int>(b.role);
        });
        vars_ = std::move(vars);
        for (std::size_t j = 0; j < vars_.size(); ++j) {
            if (!index_.emplace(vars_[j].name, j).second)
                throw std::invalid_argument("VarSet: duplicate variable " + vars_[j].name);
        }
    }

    std::size_t size() const { return vars_.size(); }
    const Var& at(std::size_t j) const { return vars_[j]; }
    const std::vector<Var>& vars() const { return vars_; }

    bool contains(const std::string& name) const { return index_.count(name) != 0; }
    std::size_t index_of(const std::string& name) const {
        auto it = index_.find(name);
        if (it == index_.end())
            throw std::invalid_argument("VarSet: unknown variable " + name);
        return it->second;
    }

    std::vector<std::size_t> indices_of_role(Role r) const {
        std::vector<std::size_t> out;
        for (std::size_t j = 0; j < vars_.size(); ++j)
            if (vars_[j].role == r)
                out.push_back(j);
        return out;
    }

    friend bool operator==(const VarSet& a, const VarSet& b) {
        if (a.vars_.size() != b.vars_.size())
            return false;
        for (std::size_t j = 0; j < a.vars_.size(); ++j)
            if (a.vars_[j].name != b.vars_[j].name || a.vars_[j].role != b.vars_[j].role)
                return false;
        return true;
    }
    friend bool operator!=(const VarSet& a, const VarSet& b) { return !(a == b); }

  private:
    std::vector<Var> vars_;
    std::map<std::string, std::size_t> index_;
};

using VarSetPtr = std::shared_ptr<const VarSet>;

inline VarSetPtr make_varset(std::vector<Var> vars) {
    return std::make_shared<const VarSet>(std::move(vars));
}

// Standard coordinate families.
inline std::vector<Var> momentum_vars(int k, const std::string& prefix = "p") {
    std::vector<Var> v;
    for (int j = 1; j <= k; ++j)
        v.push_back({prefix + std::to_string(j), Role::momentum});
    return v;
}
inline std::vector<Var> position_vars(int l, const std::string& prefix = "x") {
    std::vector<Var> v;
    for (int j = 1; j <= l; ++j)
        v.push_back({prefix + std::to_string(j), Role::position});
    return v;
}
inline std::vector<Var> concat(std::vector<Var> a, const std::vector<Var>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

// Dense exponent vector over one VarSet.
struct MultiIndex {
    std::vector<std::uint16_t> e;

    MultiIndex() = default;
    explicit MultiIndex(std::size_t n) : e(n, 0) {}

    unsigned total() const {
        unsigned t = 0;
        for (auto x : e)
            t += x;
        return t;
    }
    unsigned degree_over(const std::vector<std::size_t>& idx) const {
        unsigned t = 0;
        for (auto j : idx)
            t += e[j];
        return t;
    }
    bool is_zero() const {
        for (auto x : e)
            if (x)
                return false;
        return true;
    }
    friend MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
        MultiIndex r(a.e.size());
        for (std::size_t j = 0; j < a.e.size(); ++j)
            r.e[j] = static_cast<std::uint16_t>(a.e[j] + b.e[j]);
        return r;
    }
    friend bool operator<(const MultiIndex& a, const MultiIndex& b) { return a.e < b.e; }
    friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.e == b.e; }
};

}  // namespace micromorph
