#pragma once

#include <algorithm>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "bishopdisc/types.hpp"

namespace bishopdisc {

/// Multivariate real polynomial Σ coeff · x^e with coefficients in a vector
/// space (double, RVec or RMat). `zero` fixes the coefficient shape.
template <class Coeff>
class Polynomial {
 public:
  struct Term {
    std::vector<int> exponents;
    Coeff coeff;
  };

  Polynomial() = default;
  Polynomial(int num_vars, Coeff zero) : num_vars_(num_vars), zero_(std::move(zero)) {}

  int num_vars() const { return num_vars_; }
  const Coeff& zero() const { return zero_; }
  const std::vector<Term>& terms() const { return terms_; }

  void add_term(std::vector<int> exponents, Coeff coeff) {
    if (static_cast<int>(exponents.size()) != num_vars_)
      throw Error("polynomial term has " + std::to_string(exponents.size()) +
                  " exponents, expected " + std::to_string(num_vars_));
    for (int e : exponents)
      if (e < 0) throw Error("polynomial exponents must be non-negative");
    for (auto& t : terms_)
      if (t.exponents == exponents) {
        t.coeff = t.coeff + coeff;
        return;
      }
    terms_.push_back({std::move(exponents), std::move(coeff)});
  }

  int degree() const {
    int d = 0;
    for (const auto& t : terms_) {
      int s = 0;
      for (int e : t.exponents) s += e;
      d = std::max(d, s);
    }
    return d;
  }

  Coeff operator()(std::span<const double> x) const {
    Coeff out = zero_;
    for (const auto& t : terms_) {
      double mono = 1.0;
      for (int v = 0; v < num_vars_; ++v)
        for (int e = 0; e < t.exponents[v]; ++e) mono *= x[v];
      out = out + mono * t.coeff;
    }
    return out;
  }

  Polynomial partial(int var) const {
    Polynomial d(num_vars_, zero_);
    for (const auto& t : terms_) {
      const int e = t.exponents[var];
      if (e == 0) continue;
      auto ex = t.exponents;
      ex[var] = e - 1;
      d.add_term(std::move(ex), static_cast<double>(e) * t.coeff);
    }
    return d;
  }

 private:
  int num_vars_ = 0;
  Coeff zero_{};
  std::vector<Term> terms_;
};

}  // namespace bishopdisc
