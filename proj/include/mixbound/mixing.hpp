#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace mixbound {

enum class CoefficientType { beta, phi };

enum class ProfileKind { ExactTable, Algebraic, Exponential, Zero };

inline std::string to_string(CoefficientType t) {
  return t == CoefficientType::beta ? "beta" : "phi";
}

inline std::string to_string(ProfileKind k) {
  switch (k) {
    case ProfileKind::ExactTable: return "exact-table";
    case ProfileKind::Algebraic: return "algebraic";
    case ProfileKind::Exponential: return "exponential";
    case ProfileKind::Zero: return "zero";
  }
  return "?";
}

// Functional form of the mixing coefficients beta(k) / phi(k). Values are
// always in [0, 1] and non-increasing in k. Exact tables come from finite
// Markov chains; analytic kinds are envelopes c0*k^-r or c0*exp(-c1*k^r).
class MixingProfile {
 public:
  static MixingProfile exact_table(CoefficientType t, std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("mixing table empty");
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!(values[i] >= -1e-15 && values[i] <= 1.0 + 1e-12))
        throw std::invalid_argument("mixing value outside [0,1]");
      values[i] = std::clamp(values[i], 0.0, 1.0);
      // enforce monotonicity against fp roundoff; a genuine increase is a bug
      if (i > 0) {
        if (values[i] > values[i - 1] + 1e-12)
          throw std::invalid_argument("mixing table not non-increasing");
        values[i] = std::min(values[i], values[i - 1]);
      }
    }
    MixingProfile p;
    p.kind_ = ProfileKind::ExactTable;
    p.ctype_ = t;
    p.table_ = std::move(values);
    return p;
  }

  static MixingProfile algebraic(CoefficientType t, double c0, double rate) {
    if (!(c0 >= 0.0)) throw std::invalid_argument("algebraic profile needs c0 >= 0");
    if (!(rate > 0.0)) throw std::invalid_argument("algebraic profile needs rate > 0");
    MixingProfile p;
    p.kind_ = ProfileKind::Algebraic;
    p.ctype_ = t;
    p.c0_ = c0;
    p.rate_ = rate;
    return p;
  }

  static MixingProfile exponential(CoefficientType t, double c0, double c1, double rate) {
    if (!(c0 >= 0.0) || !(c1 > 0.0) || !(rate > 0.0))
      throw std::invalid_argument("exponential profile needs c0 >= 0, c1 > 0, rate > 0");
    MixingProfile p;
    p.kind_ = ProfileKind::Exponential;
    p.ctype_ = t;
    p.c0_ = c0;
    p.c1_ = c1;
    p.rate_ = rate;
    return p;
  }

  static MixingProfile zero(CoefficientType t) {
    MixingProfile p;
    p.kind_ = ProfileKind::Zero;
    p.ctype_ = t;
    return p;
  }

  ProfileKind kind() const { return kind_; }
  CoefficientType coefficient_type() const { return ctype_; }
  double c0() const { return c0_; }
  double rate() const { return rate_; }
  bool is_zero() const { return kind_ == ProfileKind::Zero; }
  const std::vector<double>& table() const { return table_; }

  // Coefficient at gap k. k = 0 means "no discarded points": the dependence
  // there is total, so every non-zero profile reports the trivial value 1.
  // Tables extend past their last entry with the last value, which keeps the
  // result a valid (monotone) upper bound of the true coefficient.
  double value(long k) const {
    if (k < 0) throw std::invalid_argument("mixing coefficient needs k >= 0");
    if (kind_ == ProfileKind::Zero) return 0.0;
    if (k == 0) return 1.0;
    switch (kind_) {
      case ProfileKind::ExactTable: {
        const std::size_t idx = static_cast<std::size_t>(k - 1);
        return idx < table_.size() ? table_[idx] : table_.back();
      }
      case ProfileKind::Algebraic:
        return std::min(1.0, c0_ * std::pow(static_cast<double>(k), -rate_));
      case ProfileKind::Exponential:
        return std::min(1.0, c0_ * std::exp(-c1_ * std::pow(static_cast<double>(k), rate_)));
      default:
        return 0.0;
    }
  }

  // The concentration constant 1 + 2*sum_{i=1}^m value(i). Exact for tables
  // and exponential envelopes, the integral bound for algebraic envelopes
  // (sum_{i=1}^m c0 i^-r <= c0 (1 + int_1^m t^-r dt)), closed form for zero.
  double one_plus_two_sum(long m) const {
    if (m < 0) throw std::invalid_argument("one_plus_two_sum needs m >= 0");
    switch (kind_) {
      case ProfileKind::Zero:
        return 1.0;
      case ProfileKind::Algebraic: {
        if (m == 0) return 1.0;
        const double md = static_cast<double>(m);
        double integral;
        if (std::fabs(rate_ - 1.0) < 1e-12) {
          integral = std::log(md);
        } else {
          integral = (std::pow(md, 1.0 - rate_) - 1.0) / (1.0 - rate_);
        }
        return 1.0 + 2.0 * c0_ * (1.0 + integral);
      }
      case ProfileKind::ExactTable:
      case ProfileKind::Exponential: {
        double sum = 0.0;
        for (long i = 1; i <= m; ++i) {
          const double v = value(i);
          sum += v;
          if (v < 1e-300) {
            if (kind_ == ProfileKind::Exponential) break;  // monotone, rest is 0
            if (kind_ == ProfileKind::ExactTable && v == 0.0) break;
          }
        }
        return 1.0 + 2.0 * sum;
      }
    }
    return 1.0;
  }

  // m-free bound 1 + 2*c0*r/(r-1) used by the algebraic-mixing theorem.
  // Requires rate > 1.
  double algebraic_sum_constant() const {
    if (kind_ != ProfileKind::Algebraic)
      throw std::invalid_argument("sum constant is defined for algebraic profiles");
    if (!(rate_ > 1.0)) throw std::domain_error("algebraic sum constant requires r > 1");
    return 1.0 + 2.0 * c0_ * rate_ / (rate_ - 1.0);
  }

 private:
  MixingProfile() = default;

  ProfileKind kind_ = ProfileKind::Zero;
  CoefficientType ctype_ = CoefficientType::beta;
  std::vector<double> table_;
  double c0_ = 0.0;
  double c1_ = 0.0;
  double rate_ = 1.0;
};

}  // namespace mixbound
