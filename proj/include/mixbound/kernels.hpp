#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "mixbound/linalg.hpp"

namespace mixbound {

// Kernel descriptor with a bound kappa^2 >= sup_x K(x, x). The RBF kernel has
// the analytic bound kappa = 1; for linear and polynomial kernels the bound
// is either declared up front or computed as the max over training inputs.
struct Kernel {
  enum class Type { Linear, Rbf, Polynomial };

  Type type = Type::Rbf;
  double gamma = 1.0;    // rbf: exp(-gamma * |a-b|^2)
  int degree = 2;        // polynomial: (a.b + coef0)^degree
  double coef0 = 1.0;
  double declared_kappa = 0.0;  // 0 = not declared

  static Kernel linear(double kappa = 0.0) {
    Kernel k;
    k.type = Type::Linear;
    k.declared_kappa = kappa;
    return k;
  }
  static Kernel rbf(double gamma = 1.0) {
    Kernel k;
    k.type = Type::Rbf;
    k.gamma = gamma;
    return k;
  }
  static Kernel polynomial(int degree, double coef0 = 1.0, double kappa = 0.0) {
    Kernel k;
    k.type = Type::Polynomial;
    k.degree = degree;
    k.coef0 = coef0;
    k.declared_kappa = kappa;
    return k;
  }

  double eval(const std::vector<double>& a, const std::vector<double>& b) const {
    switch (type) {
      case Type::Linear:
        return dot(a, b);
      case Type::Rbf: {
        double d2 = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
          const double d = a[i] - b[i];
          d2 += d * d;
        }
        return std::exp(-gamma * d2);
      }
      case Type::Polynomial:
        return std::pow(dot(a, b) + coef0, degree);
    }
    return 0.0;
  }

  bool has_analytic_kappa() const { return type == Type::Rbf; }

  // kappa valid on the given inputs; throws if nothing is declared and the
  // kernel has no analytic bound and no data is given.
  double kappa_for(const std::vector<std::vector<double>>& inputs) const {
    if (type == Type::Rbf) return 1.0;
    if (declared_kappa > 0.0) return declared_kappa;
    if (inputs.empty())
      throw std::invalid_argument("kernel bound kappa must be declared or computed from data");
    double k2 = 0.0;
    for (const auto& x : inputs) k2 = std::max(k2, eval(x, x));
    return std::sqrt(k2);
  }

  std::string name() const {
    switch (type) {
      case Type::Linear: return "linear";
      case Type::Rbf: return "rbf";
      case Type::Polynomial: return "polynomial";
    }
    return "?";
  }
};

inline Matrix gram_matrix(const Kernel& kernel, const std::vector<std::vector<double>>& x) {
  const std::size_t m = x.size();
  Matrix g(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      const double v = kernel.eval(x[i], x[j]);
      g(i, j) = v;
      g(j, i) = v;
    }
  }
  return g;
}

}  // namespace mixbound
