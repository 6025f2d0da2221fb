#include "toric/polynomial.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace toric {

Polynomial Polynomial::constant(int dim, double c) {
  Polynomial p(dim);
  p.add_term(MultiIndex(dim, 0), c);
  return p;
}

Polynomial Polynomial::variable(int dim, int i) {
  if (i < 0 || i >= dim) throw std::invalid_argument("variable index out of range");
  Polynomial p(dim);
  MultiIndex e(dim, 0);
  e[i] = 1;
  p.add_term(e, 1.0);
  return p;
}

bool Polynomial::is_zero(double tol) const {
  for (const auto& [e, c] : terms_)
    if (std::abs(c) > tol) return false;
  return true;
}

int Polynomial::total_degree() const {
  int deg = 0;
  for (const auto& [e, c] : terms_) {
    if (c == 0.0) continue;
    int d = 0;
    for (int k : e) d += k;
    deg = std::max(deg, d);
  }
  return deg;
}

void Polynomial::add_term(MultiIndex exponents, double coefficient) {
  if (static_cast<int>(exponents.size()) != dim_)
    throw std::invalid_argument("multi-index length does not match dimension");
  for (int k : exponents)
    if (k < 0) throw std::invalid_argument("negative exponent");
  terms_[std::move(exponents)] += coefficient;
}

double Polynomial::coefficient(const MultiIndex& exponents) const {
  auto it = terms_.find(exponents);
  return it == terms_.end() ? 0.0 : it->second;
}

double Polynomial::operator()(const Eigen::VectorXd& x) const {
  double value = 0.0;
  for (const auto& [e, c] : terms_) {
    double t = c;
    for (int i = 0; i < dim_; ++i)
      for (int k = 0; k < e[i]; ++k) t *= x[i];
    value += t;
  }
  return value;
}

Eigen::VectorXd Polynomial::gradient_at(const Eigen::VectorXd& x) const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(dim_);
  for (const auto& [e, c] : terms_) {
    for (int i = 0; i < dim_; ++i) {
      if (e[i] == 0) continue;
      double t = c * e[i];
      for (int j = 0; j < dim_; ++j) {
        int p = (j == i) ? e[j] - 1 : e[j];
        for (int k = 0; k < p; ++k) t *= x[j];
      }
      g[i] += t;
    }
  }
  return g;
}

Eigen::MatrixXd Polynomial::hessian_at(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim_, dim_);
  for (const auto& [e, c] : terms_) {
    for (int i = 0; i < dim_; ++i) {
      for (int j = i; j < dim_; ++j) {
        double factor;
        MultiIndex d = e;
        if (i == j) {
          if (e[i] < 2) continue;
          factor = static_cast<double>(e[i]) * (e[i] - 1);
          d[i] -= 2;
        } else {
          if (e[i] < 1 || e[j] < 1) continue;
          factor = static_cast<double>(e[i]) * e[j];
          d[i] -= 1;
          d[j] -= 1;
        }
        double t = c * factor;
        for (int m = 0; m < dim_; ++m)
          for (int k = 0; k < d[m]; ++k) t *= x[m];
        h(i, j) += t;
        if (i != j) h(j, i) += t;
      }
    }
  }
  return h;
}

Polynomial Polynomial::derivative(int i) const {
  Polynomial p(dim_);
  for (const auto& [e, c] : terms_) {
    if (e[i] == 0) continue;
    MultiIndex d = e;
    d[i] -= 1;
    p.add_term(d, c * e[i]);
  }
  return p;
}

Polynomial Polynomial::operator+(const Polynomial& other) const {
  Polynomial p = *this;
  p += other;
  return p;
}

Polynomial Polynomial::operator-(const Polynomial& other) const {
  return *this + other * (-1.0);
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  if (terms_.empty() && dim_ == 0) dim_ = other.dim_;
  if (other.dim_ != dim_) throw std::invalid_argument("dimension mismatch");
  for (const auto& [e, c] : other.terms_) terms_[e] += c;
  prune();
  return *this;
}

Polynomial Polynomial::operator*(const Polynomial& other) const {
  if (other.dim_ != dim_) throw std::invalid_argument("dimension mismatch");
  Polynomial p(dim_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : other.terms_) {
      MultiIndex e(dim_);
      for (int i = 0; i < dim_; ++i) e[i] = ea[i] + eb[i];
      p.terms_[e] += ca * cb;
    }
  }
  p.prune();
  return p;
}

Polynomial Polynomial::operator*(double c) const {
  Polynomial p = *this;
  for (auto& [e, v] : p.terms_) v *= c;
  p.prune();
  return p;
}

Polynomial Polynomial::compose_affine(const Eigen::MatrixXd& A,
                                      const Eigen::VectorXd& b) const {
  const int m = static_cast<int>(A.cols());
  if (A.rows() != dim_ || b.size() != dim_)
    throw std::invalid_argument("affine map does not match polynomial dimension");
  // Substituted variables x_i = sum_j A(i,j) y_j + b_i as degree-1 polynomials.
  std::vector<Polynomial> subs;
  for (int i = 0; i < dim_; ++i) {
    Polynomial li = Polynomial::constant(m, b[i]);
    for (int j = 0; j < m; ++j)
      if (A(i, j) != 0.0) li += Polynomial::variable(m, j) * A(i, j);
    subs.push_back(li);
  }
  Polynomial result(m);
  for (const auto& [e, c] : terms_) {
    Polynomial t = Polynomial::constant(m, c);
    for (int i = 0; i < dim_; ++i)
      for (int k = 0; k < e[i]; ++k) t = t * subs[i];
    result += t;
  }
  return result;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (c == 0.0) continue;
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    double a = std::abs(c);
    bool wrote = false;
    if (a != 1.0) {
      os << a;
      wrote = true;
    }
    for (int i = 0; i < dim_; ++i) {
      if (e[i] == 0) continue;
      if (wrote) os << "*";
      os << "x" << i;
      if (e[i] > 1) os << "^" << e[i];
      wrote = true;
    }
    if (!wrote) os << a;
  }
  if (first) return "0";
  return os.str();
}

void Polynomial::prune() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->second == 0.0) it = terms_.erase(it);
    else ++it;
  }
}

Polynomial legendre_polynomial(int degree) {
  // Bonnet recurrence (d+1) P_{d+1} = (2d+1) x P_d - d P_{d-1}.
  Polynomial p0 = Polynomial::constant(1, 1.0);
  if (degree == 0) return p0;
  Polynomial x = Polynomial::variable(1, 0);
  Polynomial p1 = x;
  for (int d = 1; d < degree; ++d) {
    Polynomial next = (x * p1) * (2.0 * d + 1.0) - p0 * static_cast<double>(d);
    next = next * (1.0 / (d + 1.0));
    p0 = p1;
    p1 = next;
  }
  return p1;
}

}  // namespace toric
