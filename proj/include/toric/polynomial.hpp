#ifndef TORIC_POLYNOMIAL_HPP
#define TORIC_POLYNOMIAL_HPP

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

namespace toric {

/// Sparse multivariate polynomial with real coefficients, stored as a
/// multi-index -> coefficient map. Small by construction (basis elements,
/// potential corrections, perturbation directions), so no attempt at a
/// fast representation is made.
class Polynomial {
public:
  using MultiIndex = std::vector<int>;

  Polynomial() = default;
  explicit Polynomial(int dim) : dim_(dim) {}

  static Polynomial constant(int dim, double c);
  static Polynomial variable(int dim, int i);

  int dim() const { return dim_; }
  bool is_zero(double tol = 0.0) const;
  int total_degree() const;
  const std::map<MultiIndex, double>& terms() const { return terms_; }

  void add_term(MultiIndex exponents, double coefficient);
  double coefficient(const MultiIndex& exponents) const;

  double operator()(const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient_at(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd hessian_at(const Eigen::VectorXd& x) const;

  Polynomial derivative(int i) const;

  Polynomial operator+(const Polynomial& other) const;
  Polynomial operator-(const Polynomial& other) const;
  Polynomial operator*(const Polynomial& other) const;
  Polynomial operator*(double c) const;
  Polynomial& operator+=(const Polynomial& other);

  /// p(A y + b): substitution by an affine change of variables.
  Polynomial compose_affine(const Eigen::MatrixXd& A,
                            const Eigen::VectorXd& b) const;

  /// Human-readable form like "1.5*x0^2*x1 - 2*x1", used for direction ids.
  std::string to_string() const;

private:
  void prune();

  int dim_ = 0;
  std::map<MultiIndex, double> terms_;
};

/// Legendre polynomial P_d on [-1,1] as a 1-variable Polynomial.
Polynomial legendre_polynomial(int degree);

}  // namespace toric

#endif
