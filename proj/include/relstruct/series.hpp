#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace rs {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct SeriesError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IntPolynomial {
    std::vector<BigInt> c;  // c[i] is the coefficient of x^i

    IntPolynomial() = default;
    IntPolynomial(std::initializer_list<long long> l);
    explicit IntPolynomial(std::vector<BigInt> v);

    void trim();
    int degree() const { return static_cast<int>(c.size()) - 1; }
    BigInt at(size_t i) const { return i < c.size() ? c[i] : BigInt(0); }
};

IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b);
IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b);
bool operator==(const IntPolynomial& a, const IntPolynomial& b);

// truncated at order N: coefficients a_0..a_N
struct IntegerSeries {
    std::vector<BigInt> c;
    int order() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const;
};

IntegerSeries truncate(const IntPolynomial& p, int N);
IntegerSeries multiply(const IntegerSeries& a, const IntegerSeries& b, int N);
IntegerSeries from_values(const std::vector<long long>& v);

struct RationalGF {
    IntPolynomial num, den;
};

// sum_j y^j * coef[j](x)
struct BivariatePolynomial {
    std::vector<IntPolynomial> coef;
};

BivariatePolynomial quadratic(const IntPolynomial& a, const IntPolynomial& b, const IntPolynomial& c);

// periodic coefficients: value(n) = sum_j coef[j][n mod period] * n^j
struct QuasiPolynomial {
    int period = 1;
    std::vector<std::vector<Rational>> coef;
};

IntegerSeries expand_rational(const RationalGF& gf, int N);
IntegerSeries algebraic_residual(const BivariatePolynomial& q, const IntegerSeries& s, int N);
IntegerSeries solve_quadratic_series(const IntPolynomial& a, const IntPolynomial& b, const IntPolynomial& c,
                                     const BigInt& seed, int N);

std::vector<BigInt> partition_numbers(int N);        // product expansion
std::vector<BigInt> partition_numbers_euler(int N);  // pentagonal recurrence
std::vector<BigInt> partition_at_most(int N, int k);

BigInt fib_generalized(int n, int k);
BigInt quasi_eval(const QuasiPolynomial& qp, long long n);

std::string to_string(const IntegerSeries& s);
IntPolynomial parse_polynomial(const std::string& list);  // "1,-1,-2,1"

}  // namespace rs
