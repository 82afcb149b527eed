#include "relstruct/series.hpp"

#include <sstream>

namespace rs {

IntPolynomial::IntPolynomial(std::initializer_list<long long> l) {
    for (long long v : l) c.emplace_back(v);
    trim();
}

IntPolynomial::IntPolynomial(std::vector<BigInt> v) : c(std::move(v)) { trim(); }

void IntPolynomial::trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

IntPolynomial operator*(const IntPolynomial& a, const IntPolynomial& b) {
    if (a.c.empty() || b.c.empty()) return {};
    std::vector<BigInt> r(a.c.size() + b.c.size() - 1);
    for (size_t i = 0; i < a.c.size(); ++i)
        for (size_t j = 0; j < b.c.size(); ++j) r[i + j] += a.c[i] * b.c[j];
    return IntPolynomial(std::move(r));
}

IntPolynomial operator+(const IntPolynomial& a, const IntPolynomial& b) {
    std::vector<BigInt> r(std::max(a.c.size(), b.c.size()));
    for (size_t i = 0; i < r.size(); ++i) r[i] = a.at(i) + b.at(i);
    return IntPolynomial(std::move(r));
}

bool operator==(const IntPolynomial& a, const IntPolynomial& b) { return a.c == b.c; }

bool IntegerSeries::is_zero() const {
    for (const auto& v : c)
        if (v != 0) return false;
    return true;
}

IntegerSeries truncate(const IntPolynomial& p, int N) {
    IntegerSeries s;
    s.c.resize(N + 1);
    for (int i = 0; i <= N; ++i) s.c[i] = p.at(i);
    return s;
}

IntegerSeries multiply(const IntegerSeries& a, const IntegerSeries& b, int N) {
    IntegerSeries r;
    r.c.assign(N + 1, 0);
    for (int i = 0; i <= N && i < static_cast<int>(a.c.size()); ++i) {
        if (a.c[i] == 0) continue;
        for (int j = 0; i + j <= N && j < static_cast<int>(b.c.size()); ++j) r.c[i + j] += a.c[i] * b.c[j];
    }
    return r;
}

IntegerSeries from_values(const std::vector<long long>& v) {
    IntegerSeries s;
    for (long long x : v) s.c.emplace_back(x);
    return s;
}

BivariatePolynomial quadratic(const IntPolynomial& a, const IntPolynomial& b, const IntPolynomial& c) {
    return BivariatePolynomial{{c, b, a}};
}

IntegerSeries expand_rational(const RationalGF& gf, int N) {
    const BigInt q0 = gf.den.at(0);
    if (q0 == 0) throw SeriesError("rational expansion: denominator has zero constant term");
    IntegerSeries s;
    s.c.assign(N + 1, 0);
    for (int n = 0; n <= N; ++n) {
        BigInt acc = gf.num.at(n);
        for (int j = 1; j <= n && j < static_cast<int>(gf.den.c.size()); ++j) acc -= gf.den.c[j] * s.c[n - j];
        if (acc % q0 != 0) throw SeriesError("rational expansion: non-integral coefficient at x^" + std::to_string(n));
        s.c[n] = acc / q0;
    }
    return s;
}

IntegerSeries algebraic_residual(const BivariatePolynomial& q, const IntegerSeries& s, int N) {
    IntegerSeries acc;
    acc.c.assign(N + 1, 0);
    IntegerSeries power;  // S^j
    power.c.assign(N + 1, 0);
    power.c[0] = 1;
    IntegerSeries sN = s;
    sN.c.resize(N + 1, 0);
    for (size_t j = 0; j < q.coef.size(); ++j) {
        auto term = multiply(truncate(q.coef[j], N), power, N);
        for (int i = 0; i <= N; ++i) acc.c[i] += term.c[i];
        power = multiply(power, sN, N);
    }
    return acc;
}

IntegerSeries solve_quadratic_series(const IntPolynomial& a, const IntPolynomial& b, const IntPolynomial& c,
                                     const BigInt& seed, int N) {
    const BigInt a0 = a.at(0), b0 = b.at(0), c0 = c.at(0);
    if (a0 * seed * seed + b0 * seed + c0 != 0)
        throw SeriesError("quadratic series: seed is not a root of the constant terms");
    const BigInt pivot = 2 * a0 * seed + b0;
    if (pivot == 0) throw SeriesError("quadratic series: singular branch (2*a0*s0 + b0 = 0)");
    IntegerSeries s;
    s.c.assign(N + 1, 0);
    s.c[0] = seed;
    auto q = quadratic(a, b, c);
    for (int n = 1; n <= N; ++n) {
        // residual with s_n = 0 gives minus the linear term's contribution
        auto res = algebraic_residual(q, s, n);
        const BigInt& r = res.c[n];
        if (r % pivot != 0)
            throw SeriesError("quadratic series: non-integral coefficient at x^" + std::to_string(n));
        s.c[n] = -r / pivot;
    }
    return s;
}

std::vector<BigInt> partition_numbers(int N) {
    std::vector<BigInt> p(N + 1, 0);
    p[0] = 1;
    // multiply by 1/(1-x^k) for k = 1..N
    for (int k = 1; k <= N; ++k)
        for (int n = k; n <= N; ++n) p[n] += p[n - k];
    return p;
}

std::vector<BigInt> partition_numbers_euler(int N) {
    std::vector<BigInt> p(N + 1, 0);
    p[0] = 1;
    for (int n = 1; n <= N; ++n) {
        BigInt acc = 0;
        for (int j = 1;; ++j) {
            int g1 = j * (3 * j - 1) / 2, g2 = j * (3 * j + 1) / 2;
            if (g1 > n) break;
            int sign = (j % 2) ? 1 : -1;
            acc += sign * p[n - g1];
            if (g2 <= n) acc += sign * p[n - g2];
        }
        p[n] = acc;
    }
    return p;
}

std::vector<BigInt> partition_at_most(int N, int k) {
    // parts of size at most k, equivalently at most k parts by conjugation
    std::vector<BigInt> p(N + 1, 0);
    p[0] = 1;
    for (int part = 1; part <= k; ++part)
        for (int n = part; n <= N; ++n) p[n] += p[n - part];
    return p;
}

BigInt fib_generalized(int n, int k) {
    if (k < 1) throw SeriesError("generalized Fibonacci: k must be at least 1");
    if (n < 0) return 0;
    std::vector<BigInt> f(n + 1, 0);
    f[0] = 1;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= k && j <= i; ++j) f[i] += f[i - j];
    return f[n];
}

BigInt quasi_eval(const QuasiPolynomial& qp, long long n) {
    if (qp.period < 1) throw SeriesError("quasi-polynomial: period must be positive");
    const long long r = ((n % qp.period) + qp.period) % qp.period;
    Rational acc = 0, pw = 1;
    for (const auto& table : qp.coef) {
        acc += table.at(r) * pw;
        pw *= n;
    }
    if (boost::multiprecision::denominator(acc) != 1)
        throw SeriesError("quasi-polynomial: non-integral value at n=" + std::to_string(n));
    return boost::multiprecision::numerator(acc);
}

std::string to_string(const IntegerSeries& s) {
    std::ostringstream out;
    for (size_t i = 0; i < s.c.size(); ++i) out << (i ? ", " : "") << s.c[i];
    return out.str();
}

IntPolynomial parse_polynomial(const std::string& list) {
    std::vector<BigInt> v;
    std::stringstream in(list);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        auto b = tok.find_first_not_of(" \t"), e = tok.find_last_not_of(" \t");
        if (b == std::string::npos) throw SeriesError("polynomial: empty coefficient in '" + list + "'");
        tok = tok.substr(b, e - b + 1);
        try {
            v.emplace_back(tok);
        } catch (const std::exception&) {
            throw SeriesError("polynomial: bad coefficient '" + tok + "'");
        }
    }
    return IntPolynomial(std::move(v));
}

}  // namespace rs
