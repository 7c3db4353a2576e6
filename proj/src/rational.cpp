#include "gather/rational.hpp"

#include <cmath>

namespace gather {

std::string to_string(const Rational& r) {
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string to_string(const BigInt& z) { return z.get_str(); }

BigInt parse_bigint(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("empty integer");
    std::size_t i = (text[0] == '-' || text[0] == '+') ? 1 : 0;
    if (i == text.size()) throw std::invalid_argument("bad integer: " + std::string(text));
    for (std::size_t k = i; k < text.size(); ++k) {
        if (text[k] < '0' || text[k] > '9') throw std::invalid_argument("bad integer: " + std::string(text));
    }
    std::string s(text[0] == '+' ? text.substr(1) : text);
    return BigInt(s, 10);
}

Rational parse_rational(std::string_view text) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_bigint(text));
    BigInt num = parse_bigint(text.substr(0, slash));
    BigInt den = parse_bigint(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator: " + std::string(text));
    Rational r(num, den);
    r.canonicalize();
    return r;
}

BigInt floor_of(const Rational& r) {
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

BigInt ceil_of(const Rational& r) {
    BigInt q;
    mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

int bit_length(std::uint64_t x) {
    int len = 0;
    while (x != 0) {
        ++len;
        x >>= 1;
    }
    return len;
}

double to_double(const Rational& r) { return r.get_d(); }

double log10_of(const Rational& r) {
    if (sgn(r) <= 0) return -INFINITY;
    // mpz_sizeinbase keeps this finite beyond double range
    long en = 0, ed = 0;
    double mn = mpz_get_d_2exp(&en, r.get_num_mpz_t());
    double md = mpz_get_d_2exp(&ed, r.get_den_mpz_t());
    return std::log10(mn / md) + static_cast<double>(en - ed) * std::log10(2.0);
}

}  // namespace gather
