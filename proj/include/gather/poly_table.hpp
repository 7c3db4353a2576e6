#pragma once

#include "gather/rational.hpp"
#include "gather/sequences.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace gather {

// Certified bound functions P, rho, pi, Pi over the corpus, plus the UES that
// realise R(n, v). Arguments beyond n_max saturate at n_max: every graph the
// table is certified for has at most n_max nodes, so the saturated values are
// still upper bounds there.
class PolyTable {
public:
    int n_max = 0;
    int label_len_max = 17;
    Rational safety_factor{2};
    std::string corpus_hash;
    std::string policy;

    std::vector<Ues> ues;          // index 1..n_max
    std::vector<BigInt> P_;        // index 1..n_max, == ues[n].terms.size()
    std::vector<BigInt> rho_;      // index 1..n_max
    std::vector<std::vector<BigInt>> Pi_;   // [n][l], n 1..n_max, l 1..label_len_max
    std::map<std::pair<int, int>, BigInt> pi_;  // (n, phase i)

    static PolyTable empty(int n_max, int label_len_max = 17);

    int clamp_n(const BigInt& n) const;
    const Ues& ues_for(const BigInt& n) const { return ues.at(clamp_n(n)); }

    BigInt P(const BigInt& n) const { return P_.at(clamp_n(n)); }
    BigInt rho(const BigInt& n) const { return rho_.at(clamp_n(n)); }
    // Throws std::out_of_range for label lengths the table was not certified for.
    BigInt Pi(const BigInt& n, int label_len) const;
    // Sum_{i=1}^{n} P(i), closed form past n_max.
    BigInt sum_P(const BigInt& n) const;
    // Per-phase ESST bound; phases without a certified entry fall back to the
    // analytic bound 3P(2i) + 2(P(2i)+1)P(i) + 1.
    BigInt pi(int n, int phase) const;
    BigInt pi_analytic(int phase) const;

    // Replace rho, Pi, pi by running maxima so the tables are non-decreasing.
    void enforce_monotone();

    std::string fingerprint() const;
};

std::string write_table(const PolyTable& t);
PolyTable parse_table(const std::string& text);
PolyTable read_table_file(const std::string& path);
void write_table_file(const PolyTable& t, const std::string& path);

}  // namespace gather
