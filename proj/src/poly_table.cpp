#include "gather/poly_table.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gather {

PolyTable PolyTable::empty(int n_max, int label_len_max) {
    PolyTable t;
    t.n_max = n_max;
    t.label_len_max = label_len_max;
    t.ues.assign(n_max + 1, {});
    t.P_.assign(n_max + 1, 0);
    t.rho_.assign(n_max + 1, 0);
    t.Pi_.assign(n_max + 1, std::vector<BigInt>(label_len_max + 1, 0));
    return t;
}

int PolyTable::clamp_n(const BigInt& n) const {
    if (n <= 1) return 1;
    if (n >= n_max) return n_max;
    return static_cast<int>(n.get_si());
}

BigInt PolyTable::Pi(const BigInt& n, int label_len) const {
    if (label_len < 1) label_len = 1;
    if (label_len > label_len_max)
        throw std::out_of_range("label length " + std::to_string(label_len) + " exceeds certified maximum " +
                                std::to_string(label_len_max));
    return Pi_.at(clamp_n(n)).at(label_len);
}

BigInt PolyTable::sum_P(const BigInt& n) const {
    BigInt s = 0;
    if (n <= 0) return s;
    const int upto = clamp_n(n);
    for (int i = 1; i <= upto; ++i) s += P_[i];
    if (n > n_max) s += (n - n_max) * P_[n_max];
    return s;
}

BigInt PolyTable::pi_analytic(int phase) const {
    const BigInt p2 = P(2 * phase), p1 = P(phase);
    return 3 * p2 + 2 * (p2 + 1) * p1 + 1;
}

BigInt PolyTable::pi(int n, int phase) const {
    auto it = pi_.find({clamp_n(n), phase});
    if (it != pi_.end()) return it->second;
    return pi_analytic(phase);
}

void PolyTable::enforce_monotone() {
    for (int n = 2; n <= n_max; ++n) {
        if (rho_[n] < rho_[n - 1]) rho_[n] = rho_[n - 1];
        for (int l = 1; l <= label_len_max; ++l) {
            BigInt& v = Pi_[n][l];
            if (v < Pi_[n - 1][l]) v = Pi_[n - 1][l];
            if (l > 1 && v < Pi_[n][l - 1]) v = Pi_[n][l - 1];
        }
    }
    for (int l = 2; l <= label_len_max; ++l)
        if (Pi_[1][l] < Pi_[1][l - 1]) Pi_[1][l] = Pi_[1][l - 1];
    // pi: running max over n for each phase
    std::map<int, BigInt> best;
    for (int n = 1; n <= n_max; ++n) {
        for (auto& [phase, b] : best) {
            auto it = pi_.find({n, phase});
            if (it == pi_.end()) {
                pi_[{n, phase}] = b;
            } else if (it->second < b) {
                it->second = b;
            }
        }
        for (auto it = pi_.lower_bound({n, 0}); it != pi_.end() && it->first.first == n; ++it) {
            auto& b = best[it->first.second];
            if (b < it->second) b = it->second;
        }
    }
}

std::string PolyTable::fingerprint() const {
    const std::string s = write_table(*this);
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string write_table(const PolyTable& t) {
    std::ostringstream os;
    os << "polytable 1\n";
    os << "n_max " << t.n_max << "\n";
    os << "label_len_max " << t.label_len_max << "\n";
    os << "safety_factor " << to_string(t.safety_factor) << "\n";
    os << "corpus_hash " << (t.corpus_hash.empty() ? "-" : t.corpus_hash) << "\n";
    os << "policy " << (t.policy.empty() ? "-" : t.policy) << "\n";
    for (int n = 1; n <= t.n_max; ++n) {
        os << "ues " << n;
        for (int x : t.ues[n].terms) os << ' ' << x;
        os << "\n";
    }
    for (int n = 1; n <= t.n_max; ++n) os << "P " << n << ' ' << t.P_[n] << "\n";
    for (int n = 1; n <= t.n_max; ++n) os << "rho " << n << ' ' << t.rho_[n] << "\n";
    for (const auto& [k, v] : t.pi_) os << "pi " << k.first << ' ' << k.second << ' ' << v << "\n";
    for (int n = 1; n <= t.n_max; ++n)
        for (int l = 1; l <= t.label_len_max; ++l) os << "Pi " << n << ' ' << l << ' ' << t.Pi_[n][l] << "\n";
    os << "end\n";
    return os.str();
}

namespace {

[[noreturn]] void table_error(int line, const std::string& msg) {
    throw std::runtime_error("table line " + std::to_string(line) + ": " + msg);
}

}  // namespace

PolyTable parse_table(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    PolyTable t;
    bool header = false, ended = false;
    int n_max = -1, lmax = 17;
    auto need_sized = [&](int ln) {
        if (n_max < 1) table_error(ln, "n_max must precede table entries");
        if (t.ues.empty()) t = [&] {
            PolyTable e = PolyTable::empty(n_max, lmax);
            e.safety_factor = t.safety_factor;
            e.corpus_hash = t.corpus_hash;
            e.policy = t.policy;
            return e;
        }();
    };
    auto index_in = [&](long v, long lo, long hi, int ln, const char* what) {
        if (v < lo || v > hi) table_error(ln, std::string(what) + " index " + std::to_string(v) + " out of range");
        return static_cast<int>(v);
    };
    while (std::getline(in, raw)) {
        ++line;
        if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
        std::istringstream ls(raw);
        std::string key;
        if (!(ls >> key)) continue;
        if (ended) table_error(line, "content after 'end'");
        try {
            if (!header) {
                int version = 0;
                if (key != "polytable" || !(ls >> version) || version != 1) table_error(line, "expected 'polytable 1'");
                header = true;
            } else if (key == "n_max") {
                ls >> n_max;
                if (n_max < 2) table_error(line, "n_max must be at least 2");
            } else if (key == "label_len_max") {
                ls >> lmax;
                if (lmax < 1 || lmax > 63) table_error(line, "label_len_max out of range");
            } else if (key == "safety_factor") {
                std::string v;
                ls >> v;
                t.safety_factor = parse_rational(v);
            } else if (key == "corpus_hash") {
                ls >> t.corpus_hash;
                if (t.corpus_hash == "-") t.corpus_hash.clear();
            } else if (key == "policy") {
                ls >> t.policy;
                if (t.policy == "-") t.policy.clear();
            } else if (key == "ues") {
                need_sized(line);
                long n;
                ls >> n;
                const int k = index_in(n, 1, n_max, line, "ues");
                t.ues[k].size = k;
                int x;
                while (ls >> x) {
                    if (x < 0) table_error(line, "negative UES term");
                    t.ues[k].terms.push_back(x);
                }
            } else if (key == "P" || key == "rho") {
                need_sized(line);
                long n;
                std::string v;
                ls >> n >> v;
                const int k = index_in(n, 1, n_max, line, key.c_str());
                (key == "P" ? t.P_ : t.rho_)[k] = parse_bigint(v);
            } else if (key == "pi") {
                need_sized(line);
                long n, i;
                std::string v;
                ls >> n >> i >> v;
                const int k = index_in(n, 1, n_max, line, "pi");
                if (i < 3 || i % 3 != 0) table_error(line, "phase must be a positive multiple of 3");
                t.pi_[{k, static_cast<int>(i)}] = parse_bigint(v);
            } else if (key == "Pi") {
                need_sized(line);
                long n, l;
                std::string v;
                ls >> n >> l >> v;
                const int k = index_in(n, 1, n_max, line, "Pi");
                const int ll = index_in(l, 1, lmax, line, "Pi label length");
                t.Pi_[k][ll] = parse_bigint(v);
            } else if (key == "end") {
                ended = true;
            } else {
                table_error(line, "unknown key '" + key + "'");
            }
        } catch (const std::invalid_argument& e) {
            table_error(line, e.what());
        }
        if (ls.fail() && !ls.eof()) table_error(line, "malformed entry");
    }
    if (!header) table_error(line, "missing header");
    if (!ended) table_error(line, "missing 'end' (truncated table?)");
    if (t.ues.empty()) table_error(line, "table has no entries");
    for (int n = 1; n <= t.n_max; ++n) {
        if (t.P_[n] != static_cast<long>(t.ues[n].terms.size()))
            table_error(line, "P(" + std::to_string(n) + ") differs from the UES length");
    }
    return t;
}

PolyTable read_table_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open table file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_table(ss.str());
}

void write_table_file(const PolyTable& t, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write table file " + path);
    f << write_table(t);
}

}  // namespace gather
