#pragma once

// Closed-form budgets used by the protocols and by the bound checker.
// Templated over the bound functions so they can be evaluated against a
// certified PolyTable or against a synthetic table in tests.
//
// A bound source B provides P(n), rho(n), Pi(n, l), sum_P(n) returning BigInt.

#include "gather/rational.hpp"

namespace gather::bounds {

template <class B>
BigInt nu_motion(const B& b, const BigInt& m) {
    return 2 * b.rho(m);
}

template <class B>
BigInt nu_total(const B& b, const BigInt& m) {
    BigInt r = b.rho(m);
    return 12 * r * r;
}

// Length of the red period for a gatherer that adopted m, has label length
// `label_len` and computed delta.
template <class B>
Rational red_period_motion(const B& b, const BigInt& m, int label_len, const Rational& delta) {
    const BigInt nu = nu_motion(b, m);
    BigInt num = 2 * b.Pi(nu, label_len) + 3 * b.rho(nu) + b.sum_P(nu) + nu * nu * b.P(nu);
    return Rational(num) / delta;
}

template <class B>
Rational red_period_total(const B& b, const BigInt& m, int label_len, const Rational& delta) {
    const BigInt nu = nu_total(b, m);
    const BigInt r = b.rho(nu);
    BigInt num = 4 * nu * b.Pi(nu, label_len) + 12 * nu * r * r + nu * nu * b.P(nu);
    return Rational(num) / delta;
}

template <class B>
Rational phi_motion(const B& b, const BigInt& nu_star, int lambda, const Rational& delta_star) {
    BigInt num = 21 * b.rho(nu_star) + 7 * b.sum_P(nu_star) + 8 * b.Pi(nu_star, lambda) +
                 8 * nu_star * nu_star * b.P(nu_star);
    return Rational(num) / delta_star;
}

template <class B>
Rational psi_total(const B& b, const BigInt& nu_star, int lambda, const Rational& delta_star) {
    const BigInt r = b.rho(nu_star);
    BigInt num = (12 * nu_star + 1) * b.Pi(nu_star, lambda) + 108 * nu_star * r * r +
                 5 * nu_star * nu_star * b.P(nu_star);
    return Rational(num) / delta_star;
}

// tau' = phi + 2 phi kappa / epsilon   (motion)
inline Rational final_wait_motion(const Rational& phi, const Rational& kappa, const Rational& epsilon) {
    return phi + 2 * phi * kappa / epsilon;
}

// tau' = psi + 2 psi kappa* / delta*   (total)
inline Rational final_wait_total(const Rational& psi, const Rational& kappa, const Rational& delta_star) {
    return psi + 2 * psi * kappa / delta_star;
}

// First meeting after the earliest good wakeup.
template <class B>
Rational first_meeting_bound(const B& b, const BigInt& n, int lambda, const Rational& epsilon) {
    return Rational(b.Pi(n, lambda)) / epsilon;
}

// Declaration deadline, motion faults.
inline Rational declare_bound_motion(const Rational& phi, const Rational& kappa, const Rational& epsilon) {
    return 2 * phi + 4 * phi * kappa / epsilon;
}

// First good gatherer, total faults.
template <class B>
Rational first_gatherer_bound_total(const B& b, const BigInt& n, int lambda, const Rational& epsilon) {
    const BigInt r = b.rho(n);
    return Rational(2 * n * (2 * b.Pi(n, lambda) + 24 * r * r)) / epsilon;
}

// Declaration deadline, total faults.
inline Rational declare_bound_total(const Rational& psi, const Rational& kappa, const Rational& delta_star) {
    return 2 * psi + 4 * psi * kappa / delta_star;
}

}  // namespace gather::bounds
