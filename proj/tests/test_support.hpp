#pragma once

#include <random>
#include <vector>

#include "padicheights/padic.hpp"

namespace testsupport {

using padicheights::padic::Field;
using padicheights::padic::PadicNumber;

inline PadicNumber random_unit(Field f, std::mt19937_64& rng) {
    std::uniform_int_distribution<unsigned> digit(0, f.p - 1);
    std::uniform_int_distribution<unsigned> first(1, f.p - 1);
    std::vector<unsigned> ds(static_cast<std::size_t>(f.cap));
    ds[0] = first(rng);
    for (std::size_t i = 1; i < ds.size(); ++i) ds[i] = digit(rng);
    return PadicNumber::from_digits(f, 0, ds);
}

/// Random integral element; zero with small probability.
inline PadicNumber random_integral(Field f, std::mt19937_64& rng, int max_val = 3) {
    std::uniform_int_distribution<int> val(0, max_val);
    return random_unit(f, rng).shifted(val(rng));
}

inline PadicNumber random_small_integer(Field f, std::mt19937_64& rng, int bound = 20) {
    std::uniform_int_distribution<int> d(-bound, bound);
    return PadicNumber::integer(f, d(rng));
}

inline bool agree(const PadicNumber& a, const PadicNumber& b, int digits) {
    return padicheights::padic::agrees(a, b, digits);
}

}  // namespace testsupport

#include "padicheights/laurent.hpp"

namespace testsupport {

/// Random F0 + a log z with support in [-span, span].
inline padicheights::laurent::LogLaurent random_log_laurent(Field f, int window, std::mt19937_64& rng, int span = 6,
                                                            bool with_log = true) {
    padicheights::laurent::LogLaurent r(f, window);
    for (int n = -span; n <= span; ++n) r.set_coeff(n, random_integral(f, rng));
    if (with_log) r.set_log_coefficient(random_integral(f, rng));
    return r;
}

inline padicheights::laurent::LaurentForm random_form(Field f, int window, std::mt19937_64& rng, int span = 6) {
    padicheights::laurent::LaurentForm r(f, window);
    for (int n = -span; n <= span; ++n) r.set_coeff(n, random_integral(f, rng));
    return r;
}

}  // namespace testsupport

#include "padicheights/wideopen.hpp"

namespace testsupport {

/// Random rational form with poles only at the marked points of u: principal
/// parts of order up to 3 and residues summing to zero.
inline padicheights::wideopen::RationalOneForm random_form_on(const padicheights::wideopen::RationalWideOpen& u,
                                                              Field f, std::mt19937_64& rng, int max_order = 3) {
    using padicheights::wideopen::RationalOneForm;
    std::uniform_int_distribution<int> order(1, max_order);
    RationalOneForm w(f);
    auto marked = u.marked_points();
    bool has_infinity = false;
    PadicNumber residue_sum = PadicNumber::zero(f);
    const padicheights::wideopen::Point* last_finite = nullptr;
    for (const auto& pt : marked) {
        if (pt.infinite) {
            has_infinity = true;
            const int deg = order(rng) - 1;
            for (int m = 0; m < deg; ++m) w = w + RationalOneForm::polynomial_term(f, m, random_integral(f, rng));
            continue;
        }
        const int k = order(rng);
        for (int j = 1; j <= k; ++j) {
            auto c = random_integral(f, rng);
            if (j == 1) residue_sum += c;
            w = w + RationalOneForm::pole_term(f, pt.x, j, c);
        }
        last_finite = &pt;
    }
    if (!has_infinity && last_finite != nullptr) {
        w = w + RationalOneForm::pole_term(f, last_finite->x, 1, -residue_sum);
    }
    return w;
}

}  // namespace testsupport
