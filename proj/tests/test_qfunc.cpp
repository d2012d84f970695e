#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "holoq/parser.hpp"
#include "holoq/qfunc.hpp"
#include "holoq/rng.hpp"
#include "holoq/wirtinger.hpp"
#include "support/oracles.hpp"

using namespace holoq;
using testsupport::hamilton_oracle;

namespace {

Quaternion random_quat(Rng& rng, double lo = -2.0, double hi = 2.0) {
    return {rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(lo, hi), rng.uniform(lo, hi)};
}

bool close(const Quaternion& a, const Quaternion& b, double tol) {
    return norm(a - b) <= tol;
}

const std::vector<std::pair<const char*, QFunction>>& builtin_set() {
    static const std::vector<std::pair<const char*, QFunction>> fns = {
        {"p^2", builtin_powi(2)}, {"p^3", builtin_powi(3)}, {"exp", builtin_exp()},
        {"ln", builtin_ln()},     {"p^-1", builtin_recip()}, {"sin", builtin_sin()},
        {"cos", builtin_cos()},
    };
    return fns;
}

}  // namespace

TEST_CASE("p^2 at 1+2i+3j+4k: value and doubling split") {
    const Quaternion p{1, 2, 3, 4};
    const QFunction f = builtin_powi(2);
    const EvalResult r = f.eval(p);
    // frozen from the Cayley-table oracle
    CHECK(hamilton_oracle(p, p) == Quaternion{-28, 4, 6, 8});
    CHECK(close(r.value, {-28, 4, 6, 8}, 1e-12));
    CHECK(std::abs(r.phi1 - Complex{-28, 4}) <= 1e-12);  // a^2 - b*conj(b)
    CHECK(std::abs(r.phi2 - Complex{6, 8}) <= 1e-12);    // (a + conj(a)) * b
}

TEST_CASE("powi split matches the doubling-form expressions at random points") {
    Rng rng(11);
    const QFunction f = builtin_powi(2);
    for (int i = 0; i < 200; ++i) {
        const Quaternion p = random_quat(rng);
        const DoublingForm d = to_doubling(p);
        const EvalResult r = f.eval(p);
        const Complex phi1 = d.a * d.a - d.b * std::conj(d.b);
        const Complex phi2 = (d.a + std::conj(d.a)) * d.b;
        CHECK(std::abs(r.phi1 - phi1) <= 1e-13 * (1.0 + std::abs(phi1)));
        CHECK(std::abs(r.phi2 - phi2) <= 1e-13 * (1.0 + std::abs(phi2)));
    }
}

TEST_CASE("exp: Euler cases and the origin") {
    const EvalResult at_pik = builtin_exp().eval({0, 0, 0, M_PI});
    CHECK(close(at_pik.value, Quaternion::real(-1.0), 1e-15));

    const EvalResult at_zero = builtin_exp().eval({0, 0, 0, 0});
    CHECK(at_zero.value == Quaternion::real(1.0));
}

TEST_CASE("exp near the real axis agrees with the complex reference") {
    // exercises the small-v series kernels
    for (const double v : {0.0, 1e-12, 1e-7, 5e-5, 2e-4}) {
        const Quaternion p{0.5, v / 2.0, v / 2.0, std::sqrt(0.5) * v};
        const double vp = vec_norm(p);
        const Complex ref = std::exp(Complex{p.x, vp});
        const EvalResult r = builtin_exp().eval(p);
        CHECK(r.value.x == doctest::Approx(ref.real()).epsilon(1e-14));
        if (vp > 0.0) {
            const double kernel = ref.imag() / vp;
            CHECK(r.value.y == doctest::Approx(kernel * p.y).epsilon(1e-13));
            CHECK(r.value.z == doctest::Approx(kernel * p.z).epsilon(1e-13));
            CHECK(r.value.u == doctest::Approx(kernel * p.u).epsilon(1e-13));
        }
    }
}

TEST_CASE("Ln: principal values and branch handling") {
    const EvalResult at_j = builtin_ln().eval(Quaternion::unit_j());
    CHECK(close(at_j.value, {0, 0, M_PI / 2, 0}, 1e-15));

    const EvalResult at_one = builtin_ln().eval(Quaternion::real(1.0));
    CHECK(at_one.value == Quaternion{});

    CHECK_THROWS_AS(builtin_ln().eval(Quaternion::real(-1.0)), BranchCutError);
    CHECK_THROWS_AS(builtin_ln().eval(Quaternion{}), DomainError);
    // off the axis the cut is open: x < 0 with tiny |b| evaluates
    CHECK_NOTHROW(builtin_ln().eval(Quaternion{-1.0, 0, 1e-8, 0}));

    // exp(Ln(p)) = p away from the cut
    Rng rng(12);
    for (int i = 0; i < 200; ++i) {
        const Quaternion p = random_quat(rng);
        if (norm(p) < 0.1 || negative_axis_distance(p) < 0.1) continue;
        const Quaternion back = builtin_exp().eval(builtin_ln().eval(p).value).value;
        CHECK(close(back, p, 1e-12 * (1.0 + norm(p))));
    }
}

TEST_CASE("sin at a pure j argument") {
    const EvalResult r = builtin_sin().eval(Quaternion::unit_j());
    CHECK(close(r.value, {0, 0, std::sinh(1.0), 0}, 1e-15));
}

TEST_CASE("sin^2 + cos^2 = 1 pointwise") {
    Rng rng(13);
    const QFunction pyth = builtin_sin() * builtin_sin() + builtin_cos() * builtin_cos();
    for (int i = 0; i < 200; ++i) {
        const Quaternion p = random_quat(rng);
        const Quaternion v = pyth.eval(p).value;
        CHECK(close(v, Quaternion::real(1.0), 1e-11 * (1.0 + norm_sq(v))));
    }
}

TEST_CASE("restrict_to_complex") {
    const Complex e1i = restrict_to_complex(builtin_exp(), {1, 1});
    CHECK(std::abs(e1i - std::exp(Complex{1, 1})) <= 1e-14);

    CHECK(restrict_to_complex(builtin_powi(2), {0, 1}) == Complex{-1, 0});
    CHECK_THROWS_AS(restrict_to_complex(builtin_ln(), Complex{-1, 0}), BranchCutError);
    CHECK_THROWS_AS(restrict_to_complex(raw_conj(QFunction::var()), Complex{1, 0}),
                    UnsupportedNodeError);
}

TEST_CASE("complex reduction: phi2 vanishes and phi1 matches the standard functions") {
    Rng rng(14);
    int tested = 0;
    while (tested < 100) {
        const Complex xi{rng.uniform(-2, 2), rng.uniform(-2, 2)};
        if (std::abs(xi) < 0.1) continue;
        if (xi.real() <= 0.0 && std::abs(xi.imag()) < 0.1) continue;  // stay off the cut
        ++tested;
        const Quaternion p{xi.real(), xi.imag(), 0, 0};
        const struct {
            const QFunction* f;
            Complex ref;
        } cases[] = {
            {&builtin_set()[0].second, xi * xi},
            {&builtin_set()[1].second, xi * xi * xi},
            {&builtin_set()[2].second, std::exp(xi)},
            {&builtin_set()[3].second, std::log(xi)},
            {&builtin_set()[4].second, 1.0 / xi},
            {&builtin_set()[5].second, std::sin(xi)},
            {&builtin_set()[6].second, std::cos(xi)},
        };
        for (const auto& c : cases) {
            const EvalResult r = c.f->eval(p);
            CHECK(std::abs(r.phi2) <= 1e-14 * (1.0 + std::abs(r.phi1)));
            CHECK(std::abs(r.phi1 - c.ref) <= 1e-12 * std::abs(c.ref));
        }
    }
}

TEST_CASE("decomposition consistency: value == phi1 + phi2*j bit-for-bit") {
    Rng rng(15);
    for (int i = 0; i < 200; ++i) {
        const Quaternion p = random_quat(rng);
        for (const auto& [name, f] : builtin_set()) {
            EvalResult r;
            try {
                r = f.eval(p);
            } catch (const DomainError&) {
                continue;
            }
            CHECK(from_doubling(r.phi1, r.phi2) == r.value);
        }
    }
}

TEST_CASE("derivative table") {
    CHECK(format(builtin_powi(2).derivative()) == "2 * p");
    CHECK(format(builtin_powi(3).derivative()) == "3 * p^2");
    CHECK(format(builtin_exp().derivative()) == "exp(p)");
    CHECK(format(builtin_exp().derivative(3)) == "exp(p)");
    CHECK(format(builtin_ln().derivative()) == "recip(p)");
    CHECK(format(builtin_recip().derivative()) == "-p^-2");
    CHECK(format(builtin_recip().derivative(2)) == "2 * p^-3");
    CHECK(format(builtin_sin().derivative()) == "cos(p)");
    CHECK(format(builtin_cos().derivative()) == "-sin(p)");
}

TEST_CASE("chain rule through composition") {
    const QFunction f = builtin_exp().compose(builtin_powi(2));  // exp(p^2)
    CHECK(format(f) == "exp(p^2)");
    const QFunction d = f.derivative();
    // analytic: 2p * exp(p^2); compare by value
    Rng rng(16);
    for (int i = 0; i < 100; ++i) {
        const Quaternion p = random_quat(rng, -1.2, 1.2);
        const Quaternion expected =
            (QFunction::constant(2) * QFunction::var() * builtin_exp().compose(builtin_powi(2)))
                .eval(p)
                .value;
        CHECK(close(d.eval(p).value, expected, 1e-10 * (1.0 + norm(expected))));
    }
}

TEST_CASE("raw trees are rejected by holomorphy-dependent operations") {
    const QFunction raw = raw_conj(QFunction::var());
    CHECK_FALSE(raw.is_catalog());
    CHECK(builtin_powi(2).is_catalog());
    CHECK_THROWS_AS(raw.derivative(), UnsupportedNodeError);

    const QFunction tagged = mul_right(QFunction::var(),
                                       QFunction::quat_constant(Quaternion::unit_j()));
    CHECK_FALSE(tagged.is_catalog());
    CHECK_THROWS_AS(tagged.derivative(), UnsupportedNodeError);
}

TEST_CASE("raw conjugation evaluates to conj(p) exactly") {
    const QFunction raw = raw_conj(QFunction::var());
    Rng rng(17);
    for (int i = 0; i < 200; ++i) {
        const Quaternion p = random_quat(rng);
        CHECK(raw.eval(p).value == conj(p));
    }
}

TEST_CASE("side-tagged products evaluate in the tagged order") {
    const QFunction j = QFunction::quat_constant(Quaternion::unit_j());
    const Quaternion i = Quaternion::unit_i();
    CHECK(mul_right(QFunction::var(), j).eval(i).value == Quaternion::unit_i() * Quaternion::unit_j());
    CHECK(mul_left(QFunction::var(), j).eval(i).value == Quaternion::unit_j() * Quaternion::unit_i());
    // p*j vs j*p at p = i differ by exactly 2k
    const Quaternion diff = mul_right(QFunction::var(), j).eval(i).value -
                            mul_left(QFunction::var(), j).eval(i).value;
    CHECK(diff == Quaternion{0, 0, 0, 2});
}

TEST_CASE("exp at conjugate points gives conjugate values") {
    Rng rng(18);
    for (int i = 0; i < 200; ++i) {
        const Quaternion p = random_quat(rng);
        const Quaternion a = builtin_exp().eval(conj(p)).value;
        const Quaternion b = conj(builtin_exp().eval(p).value);
        CHECK(close(a, b, 1e-13 * (1.0 + norm(b))));
    }
}

TEST_CASE("singularities raise DomainError") {
    CHECK_THROWS_AS(builtin_recip().eval(Quaternion{}), DomainError);
    CHECK_THROWS_AS(builtin_powi(-2).eval(Quaternion{}), DomainError);
    CHECK_NOTHROW(builtin_powi(-2).eval(Quaternion{1e-8, 0, 0, 0}));
}
