#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "helpers.hpp"
#include "paradis/error.hpp"
#include "paradis/subspace.hpp"
#include "paradis/synthesis.hpp"

using namespace paradis;
using testutil::diag;
using testutil::dist;
using testutil::from_rows;

namespace {

CMat kraus_gram(const KrausChannel& ch) {
    CMat acc = CMat::zeros(ch.dim_in, ch.dim_in);
    for (const CMat& k : ch.kraus) acc = add(acc, matmul(adjoint(k), k));
    return acc;
}

CMat apply_direct(const KrausChannel& ch, const CMat& rho) {
    CMat acc = CMat::zeros(ch.dim_out, ch.dim_out);
    for (const CMat& k : ch.kraus) acc = add(acc, matmul(matmul(k, rho), adjoint(k)));
    return acc;
}

OperatorSubspace random_span(int d, int dim, std::mt19937_64& rng) {
    std::vector<CMat> gens;
    gens.reserve(static_cast<size_t>(dim));
    for (int i = 0; i < dim; ++i) gens.push_back(testutil::random_complex(d, d, rng));
    return from_generators(gens);
}

} // namespace

TEST_CASE("synthesized channel pairs are complete and span the input space") {
    std::mt19937_64 rng(808);
    for (int trial = 0; trial < 12; ++trial) {
        const int d = 2 + int(rng() % 3);
        const int dim = 1 + int(rng() % 4);
        const OperatorSubspace s = random_span(d, dim, rng);
        const ChannelPair ch = channels_from_subspace(s);

        const int n = s.dim();
        CHECK(ch.e.dim_in == d);
        CHECK(ch.f.dim_in == d);
        CHECK(ch.e.dim_out == 2 * d * n);
        CHECK(static_cast<int>(ch.e.kraus.size()) == n);
        CHECK(static_cast<int>(ch.f.kraus.size()) == n);
        REQUIRE(static_cast<int>(ch.scale_factors.size()) == n);

        CHECK(dist(kraus_gram(ch.e), CMat::identity(d)) < 1e-12);
        CHECK(dist(kraus_gram(ch.f), CMat::identity(d)) < 1e-12);

        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const CMat cross = matmul(adjoint(ch.e.kraus[static_cast<size_t>(i)]),
                                          ch.f.kraus[static_cast<size_t>(j)]);
                if (i == j) {
                    CHECK(ch.scale_factors[static_cast<size_t>(j)] > 0.0);
                    const CMat expect =
                        scale(1.0 / (ch.scale_factors[static_cast<size_t>(j)] * n), s.basis[static_cast<size_t>(j)]);
                    CHECK(dist(cross, expect) < 1e-12);
                } else {
                    CHECK(frob_norm(cross) < 1e-12);
                }
            }

        const OperatorSubspace round = from_channel_pair(ch.e, ch.f);
        REQUIRE(round.dim() == s.dim());
        for (const CMat& b : round.basis) CHECK(contains(s, b, 1e-8));
        for (const CMat& b : s.basis) CHECK(contains(round, b, 1e-8));
    }
}

TEST_CASE("discrimination_input purifies with the ancilla leading") {
    std::mt19937_64 rng(909);
    for (int d : {2, 3, 4}) {
        const CMat rho = testutil::random_density(d, rng);
        const CMat phi = discrimination_input(rho);
        REQUIRE(phi.rows == d * d);
        REQUIRE(phi.cols == 1);

        double norm2 = 0.0;
        for (int i = 0; i < phi.rows; ++i) norm2 += std::norm(phi(i, 0));
        CHECK(std::abs(norm2 - 1.0) < 1e-10);

        // partial trace over the leading ancilla returns rho
        CMat red = CMat::zeros(d, d);
        for (int q = 0; q < d; ++q)
            for (int qq = 0; qq < d; ++qq) {
                Cx acc = 0.0;
                for (int i = 0; i < d; ++i) acc += phi(i * d + q, 0) * std::conj(phi(i * d + qq, 0));
                red(q, qq) = acc;
            }
        CHECK(dist(red, rho) < 1e-9);

        // expectation identity against a random observable
        const CMat a = testutil::random_complex(d, d, rng);
        const CMat lifted = kron(CMat::identity(d), a);
        const CMat val = matmul(matmul(adjoint(phi), lifted), phi);
        CHECK(std::abs(val(0, 0) - trace(matmul(a, rho))) < 1e-10);
    }
}

TEST_CASE("discrimination_input rejects non densities") {
    CHECK_THROWS_AS(discrimination_input(from_rows(2, 2, {0, 1, 0, 0})), Error);
    CHECK_THROWS_AS(discrimination_input(diag({Cx(1, 0), Cx(-1, 0)})), Error); // negative eigenvalue
    CHECK_THROWS_AS(discrimination_input(diag({Cx(1, 0), Cx(1, 0)})), Error);  // trace 2
    try {
        discrimination_input(diag({Cx(1, 0), Cx(1, 0)}));
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotDensityOperator);
    }
}

TEST_CASE("apply_parallel matches the direct Kraus sum") {
    std::mt19937_64 rng(606);
    const KrausChannel flip = KrausChannel::from_kraus(
        {scale(std::sqrt(0.7), CMat::identity(2)), scale(std::sqrt(0.3), from_rows(2, 2, {0, 1, 1, 0}))});

    SUBCASE("single use without ancilla") {
        const CMat rho = testutil::random_density(2, rng);
        CHECK(dist(apply_parallel(flip, 1, rho), apply_direct(flip, rho)) < 1e-12);
    }
    SUBCASE("two uses factorize on product inputs") {
        const CMat r1 = testutil::random_density(2, rng);
        const CMat r2 = testutil::random_density(2, rng);
        const CMat got = apply_parallel(flip, 2, kron(r1, r2));
        const CMat expect = kron(apply_direct(flip, r1), apply_direct(flip, r2));
        CHECK(dist(got, expect) < 1e-12);
    }
    SUBCASE("a leading factor is treated as ancilla") {
        const CMat joint = testutil::random_density(6, rng); // 3 (x) 2
        const CMat got = apply_parallel(flip, 1, joint);
        CMat expect = CMat::zeros(6, 6);
        for (const CMat& k : flip.kraus) {
            const CMat lifted = kron(CMat::identity(3), k);
            expect = add(expect, matmul(matmul(lifted, joint), adjoint(lifted)));
        }
        CHECK(dist(got, expect) < 1e-12);
    }
    SUBCASE("trace is preserved") {
        const CMat rho = testutil::random_density(4, rng);
        const CMat out = apply_parallel(flip, 2, rho);
        CHECK(std::abs(trace(out).real() - 1.0) < 1e-12);
    }
    SUBCASE("dimension and cap guards") {
        CHECK_THROWS_AS(apply_parallel(flip, 1, testutil::random_density(3, rng)), Error);
        CHECK_THROWS_AS(apply_parallel(flip, 2, testutil::random_density(4, rng), 3), Error);
        try {
            apply_parallel(flip, 2, testutil::random_density(4, rng), 3);
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::CapExceeded);
        }
    }
}

TEST_CASE("output_overlap is the real trace product") {
    const CMat a = diag({Cx(1, 0), Cx(0, 0)});
    const CMat b = diag({Cx(0, 0), Cx(1, 0)});
    CHECK(output_overlap(a, b) == 0.0);
    CHECK(std::abs(output_overlap(a, a) - 1.0) < 1e-15);

    std::mt19937_64 rng(505);
    const CMat rho = testutil::random_density(3, rng);
    const CMat sig = testutil::random_density(3, rng);
    CHECK(std::abs(output_overlap(rho, sig) - trace(matmul(rho, sig)).real()) < 1e-12);

    CHECK_THROWS_AS(output_overlap(rho, testutil::random_density(2, rng)), Error);
}

TEST_CASE("one traceless direction is settled by a single use") {
    const CMat sz = diag({Cx(1, 0), Cx(-1, 0)});
    const OperatorSubspace s = from_generators({sz});
    const ChannelPair ch = channels_from_subspace(s);

    const CMat mixed = scale(0.5, CMat::identity(2));
    const CMat phi = discrimination_input(mixed);
    const CMat input = matmul(phi, adjoint(phi));
    const CMat out_e = apply_parallel(ch.e, 1, input);
    const CMat out_f = apply_parallel(ch.f, 1, input);
    CHECK(output_overlap(out_e, out_f) <= 1e-10);
}

TEST_CASE("the rotated diagonal needs exactly two uses") {
    const OperatorSubspace s = from_generators({diag({Cx(1, 0), Cx(0, 1)})});
    const ChannelPair ch = channels_from_subspace(s);

    // two copies: diag(1/2, 0, 0, 1/2) is orthogonal to the square
    const CMat witness = diag({Cx(0.5, 0), Cx(0, 0), Cx(0, 0), Cx(0.5, 0)});
    const CMat phi = discrimination_input(witness);
    const CMat input = matmul(phi, adjoint(phi));
    const CMat out_e = apply_parallel(ch.e, 2, input);
    const CMat out_f = apply_parallel(ch.f, 2, input);
    CHECK(output_overlap(out_e, out_f) <= 1e-10);

    // one copy: every input keeps a visible overlap
    std::mt19937_64 rng(404);
    double least = 1.0;
    for (int trial = 0; trial < 50; ++trial) {
        const CMat rho = testutil::random_density(2, rng);
        const CMat p = discrimination_input(rho);
        const CMat in1 = matmul(p, adjoint(p));
        least = std::min(least, output_overlap(apply_parallel(ch.e, 1, in1), apply_parallel(ch.f, 1, in1)));
    }
    CHECK(least > 1e-4);
}
