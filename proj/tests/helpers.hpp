#pragma once

// Shared fixtures for the test binaries: seeded random matrices and a few
// comparison helpers. Everything is deterministic via explicit seeds.

#include <complex>
#include <random>
#include <vector>

#include "paradis/linalg.hpp"

namespace testutil {

using paradis::CMat;
using paradis::Cx;

inline CMat from_rows(int rows, int cols, std::initializer_list<Cx> entries) {
    CMat m = CMat::zeros(rows, cols);
    int idx = 0;
    for (const Cx& e : entries) {
        m(idx / cols, idx % cols) = e;
        ++idx;
    }
    return m;
}

inline CMat diag(std::initializer_list<Cx> entries) {
    const int d = static_cast<int>(entries.size());
    CMat m = CMat::zeros(d, d);
    int i = 0;
    for (const Cx& e : entries) {
        m(i, i) = e;
        ++i;
    }
    return m;
}

inline CMat random_complex(int rows, int cols, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    CMat m = CMat::zeros(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = Cx(g(rng), g(rng));
    return m;
}

inline CMat random_hermitian(int d, std::mt19937_64& rng) {
    return paradis::herm_part(random_complex(d, d, rng));
}

// Unitary via modified Gram-Schmidt on a random complex matrix.
inline CMat random_unitary(int d, std::mt19937_64& rng) {
    CMat m = random_complex(d, d, rng);
    for (int c = 0; c < d; ++c) {
        for (int prev = 0; prev < c; ++prev) {
            Cx dot = 0.0;
            for (int r = 0; r < d; ++r) dot += std::conj(m(r, prev)) * m(r, c);
            for (int r = 0; r < d; ++r) m(r, c) -= dot * m(r, prev);
        }
        double nrm = 0.0;
        for (int r = 0; r < d; ++r) nrm += std::norm(m(r, c));
        nrm = std::sqrt(nrm);
        for (int r = 0; r < d; ++r) m(r, c) /= nrm;
    }
    return m;
}

inline CMat random_density(int d, std::mt19937_64& rng) {
    const CMat g = random_complex(d, d, rng);
    CMat rho = paradis::matmul(g, paradis::adjoint(g));
    return paradis::scale(Cx(1.0 / paradis::trace(rho).real(), 0.0), rho);
}

inline CMat random_pure_density(int d, std::mt19937_64& rng) {
    const CMat v = random_complex(d, 1, rng);
    CMat rho = paradis::matmul(v, paradis::adjoint(v));
    return paradis::scale(Cx(1.0 / paradis::trace(rho).real(), 0.0), rho);
}

inline double dist(const CMat& a, const CMat& b) { return paradis::frob_norm(paradis::sub(a, b)); }

} // namespace testutil
