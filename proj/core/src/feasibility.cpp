#include "paradis/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace paradis {

namespace {

constexpr double kDropTol = 1e-12;     // constraint parts below this norm are zero
constexpr double kGramCutoff = 1e-10;  // relative pseudo-inverse cutoff
constexpr double kCertThreshold = 1e-9;
constexpr double kAscentEarlyExit = 1e-6;

// Affine projector onto { X Hermitian : tr(X h_i) = 0, tr X = 1 },
// precomputed from the pseudo-inverted constraint Gram matrix.
struct AffineProjector {
    std::vector<CMat> h;   // constraints plus the identity row (last)
    std::vector<double> b; // targets: zeros then 1
    CMat gram_pinv;        // (k+1) x (k+1), real

    explicit AffineProjector(const std::vector<CMat>& constraints, int d) {
        h = constraints;
        h.push_back(CMat::identity(d));
        b.assign(h.size(), 0.0);
        b.back() = 1.0;

        const int k = static_cast<int>(h.size());
        CMat gram(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = i; j < k; ++j) {
                const double g = hs_inner(h[static_cast<size_t>(i)], h[static_cast<size_t>(j)]).real();
                gram(i, j) = g;
                gram(j, i) = g;
            }
        EigDecomposition eig = eigh(gram);
        const double cut = kGramCutoff * std::max(1.0, eig.values.back());
        gram_pinv = CMat::zeros(k, k);
        for (int t = 0; t < k; ++t) {
            if (eig.values[t] <= cut) continue;
            const double inv = 1.0 / eig.values[t];
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j)
                    gram_pinv(i, j) += inv * eig.vectors(i, t) * std::conj(eig.vectors(j, t));
        }
    }

    CMat project(const CMat& x) const {
        const int k = static_cast<int>(h.size());
        std::vector<double> v(static_cast<size_t>(k));
        for (int i = 0; i < k; ++i)
            v[static_cast<size_t>(i)] = hs_inner(h[static_cast<size_t>(i)], x).real() - b[static_cast<size_t>(i)];
        CMat out = x;
        for (int i = 0; i < k; ++i) {
            double ci = 0.0;
            for (int j = 0; j < k; ++j) ci += gram_pinv(i, j).real() * v[static_cast<size_t>(j)];
            if (ci != 0.0) out = sub(out, scale(ci, h[static_cast<size_t>(i)]));
        }
        return out;
    }

    // max residual of the homogeneous rows (identity row excluded)
    double residual(const CMat& x) const {
        double r = 0.0;
        for (size_t i = 0; i + 1 < h.size(); ++i)
            r = std::max(r, std::abs(hs_inner(h[i], x).real()));
        return r;
    }
};

struct AscentBudget {
    int starts;
    int iters;
};

// One projected supergradient ascent from c0; returns best c found.
std::pair<double, std::vector<double>> ascend(const std::vector<CMat>& h,
                                              std::vector<double> c, int iters) {
    const int k = static_cast<int>(h.size());
    const int d = h.front().rows;
    double nrm = 0.0;
    for (double x : c) nrm += x * x;
    if (nrm <= 0.0) return {-1e300, c};
    nrm = std::sqrt(nrm);
    for (double& x : c) x /= nrm;

    double best_f = -1e300;
    std::vector<double> best_c = c;
    for (int t = 1; t <= iters; ++t) {
        CMat combo = CMat::zeros(d, d);
        for (int i = 0; i < k; ++i) combo = add(combo, scale(c[static_cast<size_t>(i)], h[static_cast<size_t>(i)]));
        EigDecomposition eig = eigh(combo);
        const double f = eig.values.front();
        if (f > best_f) {
            best_f = f;
            best_c = c;
            if (f > kAscentEarlyExit) break;
        }
        // supergradient of lambda_min at the bottom eigenvector
        std::vector<double> g(static_cast<size_t>(k));
        for (int i = 0; i < k; ++i) {
            Cx acc = 0.0;
            for (int r = 0; r < d; ++r)
                for (int s = 0; s < d; ++s)
                    acc += std::conj(eig.vectors(r, 0)) * h[static_cast<size_t>(i)](r, s) * eig.vectors(s, 0);
            g[static_cast<size_t>(i)] = acc.real();
        }
        const double step = 0.5 / std::sqrt(static_cast<double>(t));
        double n2 = 0.0;
        for (int i = 0; i < k; ++i) {
            c[static_cast<size_t>(i)] += step * g[static_cast<size_t>(i)];
            n2 += c[static_cast<size_t>(i)] * c[static_cast<size_t>(i)];
        }
        if (n2 <= 0.0) break;
        n2 = std::sqrt(n2);
        for (double& x : c) x /= n2;
    }
    return {best_f, best_c};
}

PdSearchResult pd_search(const std::vector<CMat>& h, const FeasibilityOptions& opts,
                         const AscentBudget& budget) {
    PdSearchResult out;
    if (h.empty()) return out;
    const int k = static_cast<int>(h.size());
    const int d = h.front().rows;

    std::vector<std::vector<double>> starts;

    // combination closest to the identity, via the constraint Gram
    {
        CMat gram(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = i; j < k; ++j) {
                const double g = hs_inner(h[static_cast<size_t>(i)], h[static_cast<size_t>(j)]).real();
                gram(i, j) = g;
                gram(j, i) = g;
            }
        std::vector<double> t(static_cast<size_t>(k));
        for (int i = 0; i < k; ++i) t[static_cast<size_t>(i)] = trace(h[static_cast<size_t>(i)]).real();
        EigDecomposition eig = eigh(gram);
        const double cut = kGramCutoff * std::max(1.0, eig.values.back());
        std::vector<double> c(static_cast<size_t>(k), 0.0);
        for (int m = 0; m < k; ++m) {
            if (eig.values[m] <= cut) continue;
            double proj = 0.0;
            for (int i = 0; i < k; ++i) proj += eig.vectors(i, m).real() * t[static_cast<size_t>(i)];
            proj /= eig.values[m];
            for (int i = 0; i < k; ++i) c[static_cast<size_t>(i)] += proj * eig.vectors(i, m).real();
        }
        double nrm = 0.0;
        for (double x : c) nrm += x * x;
        if (nrm > 1e-20) starts.push_back(std::move(c));
    }
    for (int i = 0; i < k; ++i) {
        std::vector<double> c(static_cast<size_t>(k), 0.0);
        c[static_cast<size_t>(i)] = 1.0;
        starts.push_back(c);
        c[static_cast<size_t>(i)] = -1.0;
        starts.push_back(std::move(c));
    }
    std::mt19937_64 rng(opts.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int s = 0; s < budget.starts; ++s) {
        std::vector<double> c(static_cast<size_t>(k));
        for (double& x : c) x = gauss(rng);
        starts.push_back(std::move(c));
    }

    double best_f = -1e300;
    std::vector<double> best_c;
    for (const std::vector<double>& c0 : starts) {
        auto [f, c] = ascend(h, c0, budget.iters);
        if (f > best_f) {
            best_f = f;
            best_c = c;
        }
        if (best_f > kAscentEarlyExit) break;
    }

    out.coefficients = best_c;
    out.lambda_min = best_f;
    out.found = best_f > kCertThreshold;
    if (out.found) {
        // recompute on the returned coefficients so the reported value
        // matches them exactly
        CMat combo = CMat::zeros(d, d);
        for (int i = 0; i < k; ++i)
            combo = add(combo, scale(best_c[static_cast<size_t>(i)], h[static_cast<size_t>(i)]));
        out.lambda_min = eigh(combo).values.front();
        out.found = out.lambda_min > kCertThreshold;
    }
    return out;
}

void require_constraints(const std::vector<CMat>& constraints, int dim_cap) {
    if (constraints.empty())
        throw Error(ErrorKind::InvalidArgument, "density_in_complement: no constraints given");
    const int d = constraints.front().rows;
    if (d < 1 || constraints.front().cols != d)
        throw Error(ErrorKind::DimensionMismatch, "density_in_complement: constraints must be square");
    if (d > dim_cap)
        throw Error(ErrorKind::CapExceeded,
                    "density_in_complement: dimension " + std::to_string(d) + " exceeds cap " +
                        std::to_string(dim_cap));
    for (const CMat& m : constraints)
        if (m.rows != d || m.cols != d)
            throw Error(ErrorKind::DimensionMismatch, "density_in_complement: constraint shapes differ");
}

} // namespace

const char* feasibility_status_name(FeasibilityStatus s) noexcept {
    switch (s) {
        case FeasibilityStatus::Witness: return "witness";
        case FeasibilityStatus::Certificate: return "certificate";
        case FeasibilityStatus::Indeterminate: return "indeterminate";
    }
    return "unknown";
}

std::vector<CMat> hermitian_split(const std::vector<CMat>& constraints) {
    std::vector<CMat> out;
    for (const CMat& m : constraints) {
        CMat hp = herm_part(m);
        CMat hm = scale(-1.0, skew_part(m)); // i(m - m^dagger)/2
        for (CMat* part : {&hp, &hm}) {
            const double nrm = frob_norm(*part);
            if (nrm <= kDropTol) continue;
            out.push_back(scale(1.0 / nrm, *part));
        }
    }
    return out;
}

PdSearchResult pd_in_span(const std::vector<CMat>& hermitians, const FeasibilityOptions& opts) {
    if (hermitians.empty())
        throw Error(ErrorKind::InvalidArgument, "pd_in_span: no matrices given");
    std::vector<CMat> h;
    h.reserve(hermitians.size());
    for (const CMat& m : hermitians) h.push_back(herm_part(m)); // symmetrize defensively
    return pd_search(h, opts, {opts.starts, 400});
}

FeasibilityOutcome density_in_complement(const std::vector<CMat>& constraints,
                                         const FeasibilityOptions& opts) {
    require_constraints(constraints, opts.dim_cap);
    const int d = constraints.front().rows;

    FeasibilityOutcome out;
    const std::vector<CMat> h = hermitian_split(constraints);
    if (h.empty()) {
        // all constraints vanish; the maximally mixed state is a witness
        out.status = FeasibilityStatus::Witness;
        out.witness = scale(1.0 / d, CMat::identity(d));
        return out;
    }

    double raw_scale = 1.0;
    for (const CMat& m : constraints) raw_scale = std::max(raw_scale, frob_norm(m));
    const double aff_tol = 0.5 * opts.tol / raw_scale;

    // cheap certificate pass before committing to the projection loop
    PdSearchResult quick = pd_search(h, opts, {std::min(opts.starts, 4), 120});
    out.dual_supremum = quick.lambda_min;
    if (quick.found) {
        out.status = FeasibilityStatus::Certificate;
        out.certificate = quick.coefficients;
        out.certificate_lambda_min = quick.lambda_min;
        return out;
    }

    AffineProjector aff(h, d);
    CMat x = scale(1.0 / d, CMat::identity(d));
    CMat p = CMat::zeros(d, d);
    CMat q = CMat::zeros(d, d);
    double best_res = 1e300;
    int since_improve = 0;
    for (int it = 0; it < opts.max_iter; ++it) {
        CMat y = psd_project(herm_part(add(x, p)));
        p = sub(add(x, p), y);
        const double res = std::max(aff.residual(y), std::abs(trace(y).real() - 1.0));
        out.iterations = it + 1;
        out.projection_residual = res;
        if (res <= aff_tol) {
            CMat w = psd_project(y);
            const double tr = trace(w).real();
            if (tr > 0.0) w = scale(1.0 / tr, w);
            out.status = FeasibilityStatus::Witness;
            out.witness = std::move(w);
            return out;
        }
        if (res < best_res * (1.0 - 1e-4)) {
            best_res = res;
            since_improve = 0;
        } else if (++since_improve > 2000) {
            break; // stalled well above tolerance
        }
        x = aff.project(add(y, q));
        q = sub(add(y, q), x);
    }

    PdSearchResult full = pd_search(h, opts, {opts.starts, 400});
    out.dual_supremum = std::max(out.dual_supremum, full.lambda_min);
    if (full.found) {
        out.status = FeasibilityStatus::Certificate;
        out.certificate = full.coefficients;
        out.certificate_lambda_min = full.lambda_min;
        return out;
    }

    out.status = FeasibilityStatus::Indeterminate;
    return out;
}

FeasibilityOutcome hermitian_space_decision(const OperatorSubspace& s,
                                            const FeasibilityOptions& opts) {
    if (!is_hermitian_closed(s))
        throw Error(ErrorKind::NotHermitianClosed,
                    "hermitian_space_decision: subspace is not closed under adjoints");
    const std::vector<CMat> herms = hermitian_elements(s);
    if (herms.empty()) {
        // Hermitian-closed with no Hermitian element means S = {0};
        // from_generators excludes that, but stay safe.
        FeasibilityOutcome out;
        out.status = FeasibilityStatus::Witness;
        out.witness = scale(1.0 / s.d, CMat::identity(s.d));
        return out;
    }
    std::vector<CMat> constraints;
    constraints.reserve(herms.size());
    for (const CMat& m : herms) constraints.push_back(m);
    // The solve runs against the unit-norm hermitian slice, but a witness
    // must re-verify against the raw generators. Expanding a generator over
    // the slice picks up a factor of its norm times sqrt(2 * slice size),
    // so tighten the tolerance by that slack before handing off.
    double gscale = 1.0;
    for (const CMat& g : s.generators) gscale = std::max(gscale, frob_norm(g));
    FeasibilityOptions tight = opts;
    tight.tol = opts.tol / (gscale * std::sqrt(2.0 * double(herms.size())));
    return density_in_complement(constraints, tight);
}

std::vector<ParallelCheckRow> parallel_check(const OperatorSubspace& s, int n_max,
                                             const FeasibilityOptions& opts) {
    if (n_max < 1)
        throw Error(ErrorKind::InvalidArgument, "parallel_check: n_max must be >= 1");
    std::vector<ParallelCheckRow> rows;
    for (int n = 1; n <= n_max; ++n) {
        ParallelCheckRow row;
        row.copies = n;
        row.outcome = density_in_complement(tensor_power_generators(s, n), opts);
        const bool stop = row.outcome.status == FeasibilityStatus::Witness;
        rows.push_back(std::move(row));
        if (stop) break;
    }
    return rows;
}

} // namespace paradis
