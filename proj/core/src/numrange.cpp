#include "paradis/numrange.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "paradis/error.hpp"

namespace paradis {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kGridInitial = 2048;
constexpr int kGridLimit = 1 << 20;
constexpr double kPositiveTol = 1e-12;  // support values above this count as positive
constexpr double kBoundaryTol = 1e-9;   // |theta| below this collapses to the never case
constexpr double kBisectTol = 1e-11;    // arc endpoint resolution
constexpr double kSnapTol = 1e-9;       // integer snap for pi / theta

double support_of(const CMat& ahat, double theta) {
    const Cx phase = std::exp(Cx(0.0, -theta));
    const CMat h = herm_part(scale(phase, ahat));
    return eigh(h).values.front();
}

struct ArcScan {
    FieldAngleReport report;
    bool has_arc = false;   // positive set nonempty
    double axis = 0.0;      // direction of the arc midpoint (cone axis)
};

// Measures the positive arc around a direction theta_pos where
// h(theta_pos) > 0. The positive set is a single open arc, so each
// endpoint is bracketed by outward steps and then bisected.
void measure_arc(const CMat& ahat, double theta_pos, double step, ArcScan* out) {
    auto h = [&](double t) { return support_of(ahat, t); };
    double offset[2] = {0.0, 0.0}; // left, right distance from theta_pos
    for (int side = 0; side < 2; ++side) {
        const double dir = side == 0 ? -1.0 : 1.0;
        double in = 0.0;
        double outr = step;
        int guard = 0;
        while (h(theta_pos + dir * outr) > kPositiveTol) {
            in = outr;
            outr += step;
            if (++guard > 2 * kGridLimit) throw Error(ErrorKind::InvalidArgument, "support arc fails to close");
        }
        while (outr - in > kBisectTol) {
            const double mid = 0.5 * (in + outr);
            (h(theta_pos + dir * mid) > kPositiveTol ? in : outr) = mid;
        }
        offset[side] = 0.5 * (in + outr);
    }
    const double measure = offset[0] + offset[1];
    out->has_arc = true;
    out->axis = theta_pos + 0.5 * (offset[1] - offset[0]);
    double theta = kPi - measure;
    if (theta <= std::max(kBoundaryTol, 4 * kBisectTol)) {
        // Arc measure within tolerance of pi: the cone closes onto a half
        // plane and no finite copy count separates anything.
        out->report.theta = 0.0;
        out->report.classification = ConeClass::PointedCone;
        out->report.zero_in_range = false;
        out->report.optimal_n = std::nullopt;
        return;
    }
    out->report.theta = theta;
    out->report.classification = ConeClass::PointedCone;
    out->report.zero_in_range = false;
    const double ratio = kPi / theta;
    const double snapped = std::round(ratio);
    const int n = (std::abs(ratio - snapped) <= kSnapTol)
                      ? static_cast<int>(snapped)
                      : static_cast<int>(std::ceil(ratio));
    out->report.optimal_n = std::max(1, n);
}

// True when a is a unit-phase multiple of a Hermitian operator, which
// confines W(a) to a line through the origin.
bool is_line_operator(const CMat& a) {
    const double nrm2 = std::real(hs_inner(a, a));
    if (nrm2 <= 0.0) return false;
    const Cx c = hs_inner(a, adjoint(a)) / nrm2; // minimizes |adj(a) - c a|
    const CMat dev = sub(adjoint(a), scale(c, a));
    return frob_norm(dev) <= 1e-10 * std::sqrt(nrm2);
}

ArcScan scan_field_angle(const CMat& a) {
    if (!a.square()) throw Error(ErrorKind::DimensionMismatch, "field angle needs a square matrix");
    const double nrm = frob_norm(a);
    if (nrm == 0.0) throw Error(ErrorKind::ZeroMatrix, "field angle of the zero matrix");
    const CMat ahat = scale(Cx(1.0 / spectral_norm(a), 0.0), a);

    ArcScan out;
    // Midpoint samples of kGridInitial equal intervals. The normalized
    // support function is 1-Lipschitz in theta, so an interval of width w
    // whose midpoint value stays below -w/2 cannot cross zero.
    struct Interval {
        double mid;
        double width;
        double value;
    };
    std::vector<Interval> live;
    double width = 2 * kPi / kGridInitial;
    for (int k = 0; k < kGridInitial; ++k) {
        const double mid = (k + 0.5) * width;
        const double v = support_of(ahat, mid);
        if (v > kPositiveTol) {
            measure_arc(ahat, mid, width, &out);
            return out;
        }
        if (v > -0.5 * width) live.push_back({mid, width, v});
    }
    while (!live.empty() && width > 2 * kPi / kGridLimit) {
        width *= 0.5;
        std::vector<Interval> next;
        next.reserve(2 * live.size());
        for (const Interval& iv : live) {
            for (int s = -1; s <= 1; s += 2) {
                const double mid = iv.mid + s * 0.25 * iv.width;
                const double v = support_of(ahat, mid);
                if (v > kPositiveTol) {
                    measure_arc(ahat, mid, width, &out);
                    return out;
                }
                if (v > -0.5 * width) next.push_back({mid, width, v});
            }
        }
        live.swap(next);
    }

    out.has_arc = false;
    if (live.empty()) {
        // Every direction is certified strictly negative: 0 interior.
        out.report.theta = 2 * kPi;
        out.report.classification = ConeClass::FullPlane;
    } else {
        // The support function touches zero but never turns positive at
        // the resolution limit: 0 on the boundary of W(a).
        out.report.theta = kPi;
        out.report.classification = is_line_operator(a) ? ConeClass::DegenerateLine : ConeClass::HalfPlane;
    }
    out.report.zero_in_range = true;
    out.report.optimal_n = 1;
    return out;
}

// ------------------------------------------------------------------
// Witness for 0 in W(a): a unit vector psi with <psi|a|psi> = 0.

struct RayleighPair {
    CMat h; // Hermitian part of the rotated operator
    CMat g; // skew part (Hermitian)
};

void normalize_vec(std::vector<Cx>* psi) {
    double n2 = 0.0;
    for (const Cx& c : *psi) n2 += std::norm(c);
    const double inv = 1.0 / std::sqrt(n2);
    for (Cx& c : *psi) c *= inv;
}

// Column j of m applied conceptually: psi = cols(i) + w * cols(j).
std::vector<Cx> combine_columns(const CMat& cols, int i, int j, Cx w) {
    const int d = cols.rows;
    std::vector<Cx> psi(d);
    for (int r = 0; r < d; ++r) psi[r] = cols(r, i) + w * cols(r, j);
    normalize_vec(&psi);
    return psi;
}

bool check_zero_vector(const CMat& a, const std::vector<Cx>& psi, double scale_tol, std::vector<Cx>* best,
                       double* best_val) {
    const int d = a.rows;
    Cx acc = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) acc += std::conj(psi[i]) * a(i, j) * psi[j];
    const double v = std::abs(acc);
    if (v < *best_val) {
        *best_val = v;
        *best = psi;
    }
    return v <= scale_tol;
}

// Searches for psi with both Rayleigh quotients zero. The skew part g is
// diagonalized; eigenvector pairs with opposite-sign eigenvalues lambda_i
// < 0 < lambda_j give a one-parameter family psi = x_i + r e^{i phi} x_j
// (r^2 = -lambda_i / lambda_j) on which <g> vanishes identically, and the
// phase phi is solved against <h>. Zero eigenvalues of g are handled by
// compressing h onto the kernel.
bool try_pair_witness(const CMat& a, const RayleighPair& rot, double scale_tol, std::vector<Cx>* best,
                      double* best_val) {
    const EigDecomposition eg = eigh(rot.g);
    const int d = rot.g.rows;
    const double lscale = std::max(std::abs(eg.values.front()), std::abs(eg.values.back()));
    const double ztol = std::max(1e-12, 1e-10 * lscale);

    std::vector<int> kernel, neg, pos;
    for (int i = 0; i < d; ++i) {
        if (std::abs(eg.values[i]) <= ztol)
            kernel.push_back(i);
        else if (eg.values[i] < 0)
            neg.push_back(i);
        else
            pos.push_back(i);
    }

    if (!kernel.empty()) {
        const int k = static_cast<int>(kernel.size());
        CMat hc = CMat::zeros(k, k);
        for (int p = 0; p < k; ++p)
            for (int q = 0; q < k; ++q) {
                Cx acc = 0.0;
                for (int r = 0; r < d; ++r)
                    for (int s = 0; s < d; ++s)
                        acc += std::conj(eg.vectors(r, kernel[p])) * rot.h(r, s) * eg.vectors(s, kernel[q]);
                hc(p, q) = acc;
            }
        const EigDecomposition eh = eigh(herm_part(hc));
        const double lo = eh.values.front();
        const double hi = eh.values.back();
        auto lift = [&](const std::vector<Cx>& u) {
            std::vector<Cx> psi(d, 0.0);
            for (int p = 0; p < k; ++p)
                for (int r = 0; r < d; ++r) psi[r] += u[p] * eg.vectors(r, kernel[p]);
            normalize_vec(&psi);
            return psi;
        };
        auto column_of = [&](int idx) {
            std::vector<Cx> u(k);
            for (int p = 0; p < k; ++p) u[p] = eh.vectors(p, idx);
            return u;
        };
        const double htol = std::max(1e-12, 1e-10 * std::max(std::abs(lo), std::abs(hi)));
        if (std::abs(lo) <= htol) {
            if (check_zero_vector(a, lift(column_of(0)), scale_tol, best, best_val)) return true;
        }
        if (std::abs(hi) <= htol) {
            if (check_zero_vector(a, lift(column_of(k - 1)), scale_tol, best, best_val)) return true;
        }
        if (lo < -htol && hi > htol) {
            const double r = std::sqrt(-lo / hi);
            std::vector<Cx> u(k);
            for (int p = 0; p < k; ++p) u[p] = eh.vectors(p, 0) + r * eh.vectors(p, k - 1);
            if (check_zero_vector(a, lift(u), scale_tol, best, best_val)) return true;
        }
    }

    // Opposite-sign pairs of g, extremes first.
    std::sort(neg.begin(), neg.end(), [&](int x, int y) { return eg.values[x] < eg.values[y]; });
    std::sort(pos.begin(), pos.end(), [&](int x, int y) { return eg.values[x] > eg.values[y]; });
    for (int i : neg)
        for (int j : pos) {
            const double r = std::sqrt(-eg.values[i] / eg.values[j]);
            double hii = 0.0, hjj = 0.0;
            Cx m = 0.0;
            for (int p = 0; p < d; ++p)
                for (int q = 0; q < d; ++q) {
                    const Cx hp = rot.h(p, q);
                    hii += std::real(std::conj(eg.vectors(p, i)) * hp * eg.vectors(q, i));
                    hjj += std::real(std::conj(eg.vectors(p, j)) * hp * eg.vectors(q, j));
                    m += std::conj(eg.vectors(p, i)) * hp * eg.vectors(q, j);
                }
            const double h0 = hii + r * r * hjj;
            const double rim = 2 * r * std::abs(m);
            if (rim <= 1e-14) {
                if (std::abs(h0) <= 1e-11 * std::max(1.0, std::abs(hii) + std::abs(hjj))) {
                    if (check_zero_vector(a, combine_columns(eg.vectors, i, j, Cx(r, 0.0)), scale_tol, best,
                                          best_val))
                        return true;
                }
                continue;
            }
            const double c = -h0 / rim;
            if (std::abs(c) > 1.0 + 1e-12) continue;
            const double phi = -std::arg(m) + std::acos(std::clamp(c, -1.0, 1.0));
            const Cx w = r * std::exp(Cx(0.0, phi));
            if (check_zero_vector(a, combine_columns(eg.vectors, i, j, w), scale_tol, best, best_val)) return true;
        }
    return false;
}

// Alternating projection fallback: project a random state onto the pair
// of affine constraints <h> = <g> = 0 intersected with the psd cone.
bool try_projection_witness(const CMat& a, double scale_tol, CMat* rho_out) {
    const int d = a.rows;
    std::vector<CMat> cons;
    const CMat h = herm_part(a);
    const CMat g = skew_part(a);
    if (frob_norm(h) > 1e-12) cons.push_back(scale(Cx(1.0 / frob_norm(h), 0.0), h));
    if (frob_norm(g) > 1e-12) cons.push_back(scale(Cx(1.0 / frob_norm(g), 0.0), g));
    if (cons.empty()) return false;

    const int m = static_cast<int>(cons.size());
    // Gram of {cons..., I} for the affine projection (trace pinned to 1).
    const int mm = m + 1;
    std::vector<std::vector<double>> gram(mm, std::vector<double>(mm));
    auto inner_of = [&](int i, int j) {
        const CMat& x = i < m ? cons[i] : CMat::identity(d);
        const CMat& y = j < m ? cons[j] : CMat::identity(d);
        return std::real(hs_inner(x, y));
    };
    for (int i = 0; i < mm; ++i)
        for (int j = 0; j < mm; ++j) gram[i][j] = inner_of(i, j);
    CMat gmat = CMat::zeros(mm, mm);
    for (int i = 0; i < mm; ++i)
        for (int j = 0; j < mm; ++j) gmat(i, j) = gram[i][j];
    const EigDecomposition ge = eigh(gmat);
    const double gcut = 1e-10 * std::max(1.0, ge.values.back());

    auto affine_project = [&](const CMat& x) {
        std::vector<double> r(mm);
        for (int i = 0; i < mm; ++i) {
            const CMat& ci = i < m ? cons[i] : CMat::identity(d);
            r[i] = std::real(hs_inner(ci, x)) - (i == m ? 1.0 : 0.0);
        }
        // c = pinv(gram) r via the eigendecomposition
        std::vector<double> c(mm, 0.0);
        for (int k = 0; k < mm; ++k) {
            if (ge.values[k] <= gcut) continue;
            double dot = 0.0;
            for (int i = 0; i < mm; ++i) dot += std::real(ge.vectors(i, k)) * r[i];
            dot /= ge.values[k];
            for (int i = 0; i < mm; ++i) c[i] += std::real(ge.vectors(i, k)) * dot;
        }
        CMat y = x;
        for (int i = 0; i < mm; ++i) {
            const CMat ci = i < m ? cons[i] : CMat::identity(d);
            y = sub(y, scale(Cx(c[i], 0.0), ci));
        }
        return y;
    };

    CMat x = scale(Cx(1.0 / d, 0.0), CMat::identity(d));
    CMat p = CMat::zeros(d, d);
    CMat q = CMat::zeros(d, d);
    for (int it = 0; it < 20000; ++it) {
        const CMat y = psd_project(herm_part(add(x, p)));
        p = sub(add(x, p), y);
        double resid = 0.0;
        for (const CMat& ci : cons) resid = std::max(resid, std::abs(std::real(hs_inner(ci, y))));
        const double tr_err = std::abs(std::real(trace(y)) - 1.0);
        if (resid <= 1e-12 + 0.2 * scale_tol / std::max(1.0, frob_norm(a)) && tr_err <= 1e-9) {
            CMat rho = psd_project(herm_part(y));
            const double tr = std::real(trace(rho));
            if (tr <= 1e-12) return false;
            rho = scale(Cx(1.0 / tr, 0.0), rho);
            if (std::abs(hs_inner(adjoint(a), rho)) <= scale_tol) {
                *rho_out = rho;
                return true;
            }
        }
        x = affine_project(add(y, q));
        q = sub(add(y, q), x);
    }
    return false;
}

// rho with tr(a rho) = 0, valid whenever 0 lies in W(a).
CMat zero_witness(const CMat& a) {
    const double scale_tol = 1e-10 * std::max(1.0, frob_norm(a));
    std::vector<Cx> best;
    double best_val = 1e300;
    // Rotations of a trade Hermitian against skew part; the pair search is
    // cheap, so sweep a few phases before falling back.
    for (int k = 0; k < 64; ++k) {
        const double beta = k * kPi / 64.0;
        const CMat ab = scale(std::exp(Cx(0.0, -beta)), a);
        RayleighPair rot{herm_part(ab), skew_part(ab)};
        if (try_pair_witness(a, rot, scale_tol, &best, &best_val)) {
            const int d = a.rows;
            CMat rho = CMat::zeros(d, d);
            for (int i = 0; i < d; ++i)
                for (int j = 0; j < d; ++j) rho(i, j) = best[i] * std::conj(best[j]);
            return rho;
        }
    }
    CMat rho;
    if (try_projection_witness(a, scale_tol, &rho)) return rho;
    // Accept the best vector seen if it is within a weaker tolerance.
    if (best_val <= 1e-8 * std::max(1.0, frob_norm(a))) {
        const int d = a.rows;
        CMat out = CMat::zeros(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) out(i, j) = best[i] * std::conj(best[j]);
        return out;
    }
    throw Error(ErrorKind::InvalidArgument, "failed to locate a zero of the numerical range");
}

// ------------------------------------------------------------------
// Witness for the pointed-cone case at the minimal copy count.

std::vector<Cx> kron_vec(const std::vector<Cx>& x, const std::vector<Cx>& y) {
    std::vector<Cx> out(x.size() * y.size());
    size_t idx = 0;
    for (const Cx& a : x)
        for (const Cx& b : y) out[idx++] = a * b;
    return out;
}

struct ConvexCombo {
    std::vector<int> support;
    std::vector<double> weights;
    double residual = 1e300;
};

// Convex weights w >= 0, sum 1, with sum w_j z_j = 0.
bool zero_combination(const std::vector<Cx>& z, ConvexCombo* out) {
    const int n = static_cast<int>(z.size()) - 1;
    ConvexCombo best;

    auto consider = [&](const std::vector<int>& idx, const std::vector<double>& w) {
        double wmin = 0.0;
        double wsum = 0.0;
        for (double v : w) {
            wmin = std::min(wmin, v);
            wsum += v;
        }
        if (wmin < -1e-8 || std::abs(wsum - 1.0) > 1e-9) return false;
        Cx acc = 0.0;
        for (size_t k = 0; k < idx.size(); ++k) acc += std::max(0.0, w[k]) * z[idx[k]];
        const double resid = std::abs(acc);
        if (resid < best.residual) {
            best.support = idx;
            best.weights = w;
            for (double& v : best.weights) v = std::max(0.0, v);
            best.residual = resid;
        }
        return resid <= 1e-12 && wmin >= -1e-12;
    };

    auto try_pair = [&](int p, int q) {
        const double ap = std::abs(z[p]);
        const double aq = std::abs(z[q]);
        if (ap <= 1e-14 || aq <= 1e-14) {
            if (ap <= 1e-14) return consider({p}, {1.0});
            return consider({q}, {1.0});
        }
        // Antiparallel test: z_p and z_q must point in opposite directions.
        const Cx crossc = std::conj(z[p]) * z[q];
        if (std::real(crossc) >= 0.0) return false;
        const double wp = aq / (ap + aq);
        return consider({p, q}, {wp, 1.0 - wp});
    };

    auto try_triple = [&](int i, int j, int k) {
        // Solve [Re z; Im z; 1] w = (0, 0, 1).
        const double a11 = std::real(z[i]), a12 = std::real(z[j]), a13 = std::real(z[k]);
        const double a21 = std::imag(z[i]), a22 = std::imag(z[j]), a23 = std::imag(z[k]);
        const double det = a11 * (a22 - a23) - a12 * (a21 - a23) + a13 * (a21 - a22);
        if (std::abs(det) < 1e-14) return false;
        const double w1 = (a12 * a23 - a13 * a22) / det;
        const double w2 = (a13 * a21 - a11 * a23) / det;
        const double w3 = (a11 * a22 - a12 * a21) / det;
        return consider({i, j, k}, {w1, w2, w3});
    };

    const int mid = n / 2;
    if (n >= 2 && try_triple(0, mid, n)) {
        *out = best;
        return true;
    }
    for (int p = 0; p <= n && best.residual > 1e-12; ++p)
        for (int q = p + 1; q <= n; ++q)
            if (try_pair(p, q)) {
                *out = best;
                return true;
            }
    for (int i = 0; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j)
            for (int k = j + 1; k <= n; ++k)
                if (try_triple(i, j, k)) {
                    *out = best;
                    return true;
                }
    if (best.residual <= 1e-8) {
        *out = best;
        return true;
    }
    return false;
}

CMat cone_witness(const CMat& a, double axis, int n) {
    const int d = a.rows;
    const CMat a1 = scale(std::exp(Cx(0.0, -axis)), a);
    const CMat h = herm_part(a1);
    const CMat s = pd_power(h, -0.5); // h is PD along the cone axis
    const CMat gt = matmul(matmul(s, skew_part(a1)), s);
    const EigDecomposition eg = eigh(gt);

    // Columns of s * eigvecs(gt), eigenvalues in descending order.
    const double a_hi = eg.values.back();
    const double a_lo = eg.values.front();
    std::vector<std::vector<Cx>> frame(d, std::vector<Cx>(d));
    for (int k = 0; k < d; ++k) {
        const int src = d - 1 - k;
        for (int r = 0; r < d; ++r) {
            Cx acc = 0.0;
            for (int c = 0; c < d; ++c) acc += s(r, c) * eg.vectors(c, src);
            frame[k][r] = acc;
        }
    }

    // z_j is the trace of a1^{tensor n} against the normalized product
    // state with n-j top slots and j bottom slots. The frame vectors are
    // not unit vectors, so each factor carries its squared norm; the
    // arguments still march across an angle n * Theta >= pi, so 0 lies
    // in the convex hull.
    double top_n2 = 0.0, bot_n2 = 0.0;
    for (int r = 0; r < d; ++r) {
        top_n2 += std::norm(frame[0][r]);
        bot_n2 += std::norm(frame[d - 1][r]);
    }
    const Cx top = Cx(1.0, a_hi) / top_n2;
    const Cx bot = Cx(1.0, a_lo) / bot_n2;
    std::vector<Cx> z(n + 1);
    double zmax = 0.0;
    for (int j = 0; j <= n; ++j) {
        z[j] = std::pow(top, double(n - j)) * std::pow(bot, double(j));
        zmax = std::max(zmax, std::abs(z[j]));
    }
    for (Cx& v : z) v /= zmax;

    ConvexCombo combo;
    if (!zero_combination(z, &combo))
        throw Error(ErrorKind::InvalidArgument, "cone witness combination not found");

    CMat rho = CMat::zeros(1, 1);
    bool first = true;
    const int dn = static_cast<int>(std::llround(std::pow(double(d), double(n))));
    for (size_t t = 0; t < combo.support.size(); ++t) {
        if (combo.weights[t] <= 0.0) continue;
        const int j = combo.support[t];
        std::vector<Cx> v{Cx(1.0, 0.0)};
        for (int slot = 0; slot < n; ++slot) v = kron_vec(v, slot < n - j ? frame[0] : frame[d - 1]);
        double n2 = 0.0;
        for (const Cx& c : v) n2 += std::norm(c);
        const double w = combo.weights[t] / n2;
        if (first) {
            rho = CMat::zeros(dn, dn);
            first = false;
        }
        for (int r = 0; r < dn; ++r)
            for (int c = 0; c < dn; ++c) rho(r, c) += w * v[r] * std::conj(v[c]);
    }
    rho = herm_part(rho);
    const double tr = std::real(trace(rho));
    if (tr <= 0.0) throw Error(ErrorKind::InvalidArgument, "cone witness has zero trace");
    return scale(Cx(1.0 / tr, 0.0), rho);
}

} // namespace

const char* cone_class_name(ConeClass c) noexcept {
    switch (c) {
        case ConeClass::PointedCone: return "POINTED_CONE";
        case ConeClass::HalfPlane: return "HALF_PLANE";
        case ConeClass::FullPlane: return "FULL_PLANE";
        case ConeClass::DegenerateLine: return "DEGENERATE_LINE";
    }
    return "UNKNOWN";
}

double min_support(const CMat& a, double theta) {
    if (!a.square()) throw Error(ErrorKind::DimensionMismatch, "min_support needs a square matrix");
    if (frob_norm(a) == 0.0) throw Error(ErrorKind::ZeroMatrix, "min_support of the zero matrix");
    const Cx phase = std::exp(Cx(0.0, -theta));
    return eigh(herm_part(scale(phase, a))).values.front();
}

FieldAngleReport field_angle(const CMat& a, double tol) {
    (void)tol; // endpoint resolution is pinned internally below tol's default
    return scan_field_angle(a).report;
}

CMat onedim_witness(const CMat& a, std::optional<int> copies) {
    const ArcScan scan = scan_field_angle(a);
    if (!scan.report.optimal_n) throw Error(ErrorKind::NotDistinguishable, "no copy count separates this operator");
    const int opt = *scan.report.optimal_n;
    const int n = copies.value_or(opt);
    if (n < opt) throw Error(ErrorKind::InsufficientCopies, "fewer copies than the minimum");
    const int d = a.rows;
    double total = 1.0;
    for (int k = 0; k < n; ++k) {
        total *= d;
        if (total > 4096.0) throw Error(ErrorKind::CapExceeded, "witness dimension exceeds 4096");
    }

    CMat rho = scan.report.zero_in_range ? zero_witness(a) : cone_witness(a, scan.axis, opt);
    const int base = scan.report.zero_in_range ? 1 : opt;
    const CMat mixed = scale(Cx(1.0 / d, 0.0), CMat::identity(d));
    for (int k = base; k < n; ++k) rho = kron(rho, mixed);
    return rho;
}

} // namespace paradis
