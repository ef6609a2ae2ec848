#include "paradis/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "paradis/error.hpp"

namespace paradis {

namespace {

constexpr double kPivotTol = 1e-11;   // entries below this never pivot
constexpr double kRatioSlack = 1e-9;  // ratio window treated as tied at the minimum
constexpr double kPivotPrefer = 0.1;  // keep tied rows within this factor of the best pivot
constexpr double kReducedTol = 1e-11; // reduced cost threshold for entering
constexpr double kLexTol = 1e-12;     // per-component tolerance in the lex ratio test
constexpr double kDriveOutTol = 1e-10;  // artificial level (scaled) treated as removable dust
constexpr double kDrivePivotMin = 1e-2; // smallest pivot accepted for a drive-out exchange
constexpr double kNegHealthy = 1e-10;   // tolerated negative basic value (scaled)
constexpr long long kCadences[] = {16, 4, 1}; // refactorization cadences, tightest last

} // namespace

LpResult phase1_feasible(const std::vector<std::vector<double>>& rows,
                         const std::vector<double>& b,
                         double obj_tol) {
    const int m = static_cast<int>(rows.size());
    if (m == 0 || b.size() != rows.size())
        throw Error(ErrorKind::InvalidArgument, "phase1_feasible: empty or mismatched system");
    const int n = static_cast<int>(rows.front().size());
    for (const std::vector<double>& r : rows)
        if (static_cast<int>(r.size()) != n)
            throw Error(ErrorKind::InvalidArgument, "phase1_feasible: ragged rows");

    // Row scaling keeps pivot tolerances meaningful when coefficient
    // magnitudes vary widely (binomials vs unit entries); it does not
    // change the solution set. The scale factors are kept so the reported
    // objective stays in the units of the input equations.
    const int width = n + m + 1; // structurals, artificials, rhs
    std::vector<std::vector<double>> orig(static_cast<size_t>(m),
                                          std::vector<double>(static_cast<size_t>(width), 0.0));
    std::vector<double> rowscale(static_cast<size_t>(m), 1.0);
    for (int i = 0; i < m; ++i) {
        double mx = std::abs(b[static_cast<size_t>(i)]);
        for (double v : rows[static_cast<size_t>(i)]) mx = std::max(mx, std::abs(v));
        rowscale[static_cast<size_t>(i)] = mx > 0.0 ? mx : 1.0;
        const double sc = mx > 0.0 ? 1.0 / mx : 1.0;
        const double sign = b[static_cast<size_t>(i)] < 0.0 ? -1.0 : 1.0;
        for (int j = 0; j < n; ++j)
            orig[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                sign * sc * rows[static_cast<size_t>(i)][static_cast<size_t>(j)];
        orig[static_cast<size_t>(i)][static_cast<size_t>(n + i)] = 1.0;
        orig[static_cast<size_t>(i)][static_cast<size_t>(width - 1)] =
            sign * sc * b[static_cast<size_t>(i)];
    }

    std::vector<std::vector<double>> t;
    std::vector<double> cost(static_cast<size_t>(width), 0.0);
    std::vector<int> basis(static_cast<size_t>(m));
    std::vector<char> banned;
    std::vector<char> inbasis;

    // Phase-1 objective: minimize the artificial sum. Reduced cost row
    // starts as minus the column sums over the constraint rows.
    auto reset = [&]() {
        t = orig;
        inbasis.assign(static_cast<size_t>(n + m), 0);
        for (int i = 0; i < m; ++i) {
            basis[static_cast<size_t>(i)] = n + i;
            inbasis[static_cast<size_t>(n + i)] = 1;
        }
        banned.assign(static_cast<size_t>(n + m), 0);
        std::fill(cost.begin(), cost.end(), 0.0);
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < width; ++j)
                if (j < n || j == width - 1)
                    cost[static_cast<size_t>(j)] -= t[static_cast<size_t>(i)][static_cast<size_t>(j)];
    };

    // Rebuild t = B^{-1} orig and the reduced cost row from the current
    // basis. Long pivot sequences accumulate drift; refactorizing from the
    // pristine data restores it. Returns false if the basis matrix fails
    // to factor, in which case the current tableau is kept.
    auto refresh = [&]() -> bool {
        std::vector<std::vector<double>> binv(static_cast<size_t>(m),
                                              std::vector<double>(static_cast<size_t>(2 * m), 0.0));
        for (int i = 0; i < m; ++i) {
            for (int k = 0; k < m; ++k)
                binv[static_cast<size_t>(i)][static_cast<size_t>(k)] =
                    orig[static_cast<size_t>(i)][static_cast<size_t>(basis[static_cast<size_t>(k)])];
            binv[static_cast<size_t>(i)][static_cast<size_t>(m + i)] = 1.0;
        }
        for (int col = 0; col < m; ++col) {
            int piv = -1;
            double pmax = 1e-12;
            for (int r = col; r < m; ++r) {
                const double v = std::abs(binv[static_cast<size_t>(r)][static_cast<size_t>(col)]);
                if (v > pmax) {
                    pmax = v;
                    piv = r;
                }
            }
            if (piv < 0) return false;
            std::swap(binv[static_cast<size_t>(col)], binv[static_cast<size_t>(piv)]);
            const double dv = binv[static_cast<size_t>(col)][static_cast<size_t>(col)];
            for (double& v : binv[static_cast<size_t>(col)]) v /= dv;
            for (int r = 0; r < m; ++r) {
                if (r == col) continue;
                const double f = binv[static_cast<size_t>(r)][static_cast<size_t>(col)];
                if (f == 0.0) continue;
                for (int j = 0; j < 2 * m; ++j)
                    binv[static_cast<size_t>(r)][static_cast<size_t>(j)] -=
                        f * binv[static_cast<size_t>(col)][static_cast<size_t>(j)];
            }
        }
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < width; ++j) {
                double acc = 0.0;
                for (int k = 0; k < m; ++k)
                    acc += binv[static_cast<size_t>(i)][static_cast<size_t>(m + k)] *
                           orig[static_cast<size_t>(k)][static_cast<size_t>(j)];
                t[static_cast<size_t>(i)][static_cast<size_t>(j)] = acc;
            }
        for (int j = 0; j < width; ++j) {
            double acc = (j >= n && j < n + m) ? 1.0 : 0.0;
            for (int i = 0; i < m; ++i)
                if (basis[static_cast<size_t>(i)] >= n) acc -= t[static_cast<size_t>(i)][static_cast<size_t>(j)];
            cost[static_cast<size_t>(j)] = acc;
        }
        // Basic columns price at exactly zero; leaving refactorization
        // noise there lets an ill-conditioned basis re-enter its own
        // column and spin in place.
        for (int i = 0; i < m; ++i) cost[static_cast<size_t>(basis[static_cast<size_t>(i)])] = 0.0;
        return true;
    };

    // Lexicographic ratio test over (rhs, B^{-1} block): rows of B^{-1} are
    // independent, so two candidates never tie on every component and no
    // basis repeats regardless of the entering rule. A basic value that
    // rounding has pushed slightly negative counts as sitting at its
    // bound; letting its negative ratio win would drive the step length
    // negative and amplify the dip across the whole basis.
    auto lex_before = [&](int i, int j, double ai, double aj) -> bool {
        const double ri =
            std::max(t[static_cast<size_t>(i)][static_cast<size_t>(width - 1)], 0.0) / ai;
        const double rj =
            std::max(t[static_cast<size_t>(j)][static_cast<size_t>(width - 1)], 0.0) / aj;
        double gap = kLexTol * (1.0 + std::max(std::abs(ri), std::abs(rj)));
        if (ri < rj - gap) return true;
        if (rj < ri - gap) return false;
        for (int k = 0; k < m; ++k) {
            const double ci = t[static_cast<size_t>(i)][static_cast<size_t>(n + k)] / ai;
            const double cj = t[static_cast<size_t>(j)][static_cast<size_t>(n + k)] / aj;
            gap = kLexTol * (1.0 + std::max(std::abs(ci), std::abs(cj)));
            if (ci < cj - gap) return true;
            if (cj < ci - gap) return false;
        }
        return i < j;
    };

    auto pivot_at = [&](int leave, int enter) {
        std::vector<double>& prow = t[static_cast<size_t>(leave)];
        const double pivot = prow[static_cast<size_t>(enter)];
        for (double& v : prow) v /= pivot;
        for (int i = 0; i < m; ++i) {
            if (i == leave) continue;
            const double f = t[static_cast<size_t>(i)][static_cast<size_t>(enter)];
            if (f == 0.0) continue;
            for (int j = 0; j < width; ++j)
                t[static_cast<size_t>(i)][static_cast<size_t>(j)] -= f * prow[static_cast<size_t>(j)];
        }
        const double cf = cost[static_cast<size_t>(enter)];
        if (cf != 0.0)
            for (int j = 0; j < width; ++j)
                cost[static_cast<size_t>(j)] -= cf * prow[static_cast<size_t>(j)];
        inbasis[static_cast<size_t>(basis[static_cast<size_t>(leave)])] = 0;
        inbasis[static_cast<size_t>(enter)] = 1;
        basis[static_cast<size_t>(leave)] = enter;
    };

    // Observed runs finish in well under 2(n + m) pivots; the cap only
    // exists to turn a pathological stall into a clean escalation.
    const long long iter_cap = 8LL * (n + m) + 2000;

    // One full phase-1 pass at a fixed refactorization cadence. Returns
    // true if the iteration cap was hit.
    auto run = [&](long long cadence) -> bool {
        bool fresh = true;
        long long last_refresh = 0;
        for (long long iter = 0;; ++iter) {
            if (iter > iter_cap) return true;
            if (iter - last_refresh >= cadence) {
                refresh();
                fresh = true;
                last_refresh = iter;
            }

            // Dantzig entering over the unbanned nonbasic columns.
            int enter = -1;
            double most = -kReducedTol;
            for (int j = 0; j < n + m; ++j)
                if (!banned[static_cast<size_t>(j)] && !inbasis[static_cast<size_t>(j)] &&
                    cost[static_cast<size_t>(j)] < most) {
                    most = cost[static_cast<size_t>(j)];
                    enter = j;
                }
            if (enter < 0) return false;

            // Ratio test in two passes. Degenerate vertices leave many rows
            // tied at the minimum ratio, and a tie won by a row whose pivot
            // entry is refactorization noise drags that noise into the
            // basis; restricting the tie to rows with a solid entry keeps
            // the basis conditioned, and the lexicographic order then
            // decides among those deterministically.
            double rmin = 0.0;
            double amax = 0.0;
            for (int i = 0; i < m; ++i) {
                const double a = t[static_cast<size_t>(i)][static_cast<size_t>(enter)];
                if (a <= kPivotTol) continue;
                const double r =
                    std::max(t[static_cast<size_t>(i)][static_cast<size_t>(width - 1)], 0.0) / a;
                if (amax == 0.0 || r < rmin) rmin = r;
                amax = std::max(amax, a);
            }
            int leave = -1;
            double apiv = 0.0;
            if (amax > 0.0) {
                const double redge = rmin + kRatioSlack * (1.0 + rmin);
                double atied = 0.0;
                for (int i = 0; i < m; ++i) {
                    const double a = t[static_cast<size_t>(i)][static_cast<size_t>(enter)];
                    if (a <= kPivotTol) continue;
                    const double r =
                        std::max(t[static_cast<size_t>(i)][static_cast<size_t>(width - 1)], 0.0) / a;
                    if (r <= redge) atied = std::max(atied, a);
                }
                for (int i = 0; i < m; ++i) {
                    const double a = t[static_cast<size_t>(i)][static_cast<size_t>(enter)];
                    if (a <= kPivotTol || a < kPivotPrefer * atied) continue;
                    const double r =
                        std::max(t[static_cast<size_t>(i)][static_cast<size_t>(width - 1)], 0.0) / a;
                    if (r > redge) continue;
                    if (leave < 0 || lex_before(i, leave, a, apiv)) {
                        leave = i;
                        apiv = a;
                    }
                }
            }
            if (leave < 0) {
                // Phase 1 is bounded, so a column with no usable pivot is
                // numerical dust. Confirm on a refactorized tableau, then ban.
                if (fresh) {
                    banned[static_cast<size_t>(enter)] = 1;
                } else {
                    refresh();
                    fresh = true;
                    last_refresh = iter;
                }
                continue;
            }

            // Artificials never need to come back once driven out.
            if (basis[static_cast<size_t>(leave)] >= n)
                banned[static_cast<size_t>(basis[static_cast<size_t>(leave)])] = 1;

            pivot_at(leave, enter);
            fresh = false;
        }
    };

    // Swap artificials sitting at dust level out of the terminal basis so
    // they cannot masquerade as infeasibility. Only well-conditioned
    // exchanges are taken; expects a freshly refactorized tableau.
    auto drive_out = [&]() -> bool {
        bool changed = false;
        for (int i = 0; i < m; ++i) {
            if (basis[static_cast<size_t>(i)] < n) continue;
            if (std::abs(t[static_cast<size_t>(i)][static_cast<size_t>(width - 1)]) > kDriveOutTol)
                continue;
            int jbest = -1;
            double abest = kDrivePivotMin;
            for (int j = 0; j < n; ++j) {
                const double a = std::abs(t[static_cast<size_t>(i)][static_cast<size_t>(j)]);
                if (a > abest) {
                    abest = a;
                    jbest = j;
                }
            }
            if (jbest < 0) continue;
            pivot_at(i, jbest);
            changed = true;
        }
        return changed;
    };

    auto worst_negative = [&]() -> double {
        double w = 0.0;
        for (int i = 0; i < m; ++i)
            w = std::max(w, -t[static_cast<size_t>(i)][static_cast<size_t>(width - 1)]);
        return w;
    };

    // A degenerate grind can leave the terminal basis with a negative
    // basic value, which silently understates the artificial mass. Retry
    // at tighter cadences until the terminal state is clean; the reports
    // come off a refactorized tableau either way.
    bool capped = false;
    double neg = 0.0;
    for (long long cadence : kCadences) {
        reset();
        capped = run(cadence);
        refresh();
        for (int pass = 0; pass < 2 && drive_out(); ++pass) refresh();
        neg = worst_negative();
        if (!capped && neg <= kNegHealthy) break;
    }

    LpResult out;
    // Artificial k absorbs the residual of input equation k, so its value
    // converts back to input units through that row's scale factor. The
    // row-normalized mass is kept as well: rows with large coefficients
    // amplify refactorization noise well past the attainable input-unit
    // accuracy, and callers probing near that floor need the scaled view.
    double art_sum = 0.0, art_scaled = 0.0;
    for (int i = 0; i < m; ++i)
        if (basis[static_cast<size_t>(i)] >= n) {
            const double v =
                std::max(0.0, t[static_cast<size_t>(i)][static_cast<size_t>(width - 1)]);
            art_scaled += v;
            art_sum += v * rowscale[static_cast<size_t>(basis[static_cast<size_t>(i)] - n)];
        }

    std::vector<double> x(static_cast<size_t>(n), 0.0);
    for (int i = 0; i < m; ++i)
        if (basis[static_cast<size_t>(i)] < n)
            x[static_cast<size_t>(basis[static_cast<size_t>(i)])] =
                std::max(0.0, t[static_cast<size_t>(i)][static_cast<size_t>(width - 1)]);

    out.phase1_objective = art_sum;
    out.scaled_infeasibility = art_scaled;
    if (capped || neg > kNegHealthy) {
        // The tightest cadence either failed to terminate or left a
        // negative basic, so the basis cannot price infeasibility
        // reliably. Score the clipped solution against the input
        // equations instead; a pass is a certificate.
        double rinf = 0.0, rscaled = 0.0;
        for (int k = 0; k < m; ++k) {
            double acc = -b[static_cast<size_t>(k)];
            for (int j = 0; j < n; ++j)
                acc += rows[static_cast<size_t>(k)][static_cast<size_t>(j)] * x[static_cast<size_t>(j)];
            rinf = std::max(rinf, std::abs(acc));
            rscaled = std::max(rscaled, std::abs(acc) / rowscale[static_cast<size_t>(k)]);
        }
        out.phase1_objective = std::max(art_sum, rinf);
        out.scaled_infeasibility = std::max(art_scaled, rscaled);
    }
    out.feasible = out.phase1_objective <= obj_tol;
    if (out.feasible) out.x = std::move(x);
    return out;
}

} // namespace paradis
