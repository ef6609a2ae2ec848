#include "paradis/salpha.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include "paradis/feasibility.hpp"
#include "paradis/lp.hpp"
#include "paradis/subspace.hpp"

namespace paradis {

namespace {

constexpr int kReducedCap = 18;
constexpr int kFullCap = 8;
constexpr int kLiftDenseCap = 1024; // largest dense diagonal, 3^n entries
constexpr double kRowDropTol = 1e-8;

const double kPi = std::acos(-1.0);

double binom(int u, int s) {
    if (s < 0 || u < 0 || s > u) return 0.0;
    double r = 1.0;
    for (int k = 1; k <= s; ++k) r = r * (u - s + k) / k;
    return std::round(r); // exact for the sizes used here (u <= 2n <= 36)
}

double factorial(int n) {
    double r = 1.0;
    for (int k = 2; k <= n; ++k) r *= k;
    return r;
}

void require_n(int n, int cap, const char* op) {
    if (n < 1)
        throw Error(ErrorKind::InvalidArgument, std::string(op) + ": n must be >= 1");
    if (n > cap)
        throw Error(ErrorKind::CapExceeded,
                    std::string(op) + ": n = " + std::to_string(n) + " exceeds cap " +
                        std::to_string(cap));
}

// Real rows for the phase-1 solver: each complex equation splits into
// its real and imaginary part, near-zero rows dropped; the last row is
// the normalization sum p = 1.
LpResult solve_real_system(const SAlphaSystem& sys, double obj_tol) {
    const size_t nvars = sys.rows.empty() ? 0 : sys.rows.front().size();
    std::vector<std::vector<double>> rows;
    std::vector<double> b;
    for (const std::vector<Cx>& row : sys.rows) {
        std::vector<double> re(nvars), im(nvars);
        double re_max = 0.0, im_max = 0.0, c_max = 0.0;
        for (size_t j = 0; j < nvars; ++j) {
            re[j] = row[j].real();
            im[j] = row[j].imag();
            re_max = std::max(re_max, std::abs(re[j]));
            im_max = std::max(im_max, std::abs(im[j]));
            c_max = std::max(c_max, std::abs(row[j]));
        }
        // A part that is negligible against its parent complex row vanishes
        // identically at the nearby exact angle; keeping it would veto
        // inputs like alpha = pi rounded to a few digits.
        const double drop = kRowDropTol * std::max(1.0, c_max);
        if (re_max > drop) {
            rows.push_back(std::move(re));
            b.push_back(0.0);
        }
        if (im_max > drop) {
            rows.push_back(std::move(im));
            b.push_back(0.0);
        }
    }
    rows.emplace_back(nvars, 1.0);
    b.push_back(1.0);
    return phase1_feasible(rows, b, obj_tol);
}

} // namespace

std::vector<CMat> salpha_generators(double alpha) {
    const Cx phase = std::exp(Cx(0.0, alpha));
    CMat a1 = CMat::zeros(3, 3);
    a1(0, 0) = 1.0;
    a1(1, 1) = phase;
    CMat a2 = CMat::zeros(3, 3);
    a2(1, 1) = 1.0;
    a2(2, 2) = phase;
    return {a1, a2};
}

int salpha_var_count(int n) { return (n + 1) * (n + 2) / 2; }

int salpha_var_index(int n, int a, int b, int c) {
    if (a < 0 || b < 0 || c < 0 || a + b + c != n)
        throw Error(ErrorKind::InvalidArgument, "salpha_var_index: invalid occupation triple");
    // a descending blocks of size n-a+1, then b descending inside
    int idx = 0;
    for (int aa = n; aa > a; --aa) idx += n - aa + 1;
    idx += (n - a) - b;
    return idx;
}

Occupation salpha_var_abc(int n, int idx) {
    if (idx < 0 || idx >= salpha_var_count(n))
        throw Error(ErrorKind::InvalidArgument, "salpha_var_abc: index out of range");
    for (int a = n; a >= 0; --a) {
        const int block = n - a + 1;
        if (idx < block) {
            const int b = (n - a) - idx;
            return {a, b, n - a - b};
        }
        idx -= block;
    }
    return {};
}

SAlphaSystem build_reduced_system(int n, double alpha) {
    require_n(n, kReducedCap, "build_reduced_system");
    SAlphaSystem sys;
    sys.n = n;
    sys.alpha = alpha;
    sys.reduced = true;
    sys.rows.assign(static_cast<size_t>(n + 1),
                    std::vector<Cx>(static_cast<size_t>(salpha_var_count(n)), Cx(0.0)));
    for (int l = 0; l <= n; ++l) {
        std::vector<Cx>& row = sys.rows[static_cast<size_t>(l)];
        for (int r = 0; r <= n; ++r) {
            const Cx phase = std::exp(Cx(0.0, r * alpha));
            const int s_lo = std::max(0, l - r);
            const int s_hi = std::min(n - r, l);
            for (int s = s_lo; s <= s_hi; ++s) {
                const int a = n - r - s;
                const int b = 2 * s + r - l;
                const int c = l - s;
                row[static_cast<size_t>(salpha_var_index(n, a, b, c))] += phase * binom(b, s);
            }
        }
    }
    return sys;
}

SAlphaSystem build_full_diagonal_system(int n, double alpha) {
    require_n(n, kFullCap, "build_full_diagonal_system");
    const Cx phase = std::exp(Cx(0.0, alpha));
    // diagonal entries of the two generators, indexed by ternary digit
    const Cx diag1[3] = {Cx(1.0), phase, Cx(0.0)};
    const Cx diag2[3] = {Cx(0.0), Cx(1.0), phase};

    long long nvars = 1;
    for (int i = 0; i < n; ++i) nvars *= 3;
    SAlphaSystem sys;
    sys.n = n;
    sys.alpha = alpha;
    sys.reduced = false;
    sys.rows.assign(static_cast<size_t>(1LL << n),
                    std::vector<Cx>(static_cast<size_t>(nvars), Cx(0.0)));
    for (long long w = 0; w < (1LL << n); ++w) {
        std::vector<Cx>& row = sys.rows[static_cast<size_t>(w)];
        for (long long k = 0; k < nvars; ++k) {
            Cx coeff = 1.0;
            long long rem = k;
            for (int slot = n - 1; slot >= 0; --slot) { // slot 0 most significant
                const int digit = static_cast<int>(rem % 3);
                rem /= 3;
                const bool second = (w >> (n - 1 - slot)) & 1;
                coeff *= second ? diag2[digit] : diag1[digit];
                if (coeff == Cx(0.0)) break;
            }
            row[static_cast<size_t>(k)] = coeff;
        }
    }
    return sys;
}

SAlphaSolveResult solve_nonneg(const SAlphaSystem& system, double obj_tol) {
    if (system.rows.empty())
        throw Error(ErrorKind::InvalidArgument, "solve_nonneg: empty system");
    LpResult lp = solve_real_system(system, obj_tol);
    SAlphaSolveResult out;
    out.feasible = lp.feasible;
    out.phase1_objective = lp.phase1_objective;
    out.scaled_infeasibility = lp.scaled_infeasibility;
    if (lp.feasible) out.p = std::move(lp.x);
    return out;
}

std::vector<double> lift_diagonal(const std::vector<double>& p, int n) {
    require_n(n, kReducedCap, "lift_diagonal");
    if (static_cast<int>(p.size()) != salpha_var_count(n))
        throw Error(ErrorKind::DimensionMismatch, "lift_diagonal: wrong variable count");
    for (double v : p)
        if (v < -1e-12)
            throw Error(ErrorKind::NegativeEntry,
                        "lift_diagonal: negative occupation weight " + std::to_string(v));

    long long nvars = 1;
    for (int i = 0; i < n; ++i) nvars *= 3;
    const double nfact = factorial(n);
    std::vector<double> x(static_cast<size_t>(nvars), 0.0);
    double total = 0.0;
    for (long long k = 0; k < nvars; ++k) {
        int counts[3] = {0, 0, 0};
        long long rem = k;
        for (int slot = 0; slot < n; ++slot) {
            ++counts[rem % 3];
            rem /= 3;
        }
        const double w = factorial(counts[0]) * factorial(counts[1]) * factorial(counts[2]) / nfact;
        const double v =
            w * std::max(0.0, p[static_cast<size_t>(salpha_var_index(n, counts[0], counts[1], counts[2]))]);
        x[static_cast<size_t>(k)] = v;
        total += v;
    }
    if (total <= 0.0)
        throw Error(ErrorKind::InvalidArgument, "lift_diagonal: zero solution cannot be normalized");
    for (double& v : x) v /= total;
    return x;
}

CMat lift_solution(const std::vector<double>& p, int n) {
    long long nvars = 1;
    for (int i = 0; i < n; ++i) nvars *= 3;
    if (nvars > kLiftDenseCap)
        throw Error(ErrorKind::CapExceeded,
                    "lift_solution: 3^" + std::to_string(n) + " exceeds dense cap " +
                        std::to_string(kLiftDenseCap));
    const std::vector<double> x = lift_diagonal(p, n);
    std::vector<Cx> d(x.begin(), x.end());
    return CMat::diag(d);
}

ClosedFormReport closed_form_solution(int n, double alpha) {
    if (n != 3 && n != 4)
        throw Error(ErrorKind::InvalidArgument, "closed_form_solution: closed forms exist for n = 3, 4");
    ClosedFormReport rep;
    rep.p.assign(static_cast<size_t>(salpha_var_count(n)), 0.0);
    auto set = [&](int a, int b, int c, double v) {
        rep.p[static_cast<size_t>(salpha_var_index(n, a, b, c))] = v;
    };
    if (n == 3) {
        const double s1 = std::sin(alpha), s2 = std::sin(2 * alpha), s3 = std::sin(3 * alpha);
        set(3, 0, 0, s1);
        set(0, 0, 3, s1);
        set(1, 2, 0, s1);
        set(0, 2, 1, s1);
        set(2, 1, 0, -s2);
        set(0, 1, 2, -s2);
        set(1, 1, 1, -2 * s2);
        set(1, 0, 2, s3);
        set(2, 0, 1, s3);
    } else {
        const double c1 = std::cos(alpha), c3 = std::cos(3 * alpha), c4 = std::cos(4 * alpha);
        set(4, 0, 0, 1.0);
        set(0, 0, 4, 1.0);
        set(0, 4, 0, 1.0);
        set(0, 2, 2, 2.0);
        set(2, 2, 0, 2.0);
        set(0, 1, 3, -2 * c1);
        set(3, 1, 0, -2 * c1);
        set(0, 3, 1, -2 * c1);
        set(1, 3, 0, -2 * c1);
        set(1, 1, 2, 2 * c3);
        set(2, 1, 1, 2 * c3);
        set(2, 0, 2, -2 * c4);
    }

    const SAlphaSystem sys = build_reduced_system(n, alpha);
    double max_res = 0.0;
    for (const std::vector<Cx>& row : sys.rows) {
        Cx acc = 0.0;
        for (size_t j = 0; j < row.size(); ++j) acc += row[j] * rep.p[j];
        max_res = std::max(max_res, std::abs(acc));
    }
    rep.max_residual = max_res;
    rep.min_entry = *std::min_element(rep.p.begin(), rep.p.end());
    return rep;
}

ThresholdReport threshold_alpha(int n, double grid_step, double refine_tol, int jobs) {
    require_n(n, kReducedCap, "threshold_alpha");
    if (grid_step <= 0.0 || refine_tol <= 0.0)
        throw Error(ErrorKind::InvalidArgument, "threshold_alpha: steps must be positive");

    std::vector<double> alphas;
    for (double a = kPi / 2; a < kPi - 0.5 * grid_step; a += grid_step) alphas.push_back(a);
    alphas.push_back(kPi);

    // The infeasibility margin near the boundary shrinks by roughly a
    // decade per copy; by ten copies it drops under the default residual
    // tolerance and the scan stops resolving. The probe therefore judges
    // the row-normalized artificial mass, whose noise floor stays near
    // machine precision while binomial row scales push the equation-unit
    // floor many decades higher. Feasible points land well under the cut.
    constexpr double kProbeTol = 1e-12;
    auto feasibility_at = [n](double alpha) -> std::pair<bool, double> {
        const SAlphaSolveResult r = solve_nonneg(build_reduced_system(n, alpha), kProbeTol);
        return {r.scaled_infeasibility <= kProbeTol, r.phase1_objective};
    };

    ThresholdReport rep;
    rep.n = n;
    rep.profile.assign(alphas.size(), {});
    const int nthreads = std::max(1, std::min<int>(jobs, static_cast<int>(alphas.size())));
    if (nthreads == 1) {
        for (size_t i = 0; i < alphas.size(); ++i) {
            auto [f, obj] = feasibility_at(alphas[i]);
            rep.profile[i] = {alphas[i], f, obj, false};
        }
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(nthreads));
        std::vector<std::exception_ptr> errors(static_cast<size_t>(nthreads));
        for (int t = 0; t < nthreads; ++t) {
            pool.emplace_back([&, t]() {
                try {
                    for (size_t i = static_cast<size_t>(t); i < alphas.size(); i += static_cast<size_t>(nthreads)) {
                        auto [f, obj] = feasibility_at(alphas[i]);
                        rep.profile[i] = {alphas[i], f, obj, false};
                    }
                } catch (...) {
                    errors[static_cast<size_t>(t)] = std::current_exception();
                }
            });
        }
        for (std::thread& th : pool) th.join();
        for (const std::exception_ptr& e : errors)
            if (e) std::rethrow_exception(e);
    }

    // the feasible region must be a single suffix of the grid
    size_t first_feasible = rep.profile.size();
    for (size_t i = 0; i < rep.profile.size(); ++i)
        if (rep.profile[i].feasible) {
            first_feasible = i;
            break;
        }
    rep.monotone = true;
    for (size_t i = first_feasible; i < rep.profile.size(); ++i)
        if (!rep.profile[i].feasible) rep.monotone = false;
    if (!rep.monotone || first_feasible == rep.profile.size()) return rep;

    double star;
    if (first_feasible == 0) {
        star = alphas.front();
    } else {
        double lo = alphas[first_feasible - 1]; // infeasible
        double hi = alphas[first_feasible];     // feasible
        while (hi - lo > refine_tol) {
            const double mid = 0.5 * (lo + hi);
            if (feasibility_at(mid).first)
                hi = mid;
            else
                lo = mid;
        }
        star = hi;
    }
    rep.alpha_star = star;
    for (ThresholdPoint& pt : rep.profile)
        pt.boundary_uncertain = std::abs(pt.alpha - star) < 1e-6;
    return rep;
}

std::vector<CounterexampleRow> counterexample_check(int n_max) {
    if (n_max < 1)
        throw Error(ErrorKind::InvalidArgument, "counterexample_check: n_max must be >= 1");
    if (n_max > kReducedCap)
        throw Error(ErrorKind::CapExceeded, "counterexample_check: n_max exceeds cap 18");
    const double alpha = kPi / 2;
    const OperatorSubspace s = from_generators(salpha_generators(alpha));

    std::vector<CounterexampleRow> rows;
    for (int n = 1; n <= n_max; ++n) {
        CounterexampleRow row;
        row.n = n;
        row.reduced_infeasible = !solve_nonneg(build_reduced_system(n, alpha)).feasible;
        row.consistent = row.reduced_infeasible;
        if (n <= kFullCap) {
            row.full_infeasible = !solve_nonneg(build_full_diagonal_system(n, alpha)).feasible;
            row.consistent = row.consistent && *row.full_infeasible;
        }
        if (n <= 3) {
            const FeasibilityOutcome out = density_in_complement(tensor_power_generators(s, n));
            row.sdp_outcome = feasibility_status_name(out.status);
            row.consistent = row.consistent && out.status != FeasibilityStatus::Witness;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace paradis
