// Acceptance gate: ten end-to-end criteria, one line each, exit code is
// the number of failures. Each criterion carries its own wall-clock
// budget; blowing the budget fails the criterion even if the math held.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "helpers.hpp"
#include "paradis/error.hpp"
#include "paradis/feasibility.hpp"
#include "paradis/linalg.hpp"
#include "paradis/numrange.hpp"
#include "paradis/salpha.hpp"
#include "paradis/subspace.hpp"
#include "paradis/synthesis.hpp"

using namespace paradis;

namespace {

const double kPi = std::acos(-1.0);

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        pass = false;
        if (!detail.empty()) detail += "; ";
        detail += why;
    }
    void note(const std::string& text) {
        if (!detail.empty()) detail += "; ";
        detail += text;
    }
};

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), pattern, v);
    return buf;
}

int run_criterion(int id, double budget_ms, const std::function<void(Outcome&)>& body) {
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(out);
    } catch (const std::exception& e) {
        out.fail(std::string("exception: ") + e.what());
    }
    const double ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    if (ms > budget_ms) out.fail(fmt("over budget at %.0f ms", ms));
    std::printf("criterion %d: %s (%.0f ms)%s%s\n", id, out.pass ? "PASS" : "FAIL", ms,
                out.detail.empty() ? "" : " ", out.detail.c_str());
    std::fflush(stdout);
    return out.pass ? 0 : 1;
}

double tensor_orthogonality(const CMat& a, const CMat& rho, int copies) {
    CMat an = a;
    for (int k = 1; k < copies; ++k) an = kron(an, a);
    return std::abs(hs_inner(adjoint(an), rho));
}

// ------------------------------------------------------------ criteria

void c1_single_copy_boundary(Outcome& out) {
    if (!solve_nonneg(build_reduced_system(1, kPi)).feasible) out.fail("infeasible at pi");
    for (double frac : {0.99, 0.9, 0.75, 0.6}) {
        if (solve_nonneg(build_reduced_system(1, frac * kPi)).feasible)
            out.fail(fmt("feasible at %.2f pi", frac));
    }
    if (out.pass) out.detail = "one copy admits a state only at alpha = pi";
}

void c2_two_copy_threshold(Outcome& out) {
    const ThresholdReport th = threshold_alpha(2, 1e-3, 1e-6, 2);
    if (!th.alpha_star) {
        out.fail("no threshold found");
        return;
    }
    const double dev = std::abs(*th.alpha_star - 0.75 * kPi);
    if (dev > 1e-5) out.fail(fmt("threshold off by %.2e", dev));

    double worst_resid = 0.0;
    double worst_entry = 0.0;
    for (int i = 0; i < 50; ++i) {
        const double alpha = 0.75 * kPi + (0.25 * kPi) * i / 49.0;
        const SAlphaSystem full = build_full_diagonal_system(2, alpha);
        const double c1 = std::cos(alpha), c2 = std::cos(2 * alpha);
        const std::vector<double> x = {1.0, -c1, c2, -c1, 1.0, -c1, c2, -c1, 1.0};
        for (const auto& row : full.rows) {
            Cx acc = 0.0;
            for (size_t k = 0; k < row.size(); ++k) acc += row[k] * x[k];
            worst_resid = std::max(worst_resid, std::abs(acc));
        }
        for (double v : x) worst_entry = std::min(worst_entry, v);
    }
    if (worst_resid > 1e-10) out.fail(fmt("closed form residual %.2e", worst_resid));
    if (worst_entry < -1e-12) out.fail(fmt("closed form negative entry %.2e", worst_entry));
    if (out.pass)
        out.detail = "threshold " + fmt("%.8f", *th.alpha_star) + fmt(", dev %.1e", dev);
}

void c3_closed_forms(Outcome& out) {
    struct Window {
        int n;
        double lo, hi;
    };
    for (const Window w : {Window{3, 2 * kPi / 3, 0.75 * kPi}, Window{4, 5 * kPi / 8, 2 * kPi / 3}}) {
        double worst_resid = 0.0;
        for (int i = 0; i < 50; ++i) {
            const double alpha = w.lo + (w.hi - w.lo) * i / 49.0;
            worst_resid = std::max(worst_resid, closed_form_solution(w.n, alpha).max_residual);
        }
        if (worst_resid > 1e-10) out.fail(fmt("n=%.0f residual ", double(w.n)) + fmt("%.2e", worst_resid));

        double worst_entry = 0.0;
        for (double alpha = w.lo; alpha <= w.hi + 1e-12; alpha += 1e-3)
            worst_entry = std::min(worst_entry, closed_form_solution(w.n, alpha).min_entry);
        if (worst_entry < -1e-12)
            out.fail(fmt("n=%.0f negative entry ", double(w.n)) + fmt("%.2e", worst_entry));
    }
    if (out.pass) out.detail = "three and four copy forms hold on their windows";
}

void c4_right_angle_counterexample(Outcome& out) {
    const std::vector<CounterexampleRow> rows = counterexample_check(6);
    if (rows.size() != 6) {
        out.fail("expected six rows");
        return;
    }
    for (const CounterexampleRow& r : rows) {
        if (!r.reduced_infeasible) out.fail(fmt("reduced feasible at n=%.0f", double(r.n)));
        if (!r.full_infeasible || !*r.full_infeasible)
            out.fail(fmt("full feasible at n=%.0f", double(r.n)));
        if (r.n <= 3) {
            if (!r.sdp_outcome || *r.sdp_outcome == "witness")
                out.fail(fmt("psd search found a witness at n=%.0f", double(r.n)));
        }
        if (!r.consistent) out.fail(fmt("inconsistent row n=%.0f", double(r.n)));
    }
    if (out.pass) out.detail = "no witness via reduced, full or psd routes";
}

void c5_threshold_progression(Outcome& out) {
    const int jobs = std::max(2u, std::thread::hardware_concurrency());
    double worst = 0.0;
    std::ostringstream tail;
    for (int n = 1; n <= 18; ++n) {
        const ThresholdReport th = threshold_alpha(n, 1e-3, 1e-6, jobs);
        const double conjecture = kPi / 2 + kPi / (2.0 * n);
        if (!th.alpha_star) {
            if (n <= 12)
                out.fail(fmt("no threshold at n=%.0f", double(n)));
            else
                tail << " n" << n << ":none";
            continue;
        }
        const double dev = std::abs(*th.alpha_star - conjecture);
        if (n <= 12) {
            worst = std::max(worst, dev);
            if (dev > 2e-3) out.fail(fmt("n=%.0f off by ", double(n)) + fmt("%.2e", dev));
            if (!th.monotone) out.fail(fmt("non-monotone profile at n=%.0f", double(n)));
        } else {
            tail << " n" << n << ":" << fmt("%.1e", dev);
        }
    }
    out.note(fmt("max dev through 12 copies %.2e", worst) + ";" + tail.str());
}

void c6_field_angle_exact(Outcome& out) {
    struct Case {
        double theta;
        int n;
    };
    for (const Case c : {Case{kPi / 2, 2}, Case{kPi / 3, 3}, Case{2 * kPi / 5, 3}, Case{0.7, 5}}) {
        const CMat a = testutil::diag({Cx(1, 0), std::exp(Cx(0, c.theta))});
        const FieldAngleReport r = field_angle(a);
        if (std::abs(r.theta - c.theta) > 1e-6)
            out.fail(fmt("theta %.6f", c.theta) + fmt(" measured off by %.1e", std::abs(r.theta - c.theta)));
        if (!r.optimal_n || *r.optimal_n != c.n)
            out.fail(fmt("wrong copy count at theta %.6f", c.theta));
    }
    const FieldAngleReport never = field_angle(CMat::identity(3));
    if (never.optimal_n) out.fail("identity got a copy count");
    const FieldAngleReport line = field_angle(testutil::diag({Cx(1, 0), Cx(-1, 0)}));
    if (!line.zero_in_range || !line.optimal_n || *line.optimal_n != 1)
        out.fail("indefinite direction not settled in one use");
    if (out.pass) out.detail = "angles to 1e-6 and exact copy counts";
}

void c7_random_single_generator(Outcome& out) {
    std::mt19937_64 rng(0xC7);
    int accepted = 0;
    int attempts = 0;
    double worst_orth = 0.0;
    while (accepted < 100 && attempts < 6000) {
        ++attempts;
        const int d = 2 + int(rng() % 3);
        std::uniform_real_distribution<double> uc(0.2, 2.0);
        std::uniform_real_distribution<double> uphi(0.0, 2 * kPi);
        CMat a = add(scale(Cx(uc(rng), 0), CMat::identity(d)), scale(0.5, testutil::random_complex(d, d, rng)));
        a = scale(std::exp(Cx(0, uphi(rng))), a);
        a = scale(1.0 / spectral_norm(a), a);

        FieldAngleReport r;
        try {
            r = field_angle(a);
        } catch (const Error&) {
            continue;
        }
        if (!r.optimal_n || *r.optimal_n > 5) continue;
        const int n = *r.optimal_n;
        double dim = 1.0;
        for (int k = 0; k < n; ++k) dim *= d;
        if (dim > 1024) continue;
        if (n >= 2 && !r.zero_in_range) {
            // keep a safety margin to the next integer copy count
            const double frac = kPi / r.theta;
            if (std::abs(frac - std::round(frac)) < 0.05) continue;
        }
        ++accepted;

        const CMat rho = onedim_witness(a);
        const auto eig = eigh(rho);
        if (eig.values.front() < -1e-10) out.fail(fmt("witness eigenvalue %.2e", eig.values.front()));
        if (std::abs(trace(rho).real() - 1.0) > 1e-10) out.fail("witness trace off");
        const double orth = tensor_orthogonality(a, rho, n);
        worst_orth = std::max(worst_orth, orth);
        if (orth > 1e-8) out.fail(fmt("orthogonality %.2e", orth));

        if (n >= 2) {
            const OperatorSubspace s = from_generators({a});
            const FeasibilityOutcome below =
                density_in_complement(tensor_power_generators(s, n - 1), FeasibilityOptions{});
            if (below.status == FeasibilityStatus::Witness)
                out.fail(fmt("witness below the minimum at n=%.0f", double(n - 1)));
        }
        if (!out.pass && out.detail.size() > 160) break;
    }
    if (accepted < 100) out.fail(fmt("only %.0f samples accepted", double(accepted)));
    if (out.pass)
        out.detail = fmt("100 witnesses verified, worst orthogonality %.1e", worst_orth);
}

void c8_random_hermitian_spans(Outcome& out) {
    std::mt19937_64 rng(0xC8);
    FeasibilityOptions opts;
    int witnesses = 0, certificates = 0, indeterminate = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int d = 2 + int(rng() % 4);
        const int pairs = 1 + int(rng() % 3);
        std::vector<CMat> gens;
        if (rng() % 2 == 0) {
            const CMat u = testutil::random_unitary(d, rng);
            for (int i = 0; i < pairs; ++i) {
                const CMat h = testutil::random_hermitian(d, rng);
                gens.push_back(matmul(matmul(u, h), adjoint(u)));
            }
        } else {
            for (int i = 0; i < pairs; ++i) {
                const CMat g = testutil::random_complex(d, d, rng);
                gens.push_back(g);
                gens.push_back(adjoint(g));
            }
        }
        const OperatorSubspace s = from_generators(gens);
        if (!is_hermitian_closed(s)) {
            out.fail("generator family lost closure");
            continue;
        }
        const FeasibilityOutcome o = hermitian_space_decision(s, opts);
        if (o.status == FeasibilityStatus::Witness) {
            ++witnesses;
            double worst = 0.0;
            for (const CMat& g : gens) worst = std::max(worst, std::abs(hs_inner(g, *o.witness)));
            if (worst > opts.tol) out.fail(fmt("witness residual %.2e", worst));
            if (eigh(*o.witness).values.front() < -1e-9) out.fail("witness not psd");
            if (std::abs(trace(*o.witness).real() - 1.0) > 1e-8) out.fail("witness trace off");
        } else if (o.status == FeasibilityStatus::Certificate) {
            ++certificates;
            if (o.certificate_lambda_min < 1e-9) out.fail("certificate below floor");
        } else {
            ++indeterminate;
        }
        if (!out.pass && out.detail.size() > 160) break;
    }
    if (indeterminate > 10) out.fail(fmt("%.0f indeterminate of 200", double(indeterminate)));
    out.note(fmt("%.0f witnesses, ", double(witnesses)) + fmt("%.0f certificates, ", double(certificates)) +
             fmt("%.0f indeterminate", double(indeterminate)));
}

void c9_synthesis_roundtrip(Outcome& out) {
    std::mt19937_64 rng(0xC9);
    double worst_complete = 0.0;
    double worst_round = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const int d = 2 + int(rng() % 3);
        const int dim = 1 + int(rng() % 4);
        std::vector<CMat> gens;
        for (int i = 0; i < dim; ++i) gens.push_back(testutil::random_complex(d, d, rng));
        const OperatorSubspace s = from_generators(gens);
        const ChannelPair ch = channels_from_subspace(s);

        for (const KrausChannel* k : {&ch.e, &ch.f}) {
            CMat acc = CMat::zeros(d, d);
            for (const CMat& m : k->kraus) acc = add(acc, matmul(adjoint(m), m));
            worst_complete = std::max(worst_complete, testutil::dist(acc, CMat::identity(d)));
        }

        const OperatorSubspace back = from_channel_pair(ch.e, ch.f);
        if (back.dim() != s.dim()) {
            out.fail("span dimension changed");
            continue;
        }
        for (const OperatorSubspace* from : {&back, &s}) {
            const OperatorSubspace* to = (from == &back) ? &s : &back;
            for (const CMat& b : from->basis) {
                CMat proj = CMat::zeros(s.d, s.d);
                for (const CMat& e : to->basis) proj = add(proj, scale(hs_inner(e, b), e));
                worst_round = std::max(worst_round, frob_norm(sub(b, proj)));
            }
        }
    }
    if (worst_complete > 1e-10) out.fail(fmt("completeness %.2e", worst_complete));
    if (worst_round > 1e-8) out.fail(fmt("roundtrip %.2e", worst_round));
    if (out.pass)
        out.detail = fmt("completeness %.1e", worst_complete) + fmt(", span roundtrip %.1e", worst_round);
}

void c10_end_to_end_simulation(Outcome& out) {
    // one traceless direction, settled by one use on the mixed input
    {
        const OperatorSubspace s = from_generators({testutil::diag({Cx(1, 0), Cx(-1, 0)})});
        const ChannelPair ch = channels_from_subspace(s);
        const CMat phi = discrimination_input(scale(0.5, CMat::identity(2)));
        const CMat in = matmul(phi, adjoint(phi));
        const double ov = output_overlap(apply_parallel(ch.e, 1, in), apply_parallel(ch.f, 1, in));
        if (ov > 1e-8) out.fail(fmt("traceless overlap %.2e", ov));
    }
    // the identity direction never discriminates
    {
        const OperatorSubspace s = from_generators({CMat::identity(2)});
        const ChannelPair ch = channels_from_subspace(s);
        std::mt19937_64 rng(0x10A);
        double least = 1.0;
        for (int i = 0; i < 100; ++i) {
            const CMat phi = discrimination_input(testutil::random_density(2, rng));
            const CMat in = matmul(phi, adjoint(phi));
            least = std::min(least, output_overlap(apply_parallel(ch.e, 1, in), apply_parallel(ch.f, 1, in)));
        }
        if (least <= 0.05) out.fail(fmt("identity overlap dipped to %.2e", least));
    }
    // the quarter turn diagonal: orthogonal at two uses, separated at one
    {
        const OperatorSubspace s = from_generators({testutil::diag({Cx(1, 0), Cx(0, 1)})});
        const ChannelPair ch = channels_from_subspace(s);
        const CMat w = testutil::diag({Cx(0.5, 0), Cx(0, 0), Cx(0, 0), Cx(0.5, 0)});
        const CMat phi2 = discrimination_input(w);
        const CMat in2 = matmul(phi2, adjoint(phi2));
        const double ov2 = output_overlap(apply_parallel(ch.e, 2, in2), apply_parallel(ch.f, 2, in2));
        if (ov2 > 1e-8) out.fail(fmt("two use overlap %.2e", ov2));

        std::mt19937_64 rng(0x10B);
        double least = 1.0;
        for (int i = 0; i < 200; ++i) {
            const CMat phi = discrimination_input(testutil::random_density(2, rng));
            const CMat in = matmul(phi, adjoint(phi));
            least = std::min(least, output_overlap(apply_parallel(ch.e, 1, in), apply_parallel(ch.f, 1, in)));
        }
        if (least <= 1e-4) out.fail(fmt("single use overlap dipped to %.2e", least));
    }
    if (out.pass) out.detail = "synthesized channels discriminate exactly when predicted";
}

} // namespace

int main() {
    int failures = 0;
    failures += run_criterion(1, 1000, c1_single_copy_boundary);
    failures += run_criterion(2, 5000, c2_two_copy_threshold);
    failures += run_criterion(3, 10000, c3_closed_forms);
    failures += run_criterion(4, 60000, c4_right_angle_counterexample);
    failures += run_criterion(5, 600000, c5_threshold_progression);
    failures += run_criterion(6, 5000, c6_field_angle_exact);
    failures += run_criterion(7, 120000, c7_random_single_generator);
    failures += run_criterion(8, 120000, c8_random_hermitian_spans);
    failures += run_criterion(9, 30000, c9_synthesis_roundtrip);
    failures += run_criterion(10, 120000, c10_end_to_end_simulation);
    std::printf("%d of 10 criteria passed\n", 10 - failures);
    return failures;
}
