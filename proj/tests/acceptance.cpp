// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   acceptance [path/to/frechet-cli]
//
// Criteria 10 and 11 need the CLI binary; its path defaults to the build tree.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <new>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "frechet/frechet.hpp"
#include "test_util.hpp"

using namespace frechet;
using test::uniform_size;

// ---------------------------------------------------------------------------
// Allocation accounting for the memory contract.

namespace {
std::atomic<bool> g_tracking{false};
std::atomic<std::size_t> g_bytes{0};
std::atomic<std::size_t> g_largest{0};

void note_allocation(std::size_t n) {
    if (g_tracking.load(std::memory_order_relaxed)) {
        g_bytes += n;
        std::size_t prev = g_largest.load();
        while (prev < n && !g_largest.compare_exchange_weak(prev, n)) {
        }
    }
}
} // namespace

void* operator new(std::size_t n) {
    note_allocation(n);
    if (void* p = std::malloc(n == 0 ? 1 : n)) {
        return p;
    }
    throw std::bad_alloc();
}
void* operator new[](std::size_t n) { return ::operator new(n); }
void operator delete(void* p) noexcept { std::free(p); }
void operator delete[](void* p) noexcept { std::free(p); }
void operator delete(void* p, std::size_t) noexcept { std::free(p); }
void operator delete[](void* p, std::size_t) noexcept { std::free(p); }

namespace {

struct AllocationScope {
    AllocationScope() {
        g_bytes = 0;
        g_largest = 0;
        g_tracking = true;
    }
    ~AllocationScope() { g_tracking = false; }
    std::size_t bytes() const { return g_bytes.load(); }
    std::size_t largest() const { return g_largest.load(); }
};

// ---------------------------------------------------------------------------

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

/// Minimum wall time of `k` runs of `f`.
double best_of(int k, const std::function<void()>& f) {
    double best = INFINITY;
    for (int r = 0; r < k; ++r) {
        const auto t0 = Clock::now();
        f();
        best = std::min(best, seconds_since(t0));
    }
    return best;
}

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void expect(bool cond, const std::string& what) {
        if (!cond && ok) {
            detail << "first failure: " << what << "; ";
        }
        ok = ok && cond;
    }
};

int g_failures = 0;

void report(int id, const std::string& title, Check& c) {
    std::cout << (c.ok ? "PASS" : "FAIL") << "  [" << id << "] " << title << "  (" << c.detail.str() << ")"
              << std::endl;
    if (!c.ok) {
        ++g_failures;
    }
}

const Euclidean euclid;

std::string str(double x) {
    std::ostringstream s;
    s.precision(17);
    s << x;
    return s.str();
}

// ---------------------------------------------------------------------------

void criterion_1_and_3a(Check& c1, Check& c3, std::size_t& selection_trials) {
    std::mt19937_64 rng(1001);
    const auto t0 = Clock::now();
    for (int t = 0; t < 1000; ++t) {
        const std::size_t np = uniform_size(rng, 1, 13);
        const std::size_t nq = uniform_size(rng, 1, 14 - np);
        const auto p = test::walk(rng, np);
        const auto q = test::walk(rng, nq);
        const double expected = frechet_bruteforce(p, q, euclid);
        auto d = distance_matrix(p, q, euclid);
        const auto dm = d;
        const double got[] = {frechet_recursive(p, q, euclid), frechet_full_matrix(p, q, euclid),
                              frechet_inplace(d), frechet_linear(p, q, euclid),
                              frechet_fast(row_source(p, q, euclid))};
        for (double g : got) {
            c1.expect(g == expected, "trial " + std::to_string(t) + ": " + str(g) + " != " + str(expected));
        }
        c3.expect(test::is_matrix_entry(dm, expected), "bruteforce trial " + std::to_string(t));
        ++selection_trials;
    }
    const double secs = seconds_since(t0);
    c1.expect(secs < 30.0, "runtime " + str(secs) + " s");
    c1.detail << "1000 pairs, P+Q<=14, 5 kernels vs brute force, " << secs << " s";
}

void criterion_2_and_3b(Check& c2, Check& c3, std::size_t& selection_trials) {
    std::mt19937_64 rng(1002);
    const auto t0 = Clock::now();
    StateRow<double> ws;
    for (int t = 0; t < 200; ++t) {
        const auto p = test::walk(rng, uniform_size(rng, 1, 512));
        const auto q = test::walk(rng, uniform_size(rng, 1, 512));
        auto d = distance_matrix(p, q, euclid);
        const auto dm = d;
        const double full = frechet_full_matrix(p, q, euclid);
        const double inplace = frechet_inplace(d);
        const double linear = frechet_linear(p, q, euclid, ws);
        auto rows = row_source(p, q, euclid);
        const double fast = frechet_fast(rows, ws);
        const std::string at = "trial " + std::to_string(t);
        c2.expect(full == inplace && full == linear && full == fast, at);
        c3.expect(test::is_matrix_entry(dm, full), at);
        ++selection_trials;
    }
    const double secs = seconds_since(t0);
    c2.expect(secs < 60.0, "runtime " + str(secs) + " s");
    c2.detail << "200 pairs, P,Q<=512, 4 kernels bit-exact, " << secs << " s";
}

void criterion_4() {
    Check c;
    std::mt19937_64 rng(1004);
    double worst_slack = 0.0;
    for (int t = 0; t < 1000; ++t) {
        const auto a = test::walk(rng, uniform_size(rng, 1, 64));
        const auto b = test::walk(rng, uniform_size(rng, 1, 64));
        const auto e = test::walk(rng, uniform_size(rng, 1, 64));
        const double ab = frechet_linear(a, b, euclid);
        const double ba = frechet_linear(b, a, euclid);
        const double be = frechet_linear(b, e, euclid);
        const double ae = frechet_linear(a, e, euclid);
        const std::string at = "triple " + std::to_string(t);
        c.expect(ab == ba, at + " symmetry");
        c.expect(ae <= (ab + be) * (1.0 + 1e-9), at + " triangle");
        worst_slack = std::max(worst_slack, ae - (ab + be));
        c.expect(ab >= hausdorff_discrete(a, b, euclid), at + " hausdorff a,b");
        c.expect(be >= hausdorff_discrete(b, e, euclid), at + " hausdorff b,e");
        c.expect(ae >= hausdorff_discrete(a, e, euclid), at + " hausdorff a,e");
    }
    c.detail << "1000 triples, max(d(a,c) - d(a,b) - d(b,c)) = " << worst_slack;
    report(4, "metric axioms and Hausdorff dominance", c);
}

void criterion_5() {
    Check c;
    std::mt19937_64 rng(1005);
    std::size_t longest = 0;
    for (int t = 0; t < 500; ++t) {
        const auto p = test::walk(rng, uniform_size(rng, 1, 40));
        const auto q = test::walk(rng, uniform_size(rng, 1, 40));
        std::vector<std::size_t> rp(p.size()), rq(q.size());
        for (auto& r : rp) {
            r = uniform_size(rng, 0, 1) * uniform_size(rng, 0, 4);
        }
        for (auto& r : rq) {
            r = uniform_size(rng, 0, 1) * uniform_size(rng, 0, 4);
        }
        const auto p2 = test::with_repeats(p, rp);
        const auto q2 = test::with_repeats(q, rq);
        longest = std::max({longest, p2.size(), q2.size()});
        const double d = frechet_linear(p, q, euclid);
        c.expect(frechet_linear(p2, q, euclid) == d && frechet_linear(p, q2, euclid) == d
                     && frechet_linear(p2, q2, euclid) == d,
                 "curve " + std::to_string(t));
    }
    c.detail << "500 curves, up to " << longest << " points after duplication";
    report(5, "repeat-point invariance", c);
}

void criterion_6() {
    Check c;
    std::mt19937_64 rng(1006);
    std::size_t compared = 0;
    for (int t = 0; t < 12; ++t) {
        const std::size_t b = t == 0 ? 256 : uniform_size(rng, 1, 256);
        std::vector<Curve<double>> curves;
        for (std::size_t k = 0; k < b; ++k) {
            curves.push_back(test::walk(rng, uniform_size(rng, 1, 80)));
        }
        const auto q = test::walk(rng, uniform_size(rng, 1, 80));
        std::vector<double> expected;
        for (const auto& p : curves) {
            expected.push_back(frechet_linear(p, q, euclid));
        }
        const std::span<const Curve<double>> all(curves);
        const auto batch = pad_batch(all);
        for (std::size_t w : {1u, 4u, 16u, 32u}) {
            c.expect(frechet_batch(batch, q, euclid, w) == expected,
                     "B=" + std::to_string(b) + " lane_width=" + std::to_string(w));
            for (std::size_t workers : {1u, 4u}) {
                for (bool sort : {false, true}) {
                    const ParallelOptions opts{workers, w, 0, sort};
                    c.expect(frechet_batch_parallel(all, q, euclid, opts) == expected,
                             "parallel B=" + std::to_string(b) + " lane_width=" + std::to_string(w)
                                 + " workers=" + std::to_string(workers));
                }
            }
            compared += b;
        }
    }
    c.detail << "12 batches (B<=256, lengths 1..80), lane_width {1,4,16,32} x workers {1,4}, " << compared
             << " lane results per configuration group";
    report(6, "batch matches scalar bit-exactly", c);
}

void criterion_7() {
    Check c;
    const CustomMetric abs_diff("abs", [](std::span<const double> a, std::span<const double> b) {
        return std::abs(a[0] - b[0]);
    });
    std::mt19937_64 rng(1007);
    std::size_t exact = 0;
    for (int t = 0; t < 1000; ++t) {
        const auto p = test::walk(rng, uniform_size(rng, 1, 100));
        const auto q = test::walk(rng, uniform_size(rng, 1, 100));
        const double got = dtw_distance(row_source(p, q, euclid));
        const double want = dtw_oracle(distance_matrix(p, q, euclid));
        c.expect(std::abs(got - want) <= 1e-6 * std::abs(want), "pair " + std::to_string(t));
        exact += got == want ? 1 : 0;
    }
    auto line = [](std::vector<double> xs) { return Curve<double>(1, std::move(xs)); };
    auto dtw = [&](const Curve<double>& p, const Curve<double>& q) {
        return dtw_distance(row_source(p, q, abs_diff));
    };
    const auto a = line({-1, 0, -1, -2});
    const auto b = line({0, -1});
    const auto e = line({2, 0, 1, 2});
    c.expect(dtw(a, e) == 9.0 && dtw(a, b) == 2.0 && dtw(b, e) == 6.0, "frozen counterexample values");
    c.expect(dtw(a, e) > dtw(a, b) + dtw(b, e), "frozen counterexample violates the triangle inequality");
    c.detail << exact << "/1000 pairs bit-exact; counterexample 9 > 2 + 6";
    report(7, "DTW equals oracle; triangle counterexample", c);
}

void criterion_8() {
    Check c;
    std::mt19937_64 rng(1008);
    for (int t = 0; t < 10000; ++t) {
        const std::size_t alphabet = t % 2 == 0 ? 2 : 26;
        std::string p(uniform_size(rng, 0, 64), 'a'), q(uniform_size(rng, 0, 64), 'a');
        for (auto* s : {&p, &q}) {
            for (auto& ch : *s) {
                ch = static_cast<char>('a' + uniform_size(rng, 0, alphabet - 1));
            }
        }
        c.expect(levenshtein_distance(p, q) == levenshtein_oracle(p, q), "pair " + std::to_string(t));
    }
    c.expect(levenshtein_distance("kitten", "sitting") == 3, "kitten/sitting");
    c.expect(levenshtein_distance("", "") == 0, "empty/empty");
    c.expect(levenshtein_distance("", "abcde") == 5, "empty/abcde");
    c.expect(levenshtein_distance("abc", "") == 3, "abc/empty");
    c.detail << "10000 pairs (alphabets 2 and 26, lengths 0..64), kitten/sitting = 3, empty cases";
    report(8, "Levenshtein equals Wagner-Fischer", c);
}

void criterion_9() {
    Check c;
    constexpr std::size_t P = 400, Q = 300, B = 16;
    const auto p = gen_random_walk<double>({P, 91});
    const auto q = gen_random_walk<double>({Q, 92});
    const std::size_t table_bytes = P * Q * sizeof(double);

    StateRow<double> ws;
    std::size_t linear_bytes = 0, fast_bytes = 0, batch_bytes = 0, full_bytes = 0;
    {
        AllocationScope scope;
        (void)frechet_linear(p, q, euclid, ws);
        linear_bytes = scope.bytes();
    }
    c.expect(ws.size() == Q, "linear workspace " + std::to_string(ws.size()));
    {
        StateRow<double> fresh;
        AllocationScope scope;
        auto rows = row_source(p, q, euclid);
        (void)frechet_fast(rows, fresh);
        fast_bytes = scope.bytes();
        c.expect(fresh.size() == Q, "fast workspace " + std::to_string(fresh.size()));
        c.expect(rows.workspace_size() == Q, "row source buffer " + std::to_string(rows.workspace_size()));
    }

    std::vector<Curve<double>> curves;
    for (std::size_t k = 0; k < B; ++k) {
        curves.push_back(gen_random_walk<double>({P - k, 100 + k}));
    }
    const auto batch = pad_batch(std::span<const Curve<double>>(curves));
    std::vector<double> bws;
    {
        AllocationScope scope;
        (void)frechet_batch(batch, q, euclid, 8, bws);
        batch_bytes = scope.bytes();
    }
    c.expect(bws.size() == B * Q, "batch workspace " + std::to_string(bws.size()));
    {
        AllocationScope scope;
        (void)frechet_full_matrix(p, q, euclid);
        full_bytes = scope.largest();
    }
    // The tracker must see the table of the full-matrix kernel, or it proves nothing.
    c.expect(full_bytes >= table_bytes, "allocation tracker missed the full-matrix table");
    c.expect(linear_bytes < table_bytes, "frechet_linear allocated " + std::to_string(linear_bytes));
    c.expect(fast_bytes < table_bytes, "frechet_fast allocated " + std::to_string(fast_bytes));
    c.expect(batch_bytes < B * table_bytes && batch_bytes < table_bytes,
             "frechet_batch allocated " + std::to_string(batch_bytes));
    c.detail << "P=" << P << " Q=" << Q << " B=" << B << ": workspace Q / Q / B*Q; bytes allocated linear "
             << linear_bytes << ", fast " << fast_bytes << ", batch " << batch_bytes << " vs P*Q table "
             << table_bytes;
    report(9, "memory contract", c);
}

// ---------------------------------------------------------------------------

struct Timed {
    double linear = 0, full = 0;
};

Timed time_scalar(std::size_t n, std::size_t len, int k) {
    const auto data = make_bench_data<float>(n, len, 1);
    const Euclidean m;
    StateRow<float> ws;
    volatile float sink = 0;
    Timed t{INFINITY, INFINITY};
    // Interleave the two kernels so drift in clock or load hits both.
    for (int r = 0; r < k; ++r) {
        t.full = std::min(t.full, best_of(1, [&] {
                              for (const auto& p : data.curves) {
                                  sink = sink + frechet_full_matrix(p, data.reference, m);
                              }
                          }));
        t.linear = std::min(t.linear, best_of(1, [&] {
                                for (const auto& p : data.curves) {
                                    sink = sink + frechet_linear(p, data.reference, m, ws);
                                }
                            }));
    }
    return t;
}

void criterion_10(const std::string& cli) {
    Check c;
    // Timing ratio treated as "not slower": both sides of (a) at desk scale and of (c).
    constexpr double noise = 1.10;

    // (a) desk scale and the long-curve case
    const auto desk = time_scalar(256, 256, 7);
    c.expect(desk.linear <= noise * desk.full,
             "(a) linear " + str(desk.linear) + " s vs full_matrix " + str(desk.full) + " s at N=P=256");
    const auto large = time_scalar(32, 2048, 3);
    const double large_ratio = large.full / large.linear;
    c.expect(large_ratio >= 1.5, "(a) full_matrix/linear = " + str(large_ratio) + " at P=2048");
    c.detail << "(a) full/linear " << desk.full / desk.linear << "x at P=256, " << large_ratio << "x at P=2048; ";

    // (b), (c) on pre-packed batches of 8 * lane_width curves
    const auto data = make_bench_data<float>(256, 256, 1);
    const Euclidean m;
    for (std::size_t w : {8u, 16u, 32u}) {
        std::vector<CurveBatch<float>> batches;
        const std::span<const Curve<float>> all(data.curves);
        for (std::size_t first = 0; first < all.size(); first += 8 * w) {
            batches.push_back(pad_batch(all.subspan(first, std::min(8 * w, all.size() - first))));
        }
        volatile float sink = 0;
        double t_batch = INFINITY, t_base = INFINITY;
        for (int r = 0; r < 9; ++r) {
            t_batch = std::min(t_batch, best_of(1, [&] {
                                   for (const auto& b : batches) {
                                       sink = sink + frechet_batch(b, data.reference, m, w)[0];
                                   }
                               }));
            t_base = std::min(t_base, best_of(1, [&] {
                                  for (const auto& b : batches) {
                                      sink = sink + baseline_sum(b, data.reference, m, w)[0];
                                  }
                              }));
        }
        const double speedup = desk.linear / t_batch;
        c.expect(speedup >= 2.0, "(b) batch/linear = " + str(speedup) + " at lane_width " + std::to_string(w));
        c.expect(t_base <= noise * t_batch, "(c) baseline " + str(t_base) + " s slower than batch " + str(t_batch)
                                        + " s at lane_width " + std::to_string(w));
        c.detail << "W=" << w << ": batch " << speedup << "x linear, baseline/batch throughput "
                 << t_batch / t_base << "; ";
    }

    // default sweep wall time
    const auto t0 = Clock::now();
    const int rc = std::system((cli + " bench --out acceptance_sweep_1.csv > /dev/null 2>&1").c_str());
    const double sweep = seconds_since(t0);
    c.expect(rc == 0, "default bench sweep exited with " + std::to_string(rc));
    c.expect(sweep < 300.0, "default sweep took " + str(sweep) + " s");
    c.detail << "default sweep " << sweep << " s";
    report(10, "performance properties", c);
}

std::vector<std::string> checksum_column(const std::string& path) {
    std::ifstream in(path);
    std::vector<std::string> out;
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
        out.push_back(line.substr(line.rfind(',') + 1));
    }
    return out;
}

void criterion_11(const std::string& cli) {
    Check c;
    // The first invocation ran as the default sweep in criterion 10.
    const int rc = std::system((cli + " bench --out acceptance_sweep_2.csv > /dev/null 2>&1").c_str());
    c.expect(rc == 0, "second bench invocation exited with " + std::to_string(rc));
    const auto first = checksum_column("acceptance_sweep_1.csv");
    const auto second = checksum_column("acceptance_sweep_2.csv");
    c.expect(!first.empty(), "empty bench output");
    c.expect(first == second, "checksum columns differ");
    c.detail << first.size() << " rows, identical checksum columns";
    report(11, "bench reproducibility", c);
}

} // namespace

int main(int argc, char** argv) {
    const std::string cli = argc > 1 ? argv[1] : FRECHET_CLI_PATH;

    Check c1, c2, c3;
    std::size_t selection_trials = 0;
    criterion_1_and_3a(c1, c3, selection_trials);
    report(1, "oracle equivalence", c1);
    criterion_2_and_3b(c2, c3, selection_trials);
    report(2, "variant agreement at scale", c2);
    c3.detail << selection_trials << " results, each an entry of its distance matrix";
    report(3, "selection property", c3);
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10(cli);
    criterion_11(cli);

    std::cout << (g_failures == 0 ? "all criteria pass" : std::to_string(g_failures) + " criteria fail")
              << std::endl;
    return g_failures == 0 ? 0 : 1;
}
