// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "macwt/channel_model.hpp"
#include "macwt/coding.hpp"
#include "macwt/error.hpp"
#include "macwt/info_measures.hpp"
#include "macwt/key_protocol.hpp"
#include "macwt/leakage_audit.hpp"
#include "macwt/rate_regions.hpp"
#include "oracles.hpp"

using namespace macwt;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

// Collects failed conditions; the first few are kept for the report line.
struct Check {
    Outcome out;
    int failures = 0;
    void expect(bool ok, const std::string& what)
    {
        if (ok) return;
        out.pass = false;
        if (failures++ < 3) out.detail += (out.detail.empty() ? "" : "; ") + what;
    }
    void note(const std::string& s)
    {
        if (out.pass) out.detail += (out.detail.empty() ? "" : "; ") + s;
    }
};

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

const InputPair kUniform = InputPair::uniform({2, 2, 4, 4});

bool near(const RatePentagon& p, double a, double b, double c, double tol)
{
    return std::abs(p.cap1 - a) <= tol && std::abs(p.cap2 - b) <= tol && std::abs(p.cap_sum - c) <= tol;
}

Outcome region_arithmetic()
{
    Check c;
    const auto id = fixtures::get("CH-ID"), copy = fixtures::get("CH-COPY-EVE");
    const auto in1 = InputPair::uniform(id.sizes());
    c.expect(near(secrecy_pentagon(id, in1), 1, 1, 2, 1e-9), "CH-ID secrecy pentagon");
    c.expect(near(mac_pentagon(id, in1), 1, 1, 2, 1e-9), "CH-ID MAC pentagon");
    c.expect(near(secrecy_pentagon(copy, kUniform), 0, 0, 0, 1e-9), "CH-COPY-EVE secrecy pentagon");
    c.expect(near(mac_pentagon(copy, kUniform), 1, 1, 2, 1e-9), "CH-COPY-EVE MAC pentagon");
    return c.out;
}

Outcome containment()
{
    Check c;
    std::mt19937_64 g(2024);
    const int reps = 200;
    for (int rep = 0; rep < reps; ++rep) {
        const auto ch = oracle::random_channel(g, {2, 2, 4, 4});
        const InputPair in(oracle::random_pmf(g, 2), oracle::random_pmf(g, 2));
        const auto s = secrecy_pentagon(ch, in), m = mac_pentagon(ch, in);
        c.expect(s.cap1 <= m.cap1 + 1e-12 && s.cap2 <= m.cap2 + 1e-12 && s.cap_sum <= m.cap_sum + 1e-12,
                 "containment broken at instance " + std::to_string(rep));
        // same Bob, Eve's output drawn independently of the inputs
        const auto pz = oracle::random_pmf(g, 4);
        const auto blind = make_channel({2, 2, 4, 4}, [&](std::size_t a, std::size_t b, std::size_t y, std::size_t z) {
            return ch.bob_row(a, b)[y] * pz[z];
        });
        const auto sb = secrecy_pentagon(blind, in), mb = mac_pentagon(blind, in);
        c.expect(near(sb, mb.cap1, mb.cap2, mb.cap_sum, 1e-9), "blind Eve not equal at instance " + std::to_string(rep));
    }
    c.note(std::to_string(reps) + " channels");
    return c.out;
}

Outcome ramp_constants_match()
{
    Check c;
    for (const auto& name : {"CH-ID", "CH-XOR-EVE", "CH-BSC-EVE"}) {
        const auto ch = fixtures::get(name);
        const auto in = InputPair::uniform(ch.sizes());
        const auto t = oracle::terms(ch, in);
        const auto rc = ramp_constants(ch, in);
        const int l1 = oracle::smallest_integer_at_least(t.i1y / (t.i1y - t.i1z));
        const int l2 = oracle::smallest_integer_at_least(t.i2y / (t.i2y - t.i2z));
        c.expect(rc.lambda1 == l1 && rc.lambda2 == l2, std::string(name) + " lambda mismatch");
        c.note(std::string(name) + " (" + std::to_string(rc.lambda1) + "," + std::to_string(rc.lambda2) + ")");
    }
    bool raised = false;
    try {
        ramp_constants(fixtures::get("CH-COPY-EVE"), kUniform);
    } catch (const macwt::Error& e) {
        raised = e.code() == ErrorCode::NoPositiveSecrecyRate;
    }
    c.expect(raised, "CH-COPY-EVE did not raise NoPositiveSecrecyRate");
    return c.out;
}

Outcome schedule_convergence()
{
    Check c;
    for (const auto& name : {"CH-ID", "CH-BSC-EVE", "CH-XOR-EVE"}) {
        const auto ch = fixtures::get(name);
        const auto in = InputPair::uniform(ch.sizes());
        const auto sch = slot_schedule(ch, in, 6);
        const auto& first = sch.per_slot.front();
        for (int k = 2; k <= 6; ++k)
            for (int l : {1, 2, 5, 99}) {
                const auto o = overall_rate(sch, k, l);
                const auto& e = sch.per_slot[static_cast<std::size_t>(k - 1)];
                c.expect(std::abs((e.keyed1 - o.r1) - (e.keyed1 - first.keyed1) / (1 + l)) <= 1e-12 &&
                             std::abs((e.keyed2 - o.r2) - (e.keyed2 - first.keyed2) / (1 + l)) <= 1e-12,
                         std::string(name) + " gap identity at k=" + std::to_string(k));
            }
        const auto o = overall_rate(sch, 6, 99);
        const auto m = mac_pentagon(ch, in);
        if (std::string(name) == "CH-ID")
            c.expect(std::abs(o.r1 - m.cap1) <= 0.01 * m.cap1 && std::abs(o.r2 - m.cap2) <= 0.01 * m.cap2,
                     "CH-ID l=99 not within 1% of the MAC cap");
        c.note(std::string(name) + " l=99 R1=" + num(o.r1));
    }
    return c.out;
}

Outcome one_time_pad()
{
    Check c;
    const std::vector<double> half{0.5, 0.5};
    std::uint64_t largest = 0;
    double worst = 0;
    for (const auto& name : fixtures::names()) {
        const auto ch = fixtures::get(name);
        for (std::uint64_t s = 0; s < 3; ++s) {
            Rng r1(s * 2 + 1), r2(s * 2 + 2);
            const auto m1 = build_mac(r1, half, 3, 2, 1), m2 = build_mac(r2, half, 3, 2, 2);
            for (int u = 1; u <= 2; ++u) {
                const auto rep = exact_conditional_leakage(ch, keyed_law(m1), keyed_law(m2), u);
                worst = std::max(worst, std::abs(rep.value));
                largest = std::max(largest, rep.enumeration);
            }
        }
    }
    c.expect(worst <= 1e-12, "keyed part leaks " + num(worst));
    c.expect(largest <= (1u << 16), "enumeration " + std::to_string(largest));
    c.note("max |I| " + num(worst) + ", states " + std::to_string(largest));
    return c.out;
}

Outcome sum_bound()
{
    Check c;
    std::mt19937_64 g(77);
    const std::vector<double> half{0.5, 0.5};
    double slack = 1e9;
    const int reps = 80;
    for (int rep = 0; rep < reps; ++rep) {
        const auto ch = oracle::random_channel(g, {2, 2, 2, 2 + std::size_t(rep % 3)});
        Rng r1(1000 + rep), r2(2000 + rep);
        const std::size_t n = 1 + rep % 3;
        const auto b1 = build_wiretap(r1, half, n, 1, rep % 2, 1);
        const auto b2 = build_wiretap(r2, half, n, 1, (rep / 2) % 2, 2);
        const auto l1 = wiretap_law(b1), l2 = wiretap_law(b2);
        const double sum = exact_slot_leakage(ch, l1, l2).value;
        const double bound =
            exact_conditional_leakage(ch, l1, l2, 1).value + exact_conditional_leakage(ch, l1, l2, 2).value;
        c.expect(sum <= bound + 1e-9, "instance " + std::to_string(rep));
        slack = std::min(slack, bound - sum);
    }
    c.note(std::to_string(reps) + " instances, min slack " + num(slack));
    return c.out;
}

Outcome multislot_audit()
{
    Check c;
    std::uint64_t largest = 0;
    struct Case {
        const char* name;
        int slots;
        unsigned rand;
    };
    // BSC stays at two slots: three of them need about 2^30 states
    for (const Case cs : {Case{"CH-XOR-EVE", 3, 0}, Case{"CH-BSC-EVE", 2, 1}, Case{"CH-ID", 3, 0}}) {
        const auto ch = fixtures::get(cs.name);
        const auto in = InputPair::uniform(ch.sizes());
        PlanRequest req;
        req.n1 = 2;
        req.l = 1;
        req.num_slots = cs.slots;
        req.seed = 5;
        req.rand_bits = cs.rand;
        const auto cfg = plan(ch, in, req);
        const auto books = build_codebooks(ch, in, cfg);
        std::vector<double> wl(static_cast<std::size_t>(cs.slots) + 1, 0.0);
        for (int j = 1; j <= cs.slots; ++j) wl[j] = wiretap_part_leakage(ch, cfg, books, j).value;
        const bool blind = ch.sizes().z == 1;
        for (int l = 1; l <= cs.slots; ++l) {
            double last = -1;
            for (int k = l; k <= cs.slots; ++k) {
                const auto r = exact_multislot_leakage(ch, cfg, books, l, k);
                largest = std::max(largest, r.enumeration);
                const std::string at = std::string(cs.name) + " l=" + std::to_string(l) + " k=" + std::to_string(k);
                c.expect(r.value >= last - 1e-12, at + " decreased");
                // slot l's own wiretap part plus the slot that supplied its key
                c.expect(r.value <= wl[l] + wl[l - 1] + 1e-9, at + " above wiretap leakage");
                if (blind) c.expect(r.value == 0.0, at + " nonzero with blind Eve");
                last = r.value;
            }
        }
    }
    c.expect(largest <= (1u << 24), "enumeration " + std::to_string(largest));
    c.note("max states " + std::to_string(largest));
    return c.out;
}

Outcome estimator_consistency()
{
    Check c;
    const std::vector<double> half{0.5, 0.5};
    for (const auto& name : fixtures::names()) {
        const auto ch = fixtures::get(name);
        const auto info = information_terms(ch, InputPair::uniform(ch.sizes()));
        CodebookOptions o;
        o.distinct_bins = true;
        Rng r1(derive_seed(9, {1})), r2(derive_seed(9, {2}));
        const auto b1 = build_wiretap(r1, half, 2, 1, default_rand_bits(2, info.x1_z), 1, o);
        const auto b2 = build_wiretap(r2, half, 2, 1, default_rand_bits(2, info.x2_z), 2, o);
        const auto l1 = wiretap_law(b1), l2 = wiretap_law(b2);
        const double exact = exact_slot_leakage(ch, l1, l2).value;
        const auto mc = mc_slot_leakage(ch, l1, l2, 100000, 13);
        c.expect(std::abs(mc.value - exact) <= 3 * mc.spread,
                 name + " exact " + num(exact) + " mc " + num(mc.value) + " spread " + num(mc.spread));
        c.note(name + " " + num(exact) + "/" + num(mc.value));
    }
    return c.out;
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

Outcome protocol_soundness(const std::string& cli)
{
    Check c;
    const auto ch = fixtures::get("CH-ID");
    PlanRequest req;
    req.n1 = 2;
    req.l = 1;
    req.num_slots = 5;
    req.seed = 21;
    const auto cfg = plan(ch, kUniform, req);
    const auto books = build_codebooks(ch, kUniform, cfg);
    std::vector<ProtocolTrace> traces;
    for (std::uint64_t t = 0; t < 1000; ++t) traces.push_back(run(ch, cfg, books, t));
    for (const auto& e : error_rate(traces)) c.expect(e.errors == 0, "slot " + std::to_string(e.slot) + " errors");

    const auto base = fs::temp_directory_path() / ("macwt_accept_" + std::to_string(::getpid()));
    fs::remove_all(base);
    for (const char* d : {"a", "b"}) {
        const auto dir = base / d;
        fs::create_directories(dir);
        const std::string cmd = cli + " simulate --channel CH-ID --slots 5 --trials 200 --seed 21 --dump-trace --out " +
                                dir.string() + " >/dev/null 2>&1";
        const int s = std::system(cmd.c_str());
        c.expect(WIFEXITED(s) && WEXITSTATUS(s) == 0, "CLI run failed");
    }
    for (const char* f : {"simulate.csv", "trace.json"}) {
        const auto a = slurp(base / "a" / f);
        c.expect(!a.empty() && a == slurp(base / "b" / f), std::string(f) + " differs between reruns");
    }
    std::istringstream csv(slurp(base / "a" / "simulate.csv"));
    std::string line;
    std::getline(csv, line);
    while (std::getline(csv, line)) {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
        c.expect(cells.size() == 6 && cells[3] == "0", "CLI Pe nonzero: " + line);
    }
    fs::remove_all(base);
    c.note("1000 library runs, 200 CLI runs");
    return c.out;
}

Outcome mi_identities()
{
    Check c;
    JointPmf bsc({{"X", 2}, {"Y", 2}}, {0.375, 0.125, 0.125, 0.375});
    const double i = mutual_information(bsc, {"X"}, {"Y"});
    c.expect(std::abs(i - 0.188722) <= 1e-6, "BSC(0.25) gives " + num(i));
    c.note("I=" + num(i));
    std::mt19937_64 g(31);
    for (int rep = 0; rep < 50; ++rep) {
        const auto a = oracle::random_pmf(g, 3), b = oracle::random_pmf(g, 2);
        std::vector<double> m;
        for (double x : a)
            for (double y : b) m.push_back(x * y);
        JointPmf p({{"A", 3}, {"B", 2}}, m);
        c.expect(std::abs(mutual_information(p, {"A"}, {"B"})) <= 1e-12, "independent pair not 0");

        JointPmf q({{"A", 2}, {"B", 3}, {"C", 4}}, oracle::random_pmf(g, 24));
        const double lhs = mutual_information(q, {"A"}, {"B", "C"});
        const double rhs =
            mutual_information(q, {"A"}, {"B"}) + conditional_mutual_information(q, {"A"}, {"C"}, {"B"});
        c.expect(std::abs(lhs - rhs) <= 1e-9, "chain rule off by " + num(lhs - rhs));
    }
    return c.out;
}

}  // namespace

int main(int argc, char** argv)
{
    std::string cli = argc > 1 ? argv[1] : MACWT_CLI_PATH;
    struct Criterion {
        const char* id;
        const char* title;
        std::function<Outcome()> fn;
    };
    const std::vector<Criterion> all = {
        {"AC1", "region arithmetic on CH-ID and CH-COPY-EVE", region_arithmetic},
        {"AC2", "secrecy pentagon inside MAC pentagon", containment},
        {"AC3", "ramp constants against direct evaluation", ramp_constants_match},
        {"AC4", "overall rate gap and convergence", schedule_convergence},
        {"AC5", "keyed part leaks nothing", one_time_pad},
        {"AC6", "sum leakage below the two conditional leakages", sum_bound},
        {"AC7", "multi-slot leakage audit", multislot_audit},
        {"AC8", "Monte Carlo against exact leakage", estimator_consistency},
        {"AC9", "protocol decodes on CH-ID, reruns identical", [&] { return protocol_soundness(cli); }},
        {"AC10", "entropy and MI identities", mi_identities},
    };
    int failed = 0;
    for (const auto& cr : all) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = cr.fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += !o.pass;
        std::printf("%-4s %s  %s [%.2fs]  %s\n", cr.id, o.pass ? "PASS" : "FAIL", cr.title, secs, o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", int(all.size()) - failed, all.size());
    return failed ? 1 : 0;
}
