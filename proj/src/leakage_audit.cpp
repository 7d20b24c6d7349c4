#include "macwt/leakage_audit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>

#include "macwt/error.hpp"

namespace macwt {

EncoderLaw wiretap_law(const WiretapCodebook& book)
{
    EncoderLaw law;
    law.msg_bits = book.msg_bits;
    law.n = book.n;
    const double p = 1.0 / static_cast<double>(book.bin_size());
    law.words.resize(book.num_bins());
    for (std::size_t m = 0; m < book.num_bins(); ++m)
        for (std::size_t r = 0; r < book.bin_size(); ++r) law.words[m].emplace_back(book.word(m, r), p);
    return law;
}

EncoderLaw mac_law(const MacCodebook& book)
{
    EncoderLaw law;
    law.msg_bits = book.msg_bits;
    law.n = book.n;
    for (const auto& w : book.words) law.words.push_back({{w, 1.0}});
    return law;
}

EncoderLaw keyed_law(const MacCodebook& book)
{
    EncoderLaw law;
    law.msg_bits = book.msg_bits;
    law.n = book.n;
    const double p = 1.0 / static_cast<double>(book.words.size());
    std::vector<std::pair<Codeword, double>> all;
    for (const auto& w : book.words) all.emplace_back(w, p);
    law.words.assign(book.words.size(), all);
    return law;
}

namespace {

constexpr double kLn2 = 0.69314718055994530942;

double power(std::size_t base, std::size_t exp)
{
    return std::pow(static_cast<double>(base), static_cast<double>(exp));
}

void require_budget(double work, std::uint64_t budget, const std::string& what)
{
    if (work > static_cast<double>(budget)) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.0f", work);
        throw Error(ErrorCode::BudgetExceeded, what + " needs " + buf + " states, budget is " + std::to_string(budget));
    }
}

// p(z^n | c1, c2) for every output block, first symbol most significant.
std::vector<double> block_law(const ChannelSpec& spec, const Codeword& c1, const Codeword& c2)
{
    std::vector<double> out{1.0};
    const std::size_t zs = spec.sizes().z;
    for (std::size_t t = 0; t < c1.size(); ++t) {
        const auto row = spec.eve_row(c1[t], c2[t]);
        std::vector<double> next(out.size() * zs);
        for (std::size_t i = 0; i < out.size(); ++i)
            for (std::size_t z = 0; z < zs; ++z) next[i * zs + z] = out[i] * row[z];
        out = std::move(next);
    }
    return out;
}

void check_pair(const EncoderLaw& a, const EncoderLaw& b)
{
    if (a.n != b.n) throw Error(ErrorCode::DimensionMismatch, "encoder laws have different block lengths");
    if (a.words.empty() || b.words.empty()) throw Error(ErrorCode::EmptyInput, "encoder law without messages");
}

double law_work(const EncoderLaw& a, const EncoderLaw& b, std::size_t zblock)
{
    double s1 = 0, s2 = 0;
    for (const auto& v : a.words) s1 += static_cast<double>(v.size());
    for (const auto& v : b.words) s2 += static_cast<double>(v.size());
    return s1 * s2 * static_cast<double>(zblock);
}

std::string law_fingerprint(const EncoderLaw& a, const EncoderLaw& b)
{
    std::uint64_t h = 0x6c61770aULL;
    auto add = [&h](std::uint64_t v) { h = mix64(h ^ (v + 0x9e3779b97f4a7c15ULL)); };
    for (const auto* law : {&a, &b}) {
        add(law->msg_bits);
        add(law->n);
        for (const auto& ws : law->words)
            for (const auto& [w, p] : ws) {
                for (Symbol s : w) add(s);
                add(static_cast<std::uint64_t>(std::llround(p * 1e15)));
            }
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

double uniform_entropy(const EncoderLaw& a, const EncoderLaw& b)
{
    return std::log2(static_cast<double>(a.num_messages())) + std::log2(static_cast<double>(b.num_messages()));
}

}  // namespace

JointPmf exact_slot_joint(const ChannelSpec& spec, const EncoderLaw& law1, const EncoderLaw& law2, std::uint64_t budget)
{
    check_pair(law1, law2);
    const double zblock = power(spec.sizes().z, law1.n);
    require_budget(law_work(law1, law2, static_cast<std::size_t>(std::min(zblock, 1e18))), budget, "exact slot leakage");

    std::array<std::map<Codeword, std::size_t>, 2> distinct;
    for (int i = 0; i < 2; ++i) {
        const auto& law = i == 0 ? law1 : law2;
        for (const auto& ws : law.words)
            for (const auto& [w, p] : ws) distinct[i].emplace(w, 0);
        std::size_t id = 0;
        for (auto& [w, v] : distinct[i]) v = id++;
    }
    const std::size_t m1 = law1.num_messages(), m2 = law2.num_messages();
    const std::size_t x1 = distinct[0].size(), x2 = distinct[1].size();
    const auto zn = static_cast<std::size_t>(zblock);
    require_budget(static_cast<double>(m1) * m2 * x1 * x2 * zblock, budget, "exact slot joint table");

    std::vector<double> mass(m1 * m2 * x1 * x2 * zn, 0.0);
    const double pw = 1.0 / (static_cast<double>(m1) * static_cast<double>(m2));
    for (std::size_t a = 0; a < m1; ++a)
        for (std::size_t b = 0; b < m2; ++b)
            for (const auto& [c1, p1] : law1.words[a])
                for (const auto& [c2, p2] : law2.words[b]) {
                    const auto bl = block_law(spec, c1, c2);
                    const std::size_t base = (((a * m2 + b) * x1 + distinct[0].at(c1)) * x2 + distinct[1].at(c2)) * zn;
                    const double w = pw * p1 * p2;
                    for (std::size_t z = 0; z < zn; ++z) mass[base + z] += w * bl[z];
                }
    return JointPmf({{"W1", m1}, {"W2", m2}, {"X1", x1}, {"X2", x2}, {"Z", zn}}, std::move(mass));
}

LeakageReport exact_slot_leakage(const ChannelSpec& spec, const EncoderLaw& law1, const EncoderLaw& law2,
                                 std::uint64_t budget)
{
    const auto joint = exact_slot_joint(spec, law1, law2, budget);
    LeakageReport r;
    r.quantity = "I(W1,W2; Z^n)";
    r.value = mutual_information(joint, {"W1", "W2"}, {"Z"});
    r.method = "exact";
    r.enumeration = static_cast<std::uint64_t>(law_work(law1, law2, joint.axis_size("Z")));
    r.fingerprint = law_fingerprint(law1, law2);
    r.entropy_bound = uniform_entropy(law1, law2);
    return r;
}

LeakageReport exact_slot_leakage(const ChannelSpec& spec, const WiretapCodebook& book1, const WiretapCodebook& book2,
                                 std::uint64_t budget)
{
    return exact_slot_leakage(spec, wiretap_law(book1), wiretap_law(book2), budget);
}

LeakageReport exact_conditional_leakage(const ChannelSpec& spec, const EncoderLaw& law1, const EncoderLaw& law2,
                                        int user, std::uint64_t budget)
{
    if (user != 1 && user != 2) throw Error(ErrorCode::InvalidConfig, "user must be 1 or 2");
    const auto joint = exact_slot_joint(spec, law1, law2, budget);
    const std::string w = user == 1 ? "W1" : "W2";
    const std::string x = user == 1 ? "X2" : "X1";
    LeakageReport r;
    r.quantity = "I(" + w + "; Z^n | " + x + "^n)";
    r.value = conditional_mutual_information(joint, {w}, {"Z"}, {x});
    r.method = "exact";
    r.enumeration = static_cast<std::uint64_t>(law_work(law1, law2, joint.axis_size("Z")));
    r.fingerprint = law_fingerprint(law1, law2);
    r.entropy_bound = std::log2(static_cast<double>((user == 1 ? law1 : law2).num_messages()));
    return r;
}

LeakageReport wiretap_part_leakage(const ChannelSpec& spec, const SlotConfig& config,
                                   std::span<const SlotCodebooks> books, int k)
{
    const auto& plan = config.at(k);
    if (books.size() != config.slots.size())
        throw Error(ErrorCode::DimensionMismatch, "codebook set does not match the slot plan");
    LeakageReport r;
    if (plan.has_wiretap_part()) {
        const auto& b = books[static_cast<std::size_t>(k - 1)];
        r = exact_slot_leakage(spec, b.wiretap[0], b.wiretap[1], config.budget);
    } else {
        r.method = "exact";
    }
    r.quantity = "I(W_" + std::to_string(k) + ",1; Z_" + std::to_string(k) + ",1)";
    r.fingerprint = config.fingerprint();
    r.k = r.l = k;
    return r;
}

namespace {

// Sizes of the forward recursion for one slot.
struct SlotShape {
    std::array<unsigned, 2> a{}, b{}, w{}, next{};  // wiretap, keyed, total, next slot's keyed width
    std::size_t zw = 1, zk = 1;                     // output blocks of the two parts
    std::size_t s_in = 1, s_out = 1, m = 1;

    std::size_t znew() const { return zw * zk; }
};

std::vector<SlotShape> shapes(const ChannelSpec& spec, const SlotConfig& config, int k)
{
    std::vector<SlotShape> out;
    for (int j = 1; j <= k; ++j) {
        const auto& p = config.at(j);
        SlotShape s;
        for (int i = 0; i < 2; ++i) {
            s.a[i] = p.user[i].wiretap;
            s.b[i] = p.user[i].keyed;
            s.w[i] = p.user[i].total();
            s.next[i] = j < k ? config.at(j + 1).user[i].keyed : 0;
        }
        if (p.has_wiretap_part()) s.zw = static_cast<std::size_t>(std::min(power(spec.sizes().z, config.n1), 1e18));
        if (p.has_keyed_part()) s.zk = static_cast<std::size_t>(std::min(power(spec.sizes().z, config.n2), 1e18));
        s.s_in = std::size_t{1} << (s.b[0] + s.b[1]);
        s.s_out = std::size_t{1} << (s.next[0] + s.next[1]);
        s.m = std::size_t{1} << (s.w[0] + s.w[1]);
        out.push_back(s);
    }
    return out;
}

void check_range(const SlotConfig& config, int l, int k)
{
    if (l < 1 || k < l || k > config.num_slots)
        throw Error(ErrorCode::InvalidSlot,
                    "need 1 <= l <= k <= " + std::to_string(config.num_slots) + ", got l=" + std::to_string(l) +
                        " k=" + std::to_string(k));
}

double enumeration_of(const std::vector<SlotShape>& sh, int l)
{
    double work = 0, t = 1, zold = 1;
    for (std::size_t j = 0; j < sh.size(); ++j) {
        const auto& s = sh[j];
        const double zn = static_cast<double>(s.znew());
        if (static_cast<int>(j + 1) == l) {
            work += static_cast<double>(s.s_in) * s.m * zold * zn;
            t = static_cast<double>(s.m);
        } else {
            work += static_cast<double>(s.s_in) * s.m * zn;                 // kernel
            work += t * s.s_in * static_cast<double>(s.s_out) * zold * zn;  // fold
        }
        zold *= zn;
    }
    return work + t * zold;
}

// A[pair index][block]: p(block | pair of messages) under the two laws
std::vector<double> observation_table(const ChannelSpec& spec, const EncoderLaw& l1, const EncoderLaw& l2,
                                      std::size_t zblock)
{
    const std::size_t m1 = l1.num_messages(), m2 = l2.num_messages();
    std::vector<double> out(m1 * m2 * zblock, 0.0);
    for (std::size_t a = 0; a < m1; ++a)
        for (std::size_t b = 0; b < m2; ++b)
            for (const auto& [c1, p1] : l1.words[a])
                for (const auto& [c2, p2] : l2.words[b]) {
                    const auto bl = block_law(spec, c1, c2);
                    double* dst = &out[(a * m2 + b) * zblock];
                    for (std::size_t z = 0; z < zblock; ++z) dst[z] += p1 * p2 * bl[z];
                }
    return out;
}

std::uint64_t low_bits(std::uint64_t v, unsigned n) { return n == 0 ? 0 : v & ((std::uint64_t{1} << n) - 1); }

}  // namespace

std::uint64_t multislot_enumeration(const ChannelSpec& spec, const SlotConfig& config, int l, int k)
{
    check_range(config, l, k);
    const double w = enumeration_of(shapes(spec, config, k), l);
    return w >= 1.8e19 ? UINT64_MAX : static_cast<std::uint64_t>(w);
}

LeakageReport exact_multislot_leakage(const ChannelSpec& spec, const SlotConfig& config,
                                      std::span<const SlotCodebooks> books, int l, int k)
{
    check_range(config, l, k);
    if (books.size() != config.slots.size())
        throw Error(ErrorCode::DimensionMismatch, "codebook set does not match the slot plan");
    const auto sh = shapes(spec, config, k);
    const double work = enumeration_of(sh, l);
    require_budget(work, config.budget, "exact multi-slot leakage");

    // alpha[t][s][z]: probability of target t, next-slot keys s and Eve's blocks z so far
    std::size_t nt = 1, ns = 1, nz = 1;
    std::vector<double> alpha{1.0};
    for (int j = 1; j <= k; ++j) {
        const auto& s = sh[static_cast<std::size_t>(j - 1)];
        const auto& bk = books[static_cast<std::size_t>(j - 1)];
        const auto& plan = config.at(j);
        std::vector<double> A{1.0}, B{1.0};
        if (plan.has_wiretap_part()) A = observation_table(spec, wiretap_law(bk.wiretap[0]), wiretap_law(bk.wiretap[1]), s.zw);
        if (plan.has_keyed_part()) B = observation_table(spec, mac_law(bk.keyed[0]), mac_law(bk.keyed[1]), s.zk);
        const std::size_t zn = s.znew();
        const double pm = 1.0 / static_cast<double>(s.m);

        // visit every message pair m under key pair sin
        auto for_each_message = [&](std::size_t sin, auto&& fn) {
            const std::uint64_t key1 = sin >> s.b[1], key2 = low_bits(sin, s.b[1]);
            for (std::size_t m = 0; m < s.m; ++m) {
                const std::uint64_t u1 = m >> s.w[1], u2 = low_bits(m, s.w[1]);
                const std::uint64_t p1 = ((u1 >> s.b[0]) << s.a[1]) | (u2 >> s.b[1]);
                const std::uint64_t c = ((low_bits(u1, s.b[0]) ^ key1) << s.b[1]) | (low_bits(u2, s.b[1]) ^ key2);
                const std::uint64_t sout = ((u1 >> (s.w[0] - s.next[0])) << s.next[1]) | (u2 >> (s.w[1] - s.next[1]));
                fn(m, sout, &A[p1 * s.zw], &B[c * s.zk]);
            }
        };

        if (j == l) {
            // nt == 1 here: the target is this slot's message pair
            std::vector<double> next(s.m * s.s_out * nz * zn, 0.0);
            for (std::size_t sin = 0; sin < ns; ++sin)
                for_each_message(sin, [&](std::size_t m, std::uint64_t sout, const double* a, const double* b) {
                    for (std::size_t zo = 0; zo < nz; ++zo) {
                        const double base = alpha[sin * nz + zo] * pm;
                        if (base == 0.0) continue;
                        double* dst = &next[((m * s.s_out + sout) * nz + zo) * zn];
                        for (std::size_t x = 0; x < s.zw; ++x)
                            for (std::size_t y = 0; y < s.zk; ++y) dst[x * s.zk + y] += base * a[x] * b[y];
                    }
                });
            alpha = std::move(next);
            nt = s.m;
        } else {
            std::vector<double> kernel(s.s_in * s.s_out * zn, 0.0);
            for (std::size_t sin = 0; sin < s.s_in; ++sin)
                for_each_message(sin, [&](std::size_t, std::uint64_t sout, const double* a, const double* b) {
                    double* dst = &kernel[(sin * s.s_out + sout) * zn];
                    for (std::size_t x = 0; x < s.zw; ++x)
                        for (std::size_t y = 0; y < s.zk; ++y) dst[x * s.zk + y] += pm * a[x] * b[y];
                });
            std::vector<double> next(nt * s.s_out * nz * zn, 0.0);
            for (std::size_t t = 0; t < nt; ++t)
                for (std::size_t sin = 0; sin < ns; ++sin)
                    for (std::size_t zo = 0; zo < nz; ++zo) {
                        const double base = alpha[(t * ns + sin) * nz + zo];
                        if (base == 0.0) continue;
                        for (std::size_t sout = 0; sout < s.s_out; ++sout) {
                            const double* kr = &kernel[(sin * s.s_out + sout) * zn];
                            double* dst = &next[((t * s.s_out + sout) * nz + zo) * zn];
                            for (std::size_t z = 0; z < zn; ++z) dst[z] += base * kr[z];
                        }
                    }
            alpha = std::move(next);
        }
        ns = s.s_out;
        nz *= zn;
    }

    std::vector<double> joint(nt * nz, 0.0);
    for (std::size_t t = 0; t < nt; ++t)
        for (std::size_t sidx = 0; sidx < ns; ++sidx)
            for (std::size_t z = 0; z < nz; ++z) joint[t * nz + z] += alpha[(t * ns + sidx) * nz + z];
    const JointPmf pmf({{"W", nt}, {"Z", nz}}, std::move(joint));

    LeakageReport r;
    r.quantity = "I(W_" + std::to_string(l) + "; Z_1..Z_" + std::to_string(k) + ")";
    r.value = mutual_information(pmf, {"W"}, {"Z"});
    r.method = "exact";
    r.enumeration = static_cast<std::uint64_t>(work);
    r.fingerprint = config.fingerprint();
    r.entropy_bound = std::log2(static_cast<double>(nt));
    r.l = l;
    r.k = k;
    return r;
}

LeakageReport mi_from_samples(std::span<const std::uint64_t> w, std::span<const std::uint64_t> z)
{
    if (w.size() != z.size()) throw Error(ErrorCode::DimensionMismatch, "sample columns differ in length");
    if (w.empty()) throw Error(ErrorCode::EmptyInput, "no samples");
    std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> cells;
    std::map<std::uint64_t, std::uint64_t> cw, cz;
    for (std::size_t i = 0; i < w.size(); ++i) {
        ++cells[{w[i], z[i]}];
        ++cw[w[i]];
        ++cz[z[i]];
    }
    const double n = static_cast<double>(w.size());
    auto f = [](double c) { return c > 0 ? c * std::log(c) : 0.0; };
    double swz = 0, sw = 0, sz = 0;
    for (const auto& [key, c] : cells) swz += f(static_cast<double>(c));
    for (const auto& [key, c] : cw) sw += f(static_cast<double>(c));
    for (const auto& [key, c] : cz) sz += f(static_cast<double>(c));
    const double mwz = static_cast<double>(cells.size()), mw = static_cast<double>(cw.size()),
                 mz = static_cast<double>(cz.size());

    auto estimate = [](double nn, double s_wz, double s_w, double s_z, double m_wz, double m_w, double m_z) {
        const double plug = (std::log(nn) + (s_wz - s_w - s_z) / nn) / kLn2;
        const double corr = ((m_w - 1) + (m_z - 1) - (m_wz - 1)) / (2 * nn * kLn2);
        return std::pair{plug, plug + corr};
    };
    const auto [plug, mm] = estimate(n, swz, sw, sz, mwz, mw, mz);

    // delete-one jackknife; all samples in one cell give the same replicate
    double spread = 0;
    if (w.size() >= 2) {
        std::vector<std::pair<double, double>> reps;  // (replicate, weight)
        for (const auto& [key, c] : cells) {
            const double cc = static_cast<double>(c), a = static_cast<double>(cw.at(key.first)),
                         b = static_cast<double>(cz.at(key.second));
            const double rep = estimate(n - 1, swz - f(cc) + f(cc - 1), sw - f(a) + f(a - 1), sz - f(b) + f(b - 1),
                                        mwz - (c == 1), mw - (a == 1), mz - (b == 1))
                                   .second;
            reps.emplace_back(rep, cc);
        }
        double mean = 0;
        for (const auto& [v, c] : reps) mean += c * v;
        mean /= n;
        double ss = 0;
        for (const auto& [v, c] : reps) ss += c * (v - mean) * (v - mean);
        spread = std::sqrt((n - 1) / n * ss);
    }

    LeakageReport r;
    r.quantity = "I(W; Z)";
    r.value = std::max(0.0, mm);
    r.plug_in = std::max(0.0, plug);
    r.spread = spread;
    r.method = "monte_carlo";
    r.enumeration = w.size();
    return r;
}

namespace {

// Dense ids for output sequences in first-seen order.
class SequenceIds {
public:
    std::uint64_t id(const std::vector<Symbol>& v) { return ids_.try_emplace(v, ids_.size()).first->second; }

private:
    std::map<std::vector<Symbol>, std::uint64_t> ids_;
};

}  // namespace

LeakageReport mc_slot_leakage(const ChannelSpec& spec, const EncoderLaw& law1, const EncoderLaw& law2,
                              std::uint64_t samples, std::uint64_t seed)
{
    check_pair(law1, law2);
    if (samples == 0) throw Error(ErrorCode::EmptyInput, "no samples requested");
    Rng rng(derive_seed(seed, {0x736c6f74}));
    std::array<std::vector<std::vector<double>>, 2> probs;
    for (int i = 0; i < 2; ++i)
        for (const auto& ws : (i == 0 ? law1 : law2).words) {
            std::vector<double> p;
            for (const auto& [c, q] : ws) p.push_back(q);
            probs[i].push_back(std::move(p));
        }
    std::vector<std::uint64_t> wcol(samples), zcol(samples);
    SequenceIds ids;
    std::vector<Symbol> z(law1.n);
    for (std::uint64_t s = 0; s < samples; ++s) {
        const auto m1 = uniform_below(rng, law1.num_messages());
        const auto m2 = uniform_below(rng, law2.num_messages());
        const auto& c1 = law1.words[m1][draw_index(probs[0][m1], rng)].first;
        const auto& c2 = law2.words[m2][draw_index(probs[1][m2], rng)].first;
        for (std::size_t t = 0; t < z.size(); ++t) z[t] = sample_eve(spec, c1[t], c2[t], rng);
        wcol[s] = m1 * law2.num_messages() + m2;
        zcol[s] = ids.id(z);
    }
    auto r = mi_from_samples(wcol, zcol);
    r.quantity = "I(W1,W2; Z^n)";
    r.fingerprint = law_fingerprint(law1, law2);
    r.entropy_bound = uniform_entropy(law1, law2);
    return r;
}

LeakageReport mc_multislot_leakage(const ChannelSpec& spec, const SlotConfig& config,
                                   std::span<const SlotCodebooks> books, int l, int k, std::uint64_t samples,
                                   std::uint64_t seed)
{
    check_range(config, l, k);
    if (books.size() != config.slots.size())
        throw Error(ErrorCode::DimensionMismatch, "codebook set does not match the slot plan");
    if (samples == 0) throw Error(ErrorCode::EmptyInput, "no samples requested");
    Rng message_rng(derive_seed(seed, {0x6d63, 1}));
    Rng rand_rng(derive_seed(seed, {0x6d63, 2}));
    Rng noise(derive_seed(seed, {0x6d63, 3}));
    const auto& target = config.at(l);
    std::vector<std::uint64_t> wcol(samples), zcol(samples);
    SequenceIds ids;
    std::vector<Symbol> z;
    for (std::uint64_t s = 0; s < samples; ++s) {
        z.clear();
        std::array<MaybeMessage, 2> prev;
        for (int j = 1; j <= k; ++j) {
            const auto& plan = config.at(j);
            const auto tx = encode_slot(plan, books[static_cast<std::size_t>(j - 1)], prev, message_rng, rand_rng);
            for (const auto* part : {&tx.x_wiretap, &tx.x_keyed})
                for (std::size_t t = 0; t < (*part)[0].size(); ++t)
                    z.push_back(sample_eve(spec, (*part)[0][t], (*part)[1][t], noise));
            for (int i = 0; i < 2; ++i) prev[i] = tx.full(i);
            if (j == l) {
                const std::uint64_t v1 = prev[0] ? prev[0]->value() : 0, v2 = prev[1] ? prev[1]->value() : 0;
                wcol[s] = (v1 << target.user[1].total()) | v2;
            }
        }
        zcol[s] = ids.id(z);
    }
    auto r = mi_from_samples(wcol, zcol);
    r.quantity = "I(W_" + std::to_string(l) + "; Z_1..Z_" + std::to_string(k) + ")";
    r.fingerprint = config.fingerprint();
    r.entropy_bound = static_cast<double>(target.user[0].total() + target.user[1].total());
    r.l = l;
    r.k = k;
    return r;
}

AuditTable audit(const ChannelSpec& spec, const SlotConfig& config, std::span<const SlotCodebooks> books,
                 const AuditOptions& options)
{
    config.check();
    SlotConfig cfg = config;
    cfg.budget = options.budget;
    AuditTable table;
    for (int l = 1; l <= cfg.num_slots; ++l)
        for (int k = l; k <= cfg.num_slots; ++k) {
            AuditRow row;
            const bool exact = !options.force_monte_carlo && multislot_enumeration(spec, cfg, l, k) <= cfg.budget;
            if (exact) {
                row.report = exact_multislot_leakage(spec, cfg, books, l, k);
            } else {
                if (!options.force_monte_carlo)
                    table.warnings.push_back("I(W_" + std::to_string(l) + "; Z_1..Z_" + std::to_string(k) +
                                             ") exceeds the enumeration budget; estimated from " +
                                             std::to_string(options.samples) + " samples");
                row.report = mc_multislot_leakage(spec, cfg, books, l, k, options.samples,
                                                  derive_seed(options.seed, {static_cast<std::uint64_t>(l),
                                                                             static_cast<std::uint64_t>(k)}));
            }
            row.epsilon_hat = row.report.value / (2.0 * static_cast<double>(cfg.n1));
            table.rows.push_back(std::move(row));
        }
    return table;
}

}  // namespace macwt
