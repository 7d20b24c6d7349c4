#include "macwt/key_protocol.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <tuple>

#include "json.hpp"
#include "macwt/error.hpp"

namespace macwt {

namespace {

// stream tags for derive_seed
constexpr std::uint64_t kTagCodebook = 0x636f6465;
constexpr std::uint64_t kTagMessage = 0x6d736773;
constexpr std::uint64_t kTagRandom = 0x72616e64;
constexpr std::uint64_t kTagNoise = 0x6e6f6973;

std::array<unsigned, 2> realize_pair(std::size_t n, const RatePentagon& caps)
{
    std::array<unsigned, 2> w{realize_width(n, caps.cap1), realize_width(n, caps.cap2)};
    const unsigned limit = realize_width(n, caps.cap_sum);
    const unsigned sum = w[0] + w[1];
    if (sum <= limit) return w;
    std::array<unsigned, 2> out{};
    unsigned used = 0;
    for (int i = 0; i < 2; ++i) {
        out[i] = static_cast<unsigned>(std::uint64_t{w[i]} * limit / sum);
        used += out[i];
    }
    for (int i = 0; i < 2 && used < limit; ++i) {
        const unsigned extra = std::min(w[i] - out[i], limit - used);
        out[i] += extra;
        used += extra;
    }
    return out;
}

double pair_work(unsigned bits1, unsigned bits2, std::size_t n)
{
    return std::ldexp(static_cast<double>(n), static_cast<int>(bits1 + bits2));
}

}  // namespace

const SlotPlan& SlotConfig::at(int k) const
{
    if (k < 1 || k > static_cast<int>(slots.size()))
        throw Error(ErrorCode::InvalidSlot, "slot " + std::to_string(k) + " outside 1.." + std::to_string(slots.size()));
    return slots[static_cast<std::size_t>(k - 1)];
}

std::size_t SlotConfig::channel_uses(int k) const
{
    const auto& s = at(k);
    return (s.has_wiretap_part() ? n1 : 0) + (s.has_keyed_part() ? n2 : 0);
}

void SlotConfig::check() const
{
    if (n1 < 1) throw Error(ErrorCode::InvalidConfig, "n1 must be at least 1");
    if (l < 1) throw Error(ErrorCode::InvalidConfig, "l must be at least 1");
    if (n2 != static_cast<std::size_t>(l) * n1) throw Error(ErrorCode::InvalidConfig, "n2 must equal l * n1");
    if (num_slots < 1) throw Error(ErrorCode::InvalidConfig, "at least one slot is required");
    if (slots.size() != static_cast<std::size_t>(num_slots))
        throw Error(ErrorCode::InvalidConfig, "slot plan count differs from num_slots");
    for (int k = 1; k <= num_slots; ++k) {
        const auto& s = at(k);
        if (s.slot != k) throw Error(ErrorCode::InvalidConfig, "slot plans out of order");
        for (int i = 0; i < 2; ++i) {
            const auto& w = s.user[i];
            if (w.total() > Message::kMaxWidth)
                throw Error(ErrorCode::InvalidConfig, "message wider than " + std::to_string(Message::kMaxWidth) + " bits");
            if (k == 1 && w.keyed != 0) throw Error(ErrorCode::InvalidConfig, "slot 1 carries no keyed part");
            if (k > 1 && w.keyed > at(k - 1).user[i].total())
                throw Error(ErrorCode::KeyDeficit, "slot " + std::to_string(k) + " user " + std::to_string(i + 1) +
                                                       " keys more bits than the previous message holds");
        }
    }
}

std::string SlotConfig::fingerprint() const
{
    std::uint64_t h = mix64(seed);
    auto add = [&h](std::uint64_t v) { h = mix64(h ^ (v + 0x9e3779b97f4a7c15ULL)); };
    add(n1);
    add(n2);
    add(static_cast<std::uint64_t>(l));
    add(static_cast<std::uint64_t>(num_slots));
    add(distinct_bins ? 1 : 0);
    for (const auto& s : slots)
        for (const auto& w : s.user) {
            add(w.wiretap);
            add(w.rand);
            add(w.keyed);
        }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

SlotConfig plan(const ChannelSpec& spec, const InputPair& inputs, const PlanRequest& req)
{
    if (req.l < 1) throw Error(ErrorCode::InvalidConfig, "l must be a positive integer");
    if (req.n1 < 1) throw Error(ErrorCode::InvalidConfig, "n1 must be a positive integer");
    if (req.num_slots < 1) throw Error(ErrorCode::InvalidConfig, "at least one slot is required");

    const auto info = information_terms(spec, inputs);
    ramp_constants(info);
    const auto schedule = slot_schedule(secrecy_pentagon(info), mac_pentagon(info), req.num_slots, req.l);

    SlotConfig cfg;
    cfg.n1 = req.n1;
    cfg.l = req.l;
    cfg.n2 = static_cast<std::size_t>(req.l) * req.n1;
    cfg.num_slots = req.num_slots;
    cfg.seed = req.seed;
    cfg.budget = req.budget;

    const auto wiretap = realize_pair(cfg.n1, schedule.secrecy);
    const std::array<unsigned, 2> rand =
        req.rand_bits ? std::array<unsigned, 2>{*req.rand_bits, *req.rand_bits}
                      : std::array<unsigned, 2>{default_rand_bits(cfg.n1, info.x1_z), default_rand_bits(cfg.n1, info.x2_z)};

    for (int k = 1; k <= req.num_slots; ++k) {
        SlotPlan s;
        s.slot = k;
        std::array<unsigned, 2> keyed{0, 0};
        if (k >= 2) {
            const auto& e = schedule.per_slot[static_cast<std::size_t>(k - 2)];
            keyed = realize_pair(cfg.n2, RatePentagon{e.keyed1, e.keyed2, e.keyed_sum_bound});
        }
        for (int i = 0; i < 2; ++i) {
            s.user[i].wiretap = wiretap[i];
            s.user[i].rand = rand[i];
            if (k >= 2) {
                const unsigned avail = cfg.slots.back().user[i].total();
                if (keyed[i] > avail) {
                    cfg.deficits.push_back({k, i + 1, keyed[i], avail});
                    keyed[i] = avail;
                }
                s.user[i].keyed = keyed[i];
            }
        }
        cfg.slots.push_back(s);
    }

    for (const auto& s : cfg.slots) {
        const auto& a = s.user[0];
        const auto& b = s.user[1];
        if (s.has_wiretap_part() &&
            pair_work(a.wiretap + a.rand, b.wiretap + b.rand, cfg.n1) > static_cast<double>(cfg.budget))
            throw Error(ErrorCode::BudgetExceeded,
                        "slot " + std::to_string(s.slot) + " wiretap decoding exceeds the budget");
        if (s.has_keyed_part() && pair_work(a.keyed, b.keyed, cfg.n2) > static_cast<double>(cfg.budget))
            throw Error(ErrorCode::BudgetExceeded, "slot " + std::to_string(s.slot) + " keyed decoding exceeds the budget");
    }
    cfg.check();
    return cfg;
}

std::vector<SlotCodebooks> build_codebooks(const ChannelSpec& spec, const InputPair& inputs, const SlotConfig& config)
{
    config.check();
    if (inputs.p1.size() != spec.sizes().x1 || inputs.p2.size() != spec.sizes().x2)
        throw Error(ErrorCode::DimensionMismatch, "input distributions do not match the channel alphabets");
    CodebookOptions opt;
    opt.distinct_bins = config.distinct_bins;
    opt.budget = config.budget;
    std::vector<SlotCodebooks> out;
    for (const auto& s : config.slots) {
        SlotCodebooks b;
        b.slot = s.slot;
        for (int i = 0; i < 2; ++i) {
            const auto& p = i == 0 ? inputs.p1 : inputs.p2;
            const auto k = static_cast<std::uint64_t>(s.slot), u = static_cast<std::uint64_t>(i + 1);
            if (s.has_wiretap_part()) {
                Rng rng(derive_seed(config.seed, {kTagCodebook, k, u, 1}));
                b.wiretap[i] = build_wiretap(rng, p, config.n1, s.user[i].wiretap, s.user[i].rand, i + 1, opt);
            }
            if (s.has_keyed_part()) {
                Rng rng(derive_seed(config.seed, {kTagCodebook, k, u, 2}));
                b.keyed[i] = build_mac(rng, p, config.n2, s.user[i].keyed, i + 1, opt);
            }
        }
        out.push_back(std::move(b));
    }
    return out;
}

namespace {

MaybeMessage draw_message(Rng& rng, unsigned width)
{
    if (width == 0) return std::nullopt;
    return Message(uniform_below(rng, std::uint64_t{1} << width), width);
}

MaybeMessage key_from(const MaybeMessage& prev, unsigned width)
{
    if (width == 0) return std::nullopt;
    if (!prev) throw Error(ErrorCode::KeyTooShort, "keyed part without a previous message");
    return prev->prefix(width);
}

std::uint64_t value_or_zero(const MaybeMessage& m) { return m ? m->value() : 0; }

MaybeMessage as_message(std::uint64_t v, unsigned width)
{
    if (width == 0) return std::nullopt;
    return Message(v, width);
}

std::vector<Symbol> pass(const ChannelSpec& spec, const Codeword& a, const Codeword& b, Rng& noise,
                         std::vector<Symbol>& z)
{
    std::vector<Symbol> y(a.size());
    z.assign(a.size(), 0);
    for (std::size_t t = 0; t < a.size(); ++t) {
        const auto [yy, zz] = sample(spec, a[t], b[t], noise);
        y[t] = yy;
        z[t] = zz;
    }
    return y;
}

}  // namespace

SlotTransmission encode_slot(const SlotPlan& plan, const SlotCodebooks& books, const std::array<MaybeMessage, 2>& prev,
                             Rng& message_rng, Rng& rand_rng)
{
    SlotTransmission tx;
    for (int i = 0; i < 2; ++i) {
        tx.part1[i] = draw_message(message_rng, plan.user[i].wiretap);
        tx.part2[i] = draw_message(message_rng, plan.user[i].keyed);
    }
    for (int i = 0; i < 2; ++i) {
        const auto& w = plan.user[i];
        if (plan.has_wiretap_part()) tx.x_wiretap[i] = encode_wiretap_bin(books.wiretap[i], value_or_zero(tx.part1[i]), rand_rng);
        if (plan.has_keyed_part()) {
            tx.key[i] = key_from(prev[i], w.keyed);
            if (tx.part2[i]) tx.cipher[i] = xor_key(*tx.part2[i], *tx.key[i]);
            tx.x_keyed[i] = books.keyed[i].words.at(static_cast<std::size_t>(value_or_zero(tx.cipher[i])));
        }
    }
    return tx;
}

ProtocolTrace run(const ChannelSpec& spec, const InputPair& inputs, const SlotConfig& config, std::uint64_t trial)
{
    const auto books = build_codebooks(spec, inputs, config);
    return run(spec, config, books, trial);
}

ProtocolTrace run(const ChannelSpec& spec, const SlotConfig& config, std::span<const SlotCodebooks> books,
                  std::uint64_t trial)
{
    config.check();
    if (books.size() != config.slots.size())
        throw Error(ErrorCode::DimensionMismatch, "codebook set does not match the slot plan");
    Rng message_rng(derive_seed(config.seed, {kTagMessage, trial}));
    Rng rand_rng(derive_seed(config.seed, {kTagRandom, trial}));
    Rng noise(derive_seed(config.seed, {kTagNoise, trial}));

    ProtocolTrace trace;
    trace.seed = config.seed;
    trace.trial = trial;
    std::array<MaybeMessage, 2> sent_prev, bob_prev;
    for (const auto& plan : config.slots) {
        const auto& bk = books[static_cast<std::size_t>(plan.slot - 1)];
        const auto tx = encode_slot(plan, bk, sent_prev, message_rng, rand_rng);
        SlotRecord rec;
        rec.slot = plan.slot;

        DecodedPair wire{0, 0}, keyed{0, 0};
        if (plan.has_wiretap_part()) {
            rec.y_wiretap = pass(spec, tx.x_wiretap[0], tx.x_wiretap[1], noise, rec.z_wiretap);
            wire = decode_ml(spec, rec.y_wiretap, bk.wiretap[0], bk.wiretap[1], config.budget);
        }
        if (plan.has_keyed_part()) {
            rec.y_keyed = pass(spec, tx.x_keyed[0], tx.x_keyed[1], noise, rec.z_keyed);
            keyed = decode_ml(spec, rec.y_keyed, bk.keyed[0], bk.keyed[1], config.budget);
        }

        std::array<MaybeMessage, 2> bob_now;
        for (int i = 0; i < 2; ++i) {
            const auto& w = plan.user[i];
            auto& u = rec.user[i];
            u.part1 = tx.part1[i];
            u.part2 = tx.part2[i];
            u.key = tx.key[i];
            u.cipher = tx.cipher[i];
            u.x_wiretap = tx.x_wiretap[i];
            u.x_keyed = tx.x_keyed[i];
            u.decoded_part1 = as_message(i == 0 ? wire.msg1 : wire.msg2, w.wiretap);
            u.decoded_cipher = as_message(i == 0 ? keyed.msg1 : keyed.msg2, w.keyed);
            // Bob unlocks part 2 with what he decoded last slot, not with the sent key
            if (u.decoded_cipher) u.decoded_part2 = xor_key(*u.decoded_cipher, *key_from(bob_prev[i], w.keyed));
            u.error = u.decoded_part1 != u.part1 || u.decoded_part2 != u.part2;
            rec.error = rec.error || u.error;
            bob_now[i] = concat(u.decoded_part1, u.decoded_part2);
        }
        const double uses = static_cast<double>(config.channel_uses(plan.slot));
        if (uses > 0) {
            rec.realized_r1 = plan.user[0].total() / uses;
            rec.realized_r2 = plan.user[1].total() / uses;
        }
        for (int i = 0; i < 2; ++i) sent_prev[i] = tx.full(i);
        bob_prev = bob_now;
        trace.slots.push_back(std::move(rec));
    }
    return trace;
}

namespace {

nlohmann::json message_json(const MaybeMessage& m)
{
    if (!m) return "";
    return m->bits();
}

}  // namespace

std::string ProtocolTrace::to_json() const
{
    nlohmann::json j;
    j["seed"] = seed;
    j["trial"] = trial;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& s : slots) {
        nlohmann::json js;
        js["slot"] = s.slot;
        nlohmann::json users = nlohmann::json::array();
        for (const auto& u : s.user) {
            nlohmann::json ju;
            ju["part1"] = message_json(u.part1);
            ju["part2"] = message_json(u.part2);
            ju["key"] = message_json(u.key);
            ju["cipher"] = message_json(u.cipher);
            ju["x_wiretap"] = u.x_wiretap;
            ju["x_keyed"] = u.x_keyed;
            ju["decoded_part1"] = message_json(u.decoded_part1);
            ju["decoded_cipher"] = message_json(u.decoded_cipher);
            ju["decoded_part2"] = message_json(u.decoded_part2);
            ju["error"] = u.error;
            users.push_back(std::move(ju));
        }
        js["users"] = std::move(users);
        js["y_wiretap"] = s.y_wiretap;
        js["y_keyed"] = s.y_keyed;
        js["z_wiretap"] = s.z_wiretap;
        js["z_keyed"] = s.z_keyed;
        js["error"] = s.error;
        js["realized_r1"] = s.realized_r1;
        js["realized_r2"] = s.realized_r2;
        arr.push_back(std::move(js));
    }
    j["slots"] = std::move(arr);
    return j.dump(1) + "\n";
}

std::pair<double, double> wilson_interval(std::size_t successes, std::size_t trials)
{
    if (trials == 0) throw Error(ErrorCode::EmptyInput, "no trials");
    constexpr double z = 1.959963984540054;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double denom = 1.0 + z * z / n;
    const double centre = (p + z * z / (2 * n)) / denom;
    const double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom;
    // the closed form leaves rounding residue at the edges
    const double lo = successes == 0 ? 0.0 : std::max(0.0, centre - half);
    const double hi = successes == trials ? 1.0 : std::min(1.0, centre + half);
    return {lo, hi};
}

std::vector<SlotErrorRate> error_rate(std::span<const ProtocolTrace> traces)
{
    if (traces.empty()) throw Error(ErrorCode::EmptyInput, "error_rate needs at least one trace");
    const std::size_t k = traces.front().slots.size();
    std::vector<SlotErrorRate> out(k);
    for (std::size_t s = 0; s < k; ++s) {
        out[s].slot = static_cast<int>(s + 1);
        out[s].trials = traces.size();
    }
    for (const auto& t : traces) {
        if (t.slots.size() != k) throw Error(ErrorCode::DimensionMismatch, "traces have different slot counts");
        for (std::size_t s = 0; s < k; ++s)
            if (t.slots[s].error) ++out[s].errors;
    }
    for (auto& r : out) {
        r.pe = static_cast<double>(r.errors) / static_cast<double>(r.trials);
        std::tie(r.ci_low, r.ci_high) = wilson_interval(r.errors, r.trials);
    }
    return out;
}

}  // namespace macwt
