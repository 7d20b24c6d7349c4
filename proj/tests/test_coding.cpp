#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "doctest.h"
#include "json.hpp"
#include "macwt/coding.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace macwt;

namespace {

// Two independent BSC(flip) links to Bob, Eve sees a constant.
ChannelSpec twin_bsc(double flip)
{
    return make_channel({2, 2, 4, 1}, [flip](std::size_t a, std::size_t b, std::size_t y, std::size_t) {
        const std::size_t y1 = y >> 1, y2 = y & 1;
        return (y1 == a ? 1 - flip : flip) * (y2 == b ? 1 - flip : flip);
    });
}

// Message pair maximizing max over codeword pairs of the block likelihood,
// lowest pair on ties; products in the linear domain.
std::pair<std::size_t, std::size_t> brute_decode(const ChannelSpec& ch, const std::vector<Symbol>& y,
                                                 const WiretapCodebook& b1, const WiretapCodebook& b2)
{
    double best = -1;
    std::pair<std::size_t, std::size_t> arg{0, 0};
    for (std::size_t m1 = 0; m1 < b1.num_bins(); ++m1)
        for (std::size_t m2 = 0; m2 < b2.num_bins(); ++m2) {
            double top = 0;
            for (std::size_t r1 = 0; r1 < b1.bin_size(); ++r1)
                for (std::size_t r2 = 0; r2 < b2.bin_size(); ++r2) {
                    double l = 1;
                    for (std::size_t t = 0; t < y.size(); ++t)
                        l *= ch.bob_row(b1.word(m1, r1)[t], b2.word(m2, r2)[t])[y[t]];
                    top = std::max(top, l);
                }
            if (top > best * (1 + 1e-12)) {
                best = top;
                arg = {m1, m2};
            }
        }
    return arg;
}

}  // namespace

TEST_CASE("message basics")
{
    const auto m = Message::from_bits("1011");
    CHECK(m.value() == 11);
    CHECK(m.width() == 4);
    CHECK(m.bits() == "1011");
    CHECK(Message(5, 6).bits() == "000101");
    CHECK(m.prefix(2) == Message(2, 2));
    CHECK(m.prefix(4) == m);
    CHECK(code_of([&] { m.prefix(5); }) == ErrorCode::KeyTooShort);
    CHECK(code_of([&] { m.prefix(0); }) == ErrorCode::KeyTooShort);
    CHECK(code_of([] { Message(0, 0); }) == ErrorCode::WidthMismatch);
    CHECK(code_of([] { Message(0, 63); }) == ErrorCode::WidthMismatch);
    CHECK(code_of([] { Message(4, 2); }) == ErrorCode::WidthMismatch);
    CHECK(code_of([] { Message::from_bits("10a1"); }) == ErrorCode::ParseError);
    CHECK_NOTHROW(Message((std::uint64_t{1} << 62) - 1, 62));

    const auto c = concat(Message::from_bits("10"), Message::from_bits("011"));
    REQUIRE(c);
    CHECK(c->bits() == "10011");
    CHECK(concat(std::nullopt, Message(1, 1)) == Message(1, 1));
    CHECK_FALSE(concat(std::nullopt, std::nullopt));
}

TEST_CASE("xor keying is an involution (exhaustive to width 12)")
{
    for (unsigned w = 1; w <= 12; ++w)
        for (std::uint64_t v = 0; v < (1u << w); ++v)
            for (std::uint64_t k = 0; k < (1u << w); ++k) {
                const Message m(v, w), key(k, w);
                const auto c = xor_key(m, key);
                if (xor_key(c, key) != m) {
                    FAIL("involution broken at width " << w);
                }
            }
    // a longer key contributes its leading bits
    CHECK(xor_key(Message::from_bits("10"), Message::from_bits("1101")) == Message::from_bits("01"));
    CHECK(code_of([] { xor_key(Message(1, 3), Message(1, 2)); }) == ErrorCode::KeyTooShort);
}

TEST_CASE("codebook construction")
{
    const std::vector<double> p{0.3, 0.7};
    Rng a(1), b(1);
    const auto book = build_wiretap(a, p, 5, 2, 3);
    CHECK(book.words.size() == 32);
    CHECK(book.num_bins() == 4);
    CHECK(book.bin_size() == 8);
    for (const auto& w : book.words) {
        REQUIRE(w.size() == 5);
        for (Symbol s : w) CHECK(s < 2);
    }
    CHECK(build_wiretap(b, p, 5, 2, 3).words == book.words);

    const std::vector<double> skew{0.0, 1.0};
    Rng c(2);
    for (const auto& w : build_mac(c, skew, 4, 3).words) CHECK(w == Codeword{1, 1, 1, 1});

    CodebookOptions small;
    small.budget = 100;
    Rng d(3);
    CHECK(code_of([&] { build_wiretap(d, p, 10, 2, 2, 1, small); }) == ErrorCode::SizeOverflow);
    CHECK(code_of([&] { build_mac(d, p, 0, 1); }) == ErrorCode::InvalidConfig);
    CHECK(code_of([&] { build_mac(d, p, 1, 45); }) == ErrorCode::SizeOverflow);

    const auto zero = build_wiretap(d, p, 3, 0, 1);
    CHECK(zero.num_bins() == 1);
    CHECK(zero.words.size() == 2);
}

TEST_CASE("collision counting and expurgation")
{
    const std::vector<double> u{0.5, 0.5};
    std::size_t plain_hits = 0;
    for (std::uint64_t s = 0; s < 200; ++s) {
        Rng r(s);
        const auto book = build_wiretap(r, u, 2, 1, 1);
        std::size_t pairs = 0;
        for (std::size_t i = 0; i < book.words.size(); ++i)
            for (std::size_t j = i + 1; j < book.words.size(); ++j)
                if (i / book.bin_size() != j / book.bin_size() && book.words[i] == book.words[j]) ++pairs;
        CHECK(book.collisions == pairs);
        plain_hits += pairs > 0;

        CodebookOptions opt;
        opt.distinct_bins = true;
        Rng r2(s);
        const auto clean = build_wiretap(r2, u, 2, 1, 1, 1, opt);
        CHECK(clean.collisions == 0);
        Rng r3(s);
        CHECK(build_mac(r3, u, 2, 2, 1, opt).collisions == 0);
    }
    CHECK(plain_hits > 0);
    // too little room: collisions must remain and be reported
    CodebookOptions opt;
    opt.distinct_bins = true;
    Rng r(4);
    CHECK(build_mac(r, u, 1, 2, 1, opt).collisions > 0);
}

TEST_CASE("stochastic encoding stays inside the bin and is uniform")
{
    Rng r(8);
    const std::vector<double> u{0.5, 0.5};
    const auto book = build_wiretap(r, u, 6, 2, 2);
    std::map<std::size_t, int> hits;
    Rng e(9);
    for (int i = 0; i < 40000; ++i) {
        const auto& w = encode_wiretap(book, Message(2, 2), e);
        std::size_t idx = 99;
        for (std::size_t j = 0; j < book.bin_size(); ++j)
            if (&book.word(2, j) == &w) idx = j;
        REQUIRE(idx < 4);
        ++hits[idx];
    }
    for (const auto& [k, v] : hits) CHECK(std::abs(v - 10000) < 400);
    CHECK(code_of([&] { encode_wiretap(book, Message(1, 1), e); }) == ErrorCode::WidthMismatch);
    CHECK(code_of([&] { encode_wiretap_bin(book, 4, e); }) == ErrorCode::IndexOutOfRange);
    Rng m(1);
    const auto mac = build_mac(m, u, 3, 2);
    CHECK(&encode_mac(mac, Message(3, 2)) == &mac.words[3]);
    CHECK(code_of([&] { encode_mac(mac, Message(3, 3)); }) == ErrorCode::WidthMismatch);
}

TEST_CASE("noiseless decoding is exact with expurgated codebooks")
{
    const auto ch = fixtures::get("CH-ID");
    const std::vector<double> u{0.5, 0.5};
    CodebookOptions opt;
    opt.distinct_bins = true;
    for (std::uint64_t s = 0; s < 20; ++s) {
        Rng r(s);
        const auto b1 = build_wiretap(r, u, 4, 2, 1, 1, opt);
        const auto b2 = build_wiretap(r, u, 4, 1, 2, 2, opt);
        for (std::size_t m1 = 0; m1 < 4; ++m1)
            for (std::size_t m2 = 0; m2 < 2; ++m2)
                for (std::size_t r1 = 0; r1 < 2; ++r1)
                    for (std::size_t r2 = 0; r2 < 4; ++r2) {
                        std::vector<Symbol> y(4);
                        for (int t = 0; t < 4; ++t) y[t] = 2 * b1.word(m1, r1)[t] + b2.word(m2, r2)[t];
                        const auto d = decode_ml(ch, y, b1, b2);
                        CHECK(d.msg1 == m1);
                        CHECK(d.msg2 == m2);
                    }
    }
}

TEST_CASE("ML decoding matches a brute-force likelihood oracle")
{
    std::mt19937_64 g(77);
    for (int rep = 0; rep < 20; ++rep) {
        const auto ch = oracle::random_channel(g, {2, 2, 3, 1});
        Rng r(rep);
        const std::vector<double> u{0.5, 0.5};
        const auto b1 = build_wiretap(r, u, 3, 1, 1);
        const auto b2 = build_wiretap(r, u, 3, 2, 0);
        for (std::size_t yi = 0; yi < 27; ++yi) {
            std::vector<Symbol> y{Symbol(yi / 9), Symbol(yi / 3 % 3), Symbol(yi % 3)};
            const auto d = decode_ml(ch, y, b1, b2);
            const auto o = brute_decode(ch, y, b1, b2);
            CHECK(d.msg1 == o.first);
            CHECK(d.msg2 == o.second);
        }
    }
}

TEST_CASE("decoder errors")
{
    const auto ch = fixtures::get("CH-ID");
    Rng r(1);
    const std::vector<double> u{0.5, 0.5};
    const auto b1 = build_wiretap(r, u, 3, 3, 3);
    const auto b2 = build_wiretap(r, u, 3, 3, 3);
    const std::vector<Symbol> y{0, 1, 2};
    CHECK(code_of([&] { decode_ml(ch, y, b1, b2, 1000); }) == ErrorCode::BudgetExceeded);
    CHECK_NOTHROW(decode_ml(ch, y, b1, b2, 64 * 64 * 3));
    const std::vector<Symbol> shorter{0, 1};
    CHECK(code_of([&] { decode_ml(ch, shorter, b1, b2); }) == ErrorCode::DimensionMismatch);
    const std::vector<Symbol> bad{0, 1, 7};
    CHECK(code_of([&] { decode_ml(ch, bad, b1, b2); }) == ErrorCode::IndexOutOfRange);
    const auto other = build_wiretap(r, u, 4, 1, 0);
    CHECK(code_of([&] { decode_ml(ch, y, b1, other); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("error probability falls with block length below capacity")
{
    const auto ch = twin_bsc(0.05);
    const std::vector<double> u{0.5, 0.5};
    std::vector<double> pe, se;
    const int trials = 10000;
    for (std::size_t n : {2u, 4u, 8u}) {
        const unsigned bits = static_cast<unsigned>(n / 2);
        Rng rng(derive_seed(31, {n}));
        int errors = 0;
        for (int t = 0; t < trials; ++t) {
            const auto b1 = build_mac(rng, u, n, bits, 1);
            const auto b2 = build_mac(rng, u, n, bits, 2);
            const auto m1 = uniform_below(rng, b1.num_messages()), m2 = uniform_below(rng, b2.num_messages());
            std::vector<Symbol> y(n);
            for (std::size_t i = 0; i < n; ++i) y[i] = sample(ch, b1.words[m1][i], b2.words[m2][i], rng).first;
            const auto d = decode_ml(ch, y, b1, b2);
            errors += d.msg1 != m1 || d.msg2 != m2;
        }
        const double p = errors / double(trials);
        pe.push_back(p);
        se.push_back(std::sqrt(p * (1 - p) / trials));
        MESSAGE("n=" << n << " Pe=" << p);
    }
    for (std::size_t i = 1; i < pe.size(); ++i) CHECK(pe[i] <= pe[i - 1] + 3 * (se[i] + se[i - 1]));
    CHECK(pe.back() <= pe.front());
}

TEST_CASE("width realization")
{
    CHECK(realize_width(2, 1.0) == 1);
    CHECK(realize_width(2, 0.811278) == 1);
    CHECK(realize_width(4, 0.5) == 1);
    CHECK(realize_width(3, 0.5) == 1);
    CHECK(realize_width(10, 0.25) == 2);
    CHECK(realize_width(1, 0.5) == 0);
    CHECK(realize_width(5, 0.0) == 0);
    CHECK(realize_width(4, 1.0) == 3);
    CHECK(default_rand_bits(2, 0.188722) == 1);
    CHECK(default_rand_bits(2, 1.0) == 2);
    CHECK(default_rand_bits(2, 0.0) == 0);
    for (std::size_t n = 1; n < 20; ++n)
        for (double r : {0.1, 0.33, 0.5, 0.811, 1.0, 1.5}) CHECK(realize_width(n, r) < n * r + 1e-12);
}

TEST_CASE("codebook JSON")
{
    Rng r(1);
    const std::vector<double> u{0.5, 0.5};
    const auto book = build_wiretap(r, u, 2, 1, 1, 2);
    const auto j = nlohmann::json::parse(codebook_to_json(book));
    CHECK(j["kind"] == "wiretap");
    CHECK(j["user"] == 2);
    CHECK(j["words"].size() == 4);
    CHECK(j["words"][3].get<Codeword>() == book.words[3]);
    const auto mac = build_mac(r, u, 2, 1);
    CHECK(nlohmann::json::parse(codebook_to_json(mac))["kind"] == "mac");
}
