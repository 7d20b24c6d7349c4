#include "macwt/coding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "json.hpp"
#include "macwt/error.hpp"
#include "macwt/rate_regions.hpp"

namespace macwt {

Message::Message(std::uint64_t value, unsigned width) : value_(value), width_(width)
{
    if (width_ < 1 || width_ > kMaxWidth)
        throw Error(ErrorCode::WidthMismatch, "message width must be in [1, 62], got " + std::to_string(width_));
    if (value_ >> width_) throw Error(ErrorCode::WidthMismatch, "value does not fit in " + std::to_string(width_) + " bits");
}

Message Message::from_bits(const std::string& bits)
{
    std::uint64_t v = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') throw Error(ErrorCode::ParseError, "bit string may hold only 0 and 1");
        v = (v << 1) | static_cast<std::uint64_t>(c - '0');
    }
    return Message(v, static_cast<unsigned>(bits.size()));
}

std::string Message::bits() const
{
    std::string s(width_, '0');
    for (unsigned i = 0; i < width_; ++i)
        if ((value_ >> (width_ - 1 - i)) & 1U) s[i] = '1';
    return s;
}

Message Message::prefix(unsigned n) const
{
    if (n < 1 || n > width_) throw Error(ErrorCode::KeyTooShort, "prefix longer than message");
    return Message(value_ >> (width_ - n), n);
}

std::optional<Message> concat(const std::optional<Message>& head, const std::optional<Message>& tail)
{
    if (!head) return tail;
    if (!tail) return head;
    return Message((head->value() << tail->width()) | tail->value(), head->width() + tail->width());
}

Message xor_key(const Message& msg, const Message& key)
{
    if (key.width() < msg.width())
        throw Error(ErrorCode::KeyTooShort,
                    "key has " + std::to_string(key.width()) + " bits, message " + std::to_string(msg.width()));
    return Message(msg.value() ^ key.prefix(msg.width()).value(), msg.width());
}

namespace {

std::size_t table_words(unsigned bits)
{
    if (bits >= 40) throw Error(ErrorCode::SizeOverflow, "codebook index width " + std::to_string(bits));
    return std::size_t{1} << bits;
}

Codeword draw_word(Rng& rng, std::span<const double> p, std::size_t n)
{
    Codeword w(n);
    for (auto& s : w) s = static_cast<Symbol>(draw_index(p, rng));
    return w;
}

double support_words(std::span<const double> p, std::size_t n)
{
    std::size_t support = 0;
    for (double v : p)
        if (v > 0.0) ++support;
    return std::pow(static_cast<double>(support), static_cast<double>(n));
}

// words laid out in bins of bin_size consecutive entries
std::vector<Codeword> draw_table(Rng& rng, std::span<const double> p, std::size_t n, std::size_t bins,
                                 std::size_t bin_size, const CodebookOptions& opt, std::size_t& collisions)
{
    if (n == 0) throw Error(ErrorCode::InvalidConfig, "block length must be at least 1");
    const std::size_t total = bins * bin_size;
    if (static_cast<double>(total) * static_cast<double>(n) > static_cast<double>(opt.budget))
        throw Error(ErrorCode::SizeOverflow, "codebook of " + std::to_string(total) + " words of length " +
                                                 std::to_string(n) + " exceeds the budget");
    std::vector<Codeword> words;
    words.reserve(total);
    // word -> occurrences per bin
    std::map<Codeword, std::map<std::size_t, std::size_t>> seen;
    const bool expurgate = opt.distinct_bins && bins > 1 && support_words(p, n) >= static_cast<double>(total);
    constexpr int kMaxRedraws = 1000;
    for (std::size_t i = 0; i < total; ++i) {
        const std::size_t bin = i / bin_size;
        Codeword w = draw_word(rng, p, n);
        if (expurgate) {
            auto clashes = [&](const Codeword& c) {
                const auto it = seen.find(c);
                return it != seen.end() && (it->second.size() > 1 || it->second.begin()->first != bin);
            };
            for (int tries = 0; tries < kMaxRedraws && clashes(w); ++tries) w = draw_word(rng, p, n);
        }
        ++seen[w][bin];
        words.push_back(std::move(w));
    }
    collisions = 0;
    for (const auto& [word, per_bin] : seen) {
        std::size_t all = 0, same = 0;
        for (const auto& [bin, c] : per_bin) {
            all += c;
            same += c * (c - 1) / 2;
        }
        collisions += all * (all - 1) / 2 - same;
    }
    return words;
}

}  // namespace

WiretapCodebook build_wiretap(Rng& rng, std::span<const double> p, std::size_t n, unsigned msg_bits,
                              unsigned rand_bits, int user, const CodebookOptions& options)
{
    WiretapCodebook book;
    book.user = user;
    book.n = n;
    book.msg_bits = msg_bits;
    book.rand_bits = rand_bits;
    book.words = draw_table(rng, p, n, table_words(msg_bits), table_words(rand_bits), options, book.collisions);
    return book;
}

MacCodebook build_mac(Rng& rng, std::span<const double> p, std::size_t n, unsigned msg_bits, int user,
                      const CodebookOptions& options)
{
    MacCodebook book;
    book.user = user;
    book.n = n;
    book.msg_bits = msg_bits;
    book.words = draw_table(rng, p, n, table_words(msg_bits), 1, options, book.collisions);
    return book;
}

const Codeword& encode_wiretap_bin(const WiretapCodebook& book, std::uint64_t bin, Rng& rng)
{
    if (bin >= book.num_bins()) throw Error(ErrorCode::IndexOutOfRange, "bin index beyond the codebook");
    const std::uint64_t idx = book.rand_bits == 0 ? 0 : uniform_below(rng, book.bin_size());
    return book.word(static_cast<std::size_t>(bin), static_cast<std::size_t>(idx));
}

const Codeword& encode_wiretap(const WiretapCodebook& book, const Message& msg, Rng& rng)
{
    if (msg.width() != book.msg_bits)
        throw Error(ErrorCode::WidthMismatch, "message has " + std::to_string(msg.width()) + " bits, codebook expects " +
                                                  std::to_string(book.msg_bits));
    return encode_wiretap_bin(book, msg.value(), rng);
}

const Codeword& encode_mac(const MacCodebook& book, const Message& msg)
{
    if (msg.width() != book.msg_bits)
        throw Error(ErrorCode::WidthMismatch, "message has " + std::to_string(msg.width()) + " bits, codebook expects " +
                                                  std::to_string(book.msg_bits));
    return book.words.at(static_cast<std::size_t>(msg.value()));
}

namespace {

DecodedPair decode_tables(const ChannelSpec& spec, std::span<const Symbol> y, const std::vector<Codeword>& w1,
                          unsigned shift1, const std::vector<Codeword>& w2, unsigned shift2, std::size_t n,
                          std::uint64_t budget)
{
    if (y.size() != n) throw Error(ErrorCode::DimensionMismatch, "received block length differs from the codebooks");
    if (static_cast<double>(w1.size()) * static_cast<double>(w2.size()) * static_cast<double>(n) >
        static_cast<double>(budget))
        throw Error(ErrorCode::BudgetExceeded, "ML search over " + std::to_string(w1.size()) + " x " +
                                                   std::to_string(w2.size()) + " candidates exceeds the budget");
    const auto ys = spec.sizes().y;
    for (Symbol s : y)
        if (s >= ys) throw Error(ErrorCode::IndexOutOfRange, "received symbol outside |Y|");

    // log p(y_t | x1_t, x2_t) table for every input pair
    const auto& sz = spec.sizes();
    std::vector<double> loglik(sz.x1 * sz.x2 * n);
    for (std::size_t a = 0; a < sz.x1; ++a)
        for (std::size_t b = 0; b < sz.x2; ++b) {
            const auto row = spec.bob_row(a, b);
            for (std::size_t t = 0; t < n; ++t) {
                const double v = row[y[t]];
                loglik[(a * sz.x2 + b) * n + t] = v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity();
            }
        }

    const std::size_t bins1 = w1.size() >> shift1, per1 = std::size_t{1} << shift1;
    const std::size_t bins2 = w2.size() >> shift2, per2 = std::size_t{1} << shift2;
    double best = -std::numeric_limits<double>::infinity();
    DecodedPair out{0, 0};
    bool have = false;
    for (std::size_t m1 = 0; m1 < bins1; ++m1)
        for (std::size_t m2 = 0; m2 < bins2; ++m2)
            for (std::size_t r1 = 0; r1 < per1; ++r1)
                for (std::size_t r2 = 0; r2 < per2; ++r2) {
                    const Codeword& c1 = w1[m1 * per1 + r1];
                    const Codeword& c2 = w2[m2 * per2 + r2];
                    double score = 0.0;
                    for (std::size_t t = 0; t < n && score > -std::numeric_limits<double>::infinity(); ++t)
                        score += loglik[(c1[t] * sz.x2 + c2[t]) * n + t];
                    // equal likelihoods summed in another order can differ in the last bits
                    const bool better = score > best && (std::isinf(best) ||
                                                         score - best > 1e-12 * std::max(1.0, std::abs(best)));
                    if (!have || better) {
                        best = score;
                        out = {m1, m2};
                        have = true;
                    }
                }
    return out;
}

}  // namespace

DecodedPair decode_ml(const ChannelSpec& spec, std::span<const Symbol> y, const WiretapCodebook& book1,
                      const WiretapCodebook& book2, std::uint64_t budget)
{
    if (book1.n != book2.n) throw Error(ErrorCode::DimensionMismatch, "codebooks have different block lengths");
    return decode_tables(spec, y, book1.words, book1.rand_bits, book2.words, book2.rand_bits, book1.n, budget);
}

DecodedPair decode_ml(const ChannelSpec& spec, std::span<const Symbol> y, const MacCodebook& book1,
                      const MacCodebook& book2, std::uint64_t budget)
{
    if (book1.n != book2.n) throw Error(ErrorCode::DimensionMismatch, "codebooks have different block lengths");
    return decode_tables(spec, y, book1.words, 0, book2.words, 0, book1.n, budget);
}

unsigned realize_width(std::size_t n, double rate)
{
    const double x = static_cast<double>(n) * rate;
    if (x <= 1e-9) return 0;
    const long long w = ceil_tolerant(x) - 1;
    return static_cast<unsigned>(std::max(0LL, w));
}

unsigned default_rand_bits(std::size_t n, double leak_per_use)
{
    const double x = static_cast<double>(n) * leak_per_use;
    if (x <= 1e-9) return 0;
    return static_cast<unsigned>(ceil_tolerant(x));
}

namespace {

nlohmann::json words_json(const std::vector<Codeword>& words)
{
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& w : words) arr.push_back(w);
    return arr;
}

}  // namespace

std::string codebook_to_json(const WiretapCodebook& book)
{
    nlohmann::json j;
    j["kind"] = "wiretap";
    j["user"] = book.user;
    j["n"] = book.n;
    j["msg_bits"] = book.msg_bits;
    j["rand_bits"] = book.rand_bits;
    j["collisions"] = book.collisions;
    j["words"] = words_json(book.words);
    return j.dump();
}

std::string codebook_to_json(const MacCodebook& book)
{
    nlohmann::json j;
    j["kind"] = "mac";
    j["user"] = book.user;
    j["n"] = book.n;
    j["msg_bits"] = book.msg_bits;
    j["collisions"] = book.collisions;
    j["words"] = words_json(book.words);
    return j.dump();
}

}  // namespace macwt
