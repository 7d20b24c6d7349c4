#include "macwt/channel_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "macwt/error.hpp"

namespace macwt {

using nlohmann::json;

std::string channel_to_json(const ChannelSpec& spec)
{
    const auto& s = spec.sizes();
    json t = json::array();
    for (std::size_t x1 = 0; x1 < s.x1; ++x1) {
        json a = json::array();
        for (std::size_t x2 = 0; x2 < s.x2; ++x2) {
            json b = json::array();
            for (std::size_t y = 0; y < s.y; ++y) {
                json c = json::array();
                for (std::size_t z = 0; z < s.z; ++z) c.push_back(spec.prob(x1, x2, y, z));
                b.push_back(std::move(c));
            }
            a.push_back(std::move(b));
        }
        t.push_back(std::move(a));
    }
    json doc;
    doc["name"] = spec.name();
    doc["alphabets"] = {s.x1, s.x2, s.y, s.z};
    doc["transitions"] = std::move(t);
    return doc.dump(2) + "\n";
}

namespace {

const json& nested(const json& node, std::size_t expected, const char* what)
{
    if (!node.is_array() || node.size() != expected)
        throw Error(ErrorCode::DimensionMismatch,
                    std::string("transitions: ") + what + " level must be an array of length " + std::to_string(expected));
    return node;
}

}  // namespace

ChannelSpec channel_from_json(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
    try {
        const auto& al = doc.at("alphabets");
        if (!al.is_array() || al.size() != 4) throw Error(ErrorCode::ParseError, "'alphabets' must hold 4 integers");
        for (const auto& v : al)
            if (!v.is_number_integer() || v.get<long long>() < 0)
                throw Error(ErrorCode::ParseError, "'alphabets' entries must be nonnegative integers");
        const AlphabetSizes s{al[0].get<std::size_t>(), al[1].get<std::size_t>(), al[2].get<std::size_t>(),
                              al[3].get<std::size_t>()};
        if (s.x1 == 0 || s.x2 == 0 || s.y == 0 || s.z == 0)
            throw Error(ErrorCode::EmptyAlphabet, "all four alphabet sizes must be at least 1");
        std::vector<double> t;
        t.reserve(s.cells());
        const auto& top = nested(doc.at("transitions"), s.x1, "x1");
        for (const auto& a : top)
            for (const auto& b : nested(a, s.x2, "x2"))
                for (const auto& c : nested(b, s.y, "y"))
                    for (const auto& v : nested(c, s.z, "z")) {
                        if (!v.is_number()) throw Error(ErrorCode::ParseError, "transition entries must be numbers");
                        t.push_back(v.get<double>());
                    }
        std::string name = doc.contains("name") ? doc.at("name").get<std::string>() : std::string();
        return validate(s, std::move(t), std::move(name));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

namespace {

std::string slurp(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<double> parse_list(const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
        } catch (const std::logic_error&) {
            throw Error(ErrorCode::ParseError, "bad probability '" + item + "'");
        }
    }
    return out;
}

}  // namespace

ChannelSpec load_channel(const std::filesystem::path& path)
{
    return channel_from_json(slurp(path));
}

InputPair inputs_from_json(const std::string& text)
{
    try {
        const json doc = json::parse(text);
        return InputPair(doc.at("p1").get<std::vector<double>>(), doc.at("p2").get<std::vector<double>>());
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

InputPair parse_inputs_inline(const std::string& text)
{
    const auto semi = text.find(';');
    if (semi == std::string::npos) throw Error(ErrorCode::ParseError, "inline inputs must look like 'p1list;p2list'");
    return InputPair(parse_list(text.substr(0, semi)), parse_list(text.substr(semi + 1)));
}

InputPair load_inputs(const std::string& arg)
{
    if (std::filesystem::exists(arg)) return inputs_from_json(slurp(arg));
    return parse_inputs_inline(arg);
}

}  // namespace macwt
