#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "macwt/error.hpp"

namespace macwt::cli {

// Exit statuses of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitInfeasible = 3;
inline constexpr int kExitBudget = 4;

int exit_status(ErrorCode code);

// Shared flags after parsing.
struct Options {
    std::string channel;  // JSON file, or the name of a built-in fixture
    std::string inputs;   // JSON file or inline "a,b;c,d"; empty means uniform
    std::size_t n1 = 2;
    int l = 1;
    int slots = 3;
    std::uint64_t trials = 1000;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> budget;  // falls back to MACWT_BUDGET, then the default
    std::filesystem::path out = ".";
    bool dump_trace = false;
    bool force = false;
};

std::uint64_t resolve_budget(const Options& opt);

// Each command writes its files under opt.out and returns an exit status;
// library errors are thrown as macwt::Error.
int cmd_region(const Options& opt, std::ostream& log);
int cmd_schedule(const Options& opt, std::ostream& log);
int cmd_simulate(const Options& opt, std::ostream& log);
int cmd_leakage(const Options& opt, std::ostream& log);
int cmd_fixtures_list(std::ostream& out);
int cmd_fixtures_emit(const std::string& name, const Options& opt, std::ostream& log);

// Full argument handling: argv[0] is the program name.
int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

// Fixed 12-significant-digit number formatting used in every CSV.
std::string fmt(double v);

}  // namespace macwt::cli
