#include "macwt/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "macwt/channel_io.hpp"
#include "macwt/channel_model.hpp"
#include "macwt/key_protocol.hpp"
#include "macwt/leakage_audit.hpp"
#include "macwt/rate_regions.hpp"

namespace macwt::cli {

int exit_status(ErrorCode code)
{
    switch (code) {
    case ErrorCode::NoPositiveSecrecyRate:
    case ErrorCode::InvalidConfig:
    case ErrorCode::KeyDeficit:
    case ErrorCode::InvalidSlot:
        return kExitInfeasible;
    case ErrorCode::BudgetExceeded:
    case ErrorCode::SizeOverflow:
        return kExitBudget;
    default:
        return kExitInput;
    }
}

std::string fmt(double v)
{
    if (v == 0.0) v = 0.0;  // no "-0"
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::uint64_t resolve_budget(const Options& opt)
{
    if (opt.budget) return *opt.budget;
    if (const char* env = std::getenv("MACWT_BUDGET"); env && *env) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (*end != '\0' || v == 0) throw Error(ErrorCode::ParseError, "MACWT_BUDGET must be a positive integer");
        return v;
    }
    return kDefaultBudget;
}

namespace {

ChannelSpec load_spec(const Options& opt)
{
    if (opt.channel.empty()) throw Error(ErrorCode::ParseError, "--channel is required");
    if (std::filesystem::exists(opt.channel)) return load_channel(opt.channel);
    for (const auto& n : fixtures::names())
        if (n == opt.channel) return fixtures::get(n);
    throw Error(ErrorCode::IoError, "cannot open channel file '" + opt.channel + "'");
}

InputPair load_input_pair(const Options& opt, const ChannelSpec& spec)
{
    InputPair in = opt.inputs.empty() ? InputPair::uniform(spec.sizes()) : load_inputs(opt.inputs);
    if (in.p1.size() != spec.sizes().x1 || in.p2.size() != spec.sizes().x2)
        throw Error(ErrorCode::DimensionMismatch, "input distributions do not match the channel alphabets");
    return in;
}

std::uint64_t need_seed(const Options& opt)
{
    if (!opt.seed) throw Error(ErrorCode::ParseError, "--seed is required for stochastic commands");
    return *opt.seed;
}

// Collects outputs and commits them only after everything was computed.
class OutputSet {
public:
    explicit OutputSet(const Options& opt) : dir_(opt.out), force_(opt.force) {}

    void add(const std::string& name, std::string body) { files_.emplace_back(name, std::move(body)); }

    void commit(std::ostream& log)
    {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec) throw Error(ErrorCode::IoError, "cannot create '" + dir_.string() + "': " + ec.message());
        for (const auto& [name, body] : files_)
            if (!force_ && std::filesystem::exists(dir_ / name))
                throw Error(ErrorCode::IoError, "'" + (dir_ / name).string() + "' exists; pass --force to overwrite");
        for (const auto& [name, body] : files_) {
            const auto target = dir_ / name;
            const auto tmp = dir_ / (name + ".tmp");
            {
                std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
                if (!f) throw Error(ErrorCode::IoError, "cannot write '" + tmp.string() + "'");
                f << body;
                if (!f.flush()) throw Error(ErrorCode::IoError, "write failed for '" + tmp.string() + "'");
            }
            std::filesystem::rename(tmp, target, ec);
            if (ec) throw Error(ErrorCode::IoError, "cannot rename onto '" + target.string() + "': " + ec.message());
            log << "wrote " << target.string() << "\n";
        }
    }

private:
    std::filesystem::path dir_;
    bool force_;
    std::vector<std::pair<std::string, std::string>> files_;
};

PlanRequest plan_request(const Options& opt, std::uint64_t seed)
{
    PlanRequest req;
    req.n1 = opt.n1;
    req.l = opt.l;
    req.num_slots = opt.slots;
    req.seed = seed;
    req.budget = resolve_budget(opt);
    return req;
}

void report_deficits(const SlotConfig& cfg, std::ostream& log)
{
    for (const auto& d : cfg.deficits)
        log << "note: slot " << d.slot << " user " << d.user << " keyed width lowered from " << d.wanted << " to "
            << d.granted << " bits (previous message too short)\n";
}

}  // namespace

int cmd_region(const Options& opt, std::ostream& log)
{
    const auto spec = load_spec(opt);
    const auto inputs = load_input_pair(opt, spec);
    const auto info = information_terms(spec, inputs);
    const RatePentagon regions[2] = {secrecy_pentagon(info), mac_pentagon(info)};
    const char* kinds[2] = {"secrecy", "mac"};

    std::ostringstream caps, verts;
    caps << "region_kind,cap1,cap2,cap_sum\n";
    verts << "region_kind,idx,r1,r2\n";
    for (int r = 0; r < 2; ++r) {
        caps << kinds[r] << ',' << fmt(regions[r].cap1) << ',' << fmt(regions[r].cap2) << ','
             << fmt(regions[r].cap_sum) << '\n';
        const auto v = regions[r].vertices();
        for (std::size_t i = 0; i < v.size(); ++i)
            verts << kinds[r] << ',' << i << ',' << fmt(v[i].r1) << ',' << fmt(v[i].r2) << '\n';
    }
    OutputSet files(opt);
    files.add("region.csv", caps.str());
    files.add("vertices.csv", verts.str());
    files.commit(log);
    return kExitOk;
}

int cmd_schedule(const Options& opt, std::ostream& log)
{
    const auto spec = load_spec(opt);
    const auto inputs = load_input_pair(opt, spec);
    if (opt.slots < 1) throw Error(ErrorCode::InvalidSlot, "--slots must be at least 1");
    const auto sch = slot_schedule(spec, inputs, opt.slots, opt.l);

    std::ostringstream csv;
    csv << "# lambda1=" << sch.lambda1 << ",lambda2=" << sch.lambda2 << ",lambda=" << sch.lambda
        << ",lambda_star=" << sch.lambda_star << ",l=" << sch.l << '\n';
    csv << "k,R1,R2,sum,overall_R1,overall_R2\n";
    for (const auto& e : sch.per_slot)
        csv << e.slot << ',' << fmt(e.keyed1) << ',' << fmt(e.keyed2) << ',' << fmt(e.keyed_sum_bound) << ','
            << fmt(e.overall1) << ',' << fmt(e.overall2) << '\n';
    OutputSet files(opt);
    files.add("schedule.csv", csv.str());
    files.commit(log);
    return kExitOk;
}

int cmd_simulate(const Options& opt, std::ostream& log)
{
    const auto spec = load_spec(opt);
    const auto inputs = load_input_pair(opt, spec);
    const auto seed = need_seed(opt);
    if (opt.trials < 1) throw Error(ErrorCode::InvalidConfig, "--trials must be at least 1");
    const auto cfg = plan(spec, inputs, plan_request(opt, seed));
    report_deficits(cfg, log);
    const auto books = build_codebooks(spec, inputs, cfg);

    std::vector<ProtocolTrace> traces;
    traces.reserve(opt.trials);
    for (std::uint64_t t = 0; t < opt.trials; ++t) traces.push_back(run(spec, cfg, books, t));
    const auto pe = error_rate(traces);

    std::ostringstream csv;
    csv << "slot,realized_R1,realized_R2,Pe,ci_low,ci_high\n";
    for (const auto& r : pe) {
        const auto& s = traces.front().slots[static_cast<std::size_t>(r.slot - 1)];
        csv << r.slot << ',' << fmt(s.realized_r1) << ',' << fmt(s.realized_r2) << ',' << fmt(r.pe) << ','
            << fmt(r.ci_low) << ',' << fmt(r.ci_high) << '\n';
    }
    OutputSet files(opt);
    files.add("simulate.csv", csv.str());
    if (opt.dump_trace) {
        std::string dump = "[\n";
        for (std::size_t i = 0; i < traces.size(); ++i) {
            if (i) dump += ",\n";
            std::string one = traces[i].to_json();
            one.pop_back();  // trailing newline
            dump += one;
        }
        dump += "\n]\n";
        files.add("trace.json", std::move(dump));
    }
    files.commit(log);
    return kExitOk;
}

int cmd_leakage(const Options& opt, std::ostream& log)
{
    const auto spec = load_spec(opt);
    const auto inputs = load_input_pair(opt, spec);
    const auto seed = need_seed(opt);
    const auto cfg = plan(spec, inputs, plan_request(opt, seed));
    report_deficits(cfg, log);
    const auto books = build_codebooks(spec, inputs, cfg);
    AuditOptions ao;
    ao.budget = cfg.budget;
    ao.samples = opt.trials;
    ao.seed = seed;
    const auto table = audit(spec, cfg, books, ao);
    for (const auto& w : table.warnings) log << "warning: " << w << '\n';

    std::ostringstream csv;
    csv << "l,k,bits,method,enumeration_or_samples,epsilon_hat\n";
    for (const auto& row : table.rows)
        csv << row.report.l << ',' << row.report.k << ',' << fmt(row.report.value) << ',' << row.report.method << ','
            << row.report.enumeration << ',' << fmt(row.epsilon_hat) << '\n';
    OutputSet files(opt);
    files.add("leakage.csv", csv.str());
    files.commit(log);
    return kExitOk;
}

int cmd_fixtures_list(std::ostream& out)
{
    for (const auto& n : fixtures::names()) out << n << '\n';
    return kExitOk;
}

int cmd_fixtures_emit(const std::string& name, const Options& opt, std::ostream& log)
{
    const auto spec = fixtures::get(name);
    OutputSet files(opt);
    files.add(name + ".json", channel_to_json(spec));
    files.commit(log);
    return kExitOk;
}

int run(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Two-user multiple-access wiretap channel lab"};
    app.require_subcommand(1);
    Options opt;
    std::uint64_t seed = 0, budget = 0;
    std::vector<CLI::Option*> seed_opts, budget_opts;

    auto common = [&](CLI::App* c) {
        c->add_option("--channel", opt.channel, "channel JSON file or fixture name")->required();
        c->add_option("--inputs", opt.inputs, "input distributions: JSON file or inline 'a,b;c,d'");
        budget_opts.push_back(c->add_option("--budget", budget, "enumeration budget (overrides MACWT_BUDGET)"));
        c->add_option("--out", opt.out, "output directory");
        c->add_flag("--force", opt.force, "overwrite existing outputs");
    };
    auto coding = [&](CLI::App* c) {
        c->add_option("--n1", opt.n1, "wiretap part length")->check(CLI::PositiveNumber);
        c->add_option("--l", opt.l, "keyed part length multiplier, n2 = l * n1");
        c->add_option("--slots", opt.slots, "number of slots K");
        seed_opts.push_back(c->add_option("--seed", seed, "root seed")->required());
    };

    auto* region = app.add_subcommand("region", "secrecy and MAC pentagons");
    common(region);
    auto* schedule = app.add_subcommand("schedule", "ramp-up rate schedule");
    common(schedule);
    schedule->add_option("--slots", opt.slots, "number of slots");
    schedule->add_option("--l", opt.l, "keyed part length multiplier");
    auto* simulate = app.add_subcommand("simulate", "run the slotted key-chaining protocol");
    common(simulate);
    coding(simulate);
    simulate->add_option("--trials", opt.trials, "independent runs");
    simulate->add_flag("--dump-trace", opt.dump_trace, "write trace.json");
    auto* leakage = app.add_subcommand("leakage", "leakage audit over all slot pairs");
    common(leakage);
    coding(leakage);
    leakage->add_option("--trials", opt.trials, "Monte Carlo samples for cells over budget");
    auto* fix = app.add_subcommand("fixtures", "built-in channels");
    fix->require_subcommand(1);
    auto* list = fix->add_subcommand("list", "print fixture names");
    auto* emit = fix->add_subcommand("emit", "write a fixture as JSON");
    std::string name;
    emit->add_option("name", name, "fixture name")->required();
    emit->add_option("--out", opt.out, "output directory");
    emit->add_flag("--force", opt.force, "overwrite existing outputs");

    std::vector<const char*> cargv;
    for (const auto& a : argv) cargv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitInput;
    }

    for (auto* o : budget_opts)
        if (o->count()) opt.budget = budget;
    for (auto* o : seed_opts)
        if (o->count()) opt.seed = seed;

    try {
        if (*region) return cmd_region(opt, err);
        if (*schedule) return cmd_schedule(opt, err);
        if (*simulate) return cmd_simulate(opt, err);
        if (*leakage) return cmd_leakage(opt, err);
        if (*list) return cmd_fixtures_list(out);
        if (*emit) return cmd_fixtures_emit(name, opt, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_status(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    }
    return kExitInput;
}

}  // namespace macwt::cli
