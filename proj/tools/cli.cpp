#include "cli.hpp"

#include "qstego/errors.hpp"

#include <CLI11.hpp>
#include <sodium.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <future>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

namespace qstego::cli {

using nlohmann::json;

namespace {

constexpr const char* kZeroSeed = "0000000000000000000000000000000000000000000000000000000000000000";

/// Bad flag values or config contents; maps to the usage exit code.
class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Params {
    std::vector<std::string> channels;
    std::string target;
    std::uint32_t n = 0;
    std::string d = "2";
    double delta = std::numeric_limits<double>::quiet_NaN();
    double eps = std::numeric_limits<double>::quiet_NaN();
    double m_achieved = std::numeric_limits<double>::quiet_NaN();
    std::uint64_t blocks = 1000;
    std::string seed;
    bool otp = false;
    bool csv = false;
    std::string config;
    bool allow_wide = false;
    unsigned threads = 0;
    bool no_eve = false;
    std::string trace;
    double p = 0.1;
    std::size_t trials = 100;
    std::string message;
    std::string error_string;
    std::uint64_t block = 0;
    std::vector<std::uint32_t> ns;
};

json number_or_string(const std::string& s) {
    std::int64_t i = 0;
    const auto [iptr, iec] = std::from_chars(s.data(), s.data() + s.size(), i);
    if (iec == std::errc() && iptr == s.data() + s.size()) return i;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(v)) return v;
    return s;
}

std::optional<double> parse_coverage(const std::string& d) {
    if (d == "full") return std::nullopt;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(d.data(), d.data() + d.size(), v);
    if (ec != std::errc() || ptr != d.data() + d.size()) {
        throw UsageError("--d expects a number or 'full', got '" + d + "'");
    }
    return v;
}

std::string big_string(const BigCount& x) { return x.str(); }

json nullable(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Fills options the command line left unset from a JSON object of flag values.
void apply_config(CLI::App& sub, const json& cfg) {
    if (!cfg.is_object()) throw UsageError("config file must hold a JSON object");
    for (const auto& [key, value] : cfg.items()) {
        CLI::Option* opt = sub.get_option_no_throw("--" + key);
        if (opt == nullptr) opt = sub.get_option_no_throw(key);
        if (opt == nullptr || key == "config") {
            throw UsageError("config key '" + key + "' is not a flag of '" + sub.get_name() + "'");
        }
        if (opt->count() > 0) continue;
        std::vector<json> items = value.is_array() ? value.get<std::vector<json>>() : std::vector<json>{value};
        bool any = false;
        for (const auto& item : items) {
            if (item.is_boolean()) {
                if (!item.get<bool>()) continue;
                opt->add_result("true");
            } else if (item.is_string()) {
                opt->add_result(item.get<std::string>());
            } else if (item.is_number()) {
                opt->add_result(item.dump());
            } else {
                throw UsageError("config key '" + key + "' has an unsupported value");
            }
            any = true;
        }
        if (any) opt->run_callback();
    }
}

json resolved_config(const CLI::App& sub) {
    json cfg = json::object();
    for (const CLI::Option* opt : sub.get_options()) {
        std::string name = opt->get_single_name();
        while (!name.empty() && name.front() == '-') name.erase(name.begin());
        if (name == "help" || name == "config" || name == "seed") continue;
        if (opt->get_expected_min() == 0) {
            cfg[name] = opt->count() > 0;
            continue;
        }
        std::vector<std::string> values = opt->results();
        if (values.empty() && !opt->get_default_str().empty()) values.push_back(opt->get_default_str());
        if (values.empty()) {
            cfg[name] = nullptr;
        } else if (values.size() == 1 && opt->get_expected_max() <= 1) {
            cfg[name] = number_or_string(values.front());
        } else {
            json arr = json::array();
            for (const auto& v : values) arr.push_back(number_or_string(v));
            cfg[name] = arr;
        }
    }
    return cfg;
}

ChannelModel single_channel(const Params& ps) {
    if (ps.channels.size() != 1) throw UsageError("expected exactly one channel spec");
    return ChannelModel::parse(ps.channels.front());
}

void require_n(const Params& ps) {
    if (ps.n == 0) throw UsageError("--n is required and must be positive");
}

TypicalWindow window_for(const ChannelModel& ch, std::uint32_t n, const Params& ps) {
    const auto coverage = parse_coverage(ps.d);
    if (!coverage) return full_window(ch, n);
    return make_window(ch, n, *coverage, WindowOptions{ps.allow_wide});
}

StegoCodebook book_for(const ChannelModel& ch, std::uint32_t n, const Params& ps) {
    return StegoCodebook::compile(ch, n, window_for(ch, n, ps));
}

Seed seed_for(const Params& ps, bool required) {
    if (ps.seed.empty()) {
        if (required) throw UsageError("--seed <64 hex> is required");
        return Seed::from_hex(kZeroSeed);
    }
    try {
        return Seed::from_hex(ps.seed);
    } catch (const DomainError& e) {
        throw UsageError(std::string("--seed: ") + e.what());
    }
}

BigCount parse_big(const std::string& text, const char* flag) {
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
        throw UsageError(std::string(flag) + " expects a nonnegative decimal integer");
    }
    return BigCount(text);
}

json rate_row(const ChannelModel& ch, std::uint32_t n, const Params& ps) {
    return to_json(achievable_rate(book_for(ch, n, ps)));
}

json keycost_row(const ChannelModel& ch, std::uint32_t n, const Params& ps) {
    return to_json(key_cost(book_for(ch, n, ps)));
}

json secrecy_row(const ChannelModel& ch, std::uint32_t n, const Params& ps) {
    return to_json(tv_to_channel(book_for(ch, n, ps)));
}

json bound_row(const ChannelModel& ch, std::uint32_t n, const Params& ps, bool compile_rate) {
    if (!std::isfinite(ps.delta) || !std::isfinite(ps.eps)) throw UsageError("--delta and --eps are required");
    const bool claimed = !std::isnan(ps.m_achieved);
    double achieved = 0.0;
    if (claimed) achieved = ps.m_achieved;
    else if (compile_rate) achieved = book_for(ch, n, ps).message_bits();
    json j = to_json(upper_bound(ch, n, ps.delta, ps.eps, achieved));
    if (!compile_rate && !claimed) j["m_achieved"] = nullptr;
    return j;
}

json grid_row(const ChannelModel& ch, std::uint32_t n, const Params& ps) {
    const StegoCodebook book = book_for(ch, n, ps);
    const KeyBudgetReport key = key_cost(book);
    json row = {{"D", ps.d == "full" ? json("full") : json(*parse_coverage(ps.d))},
                {"delta", book.window().full_support ? json(nullptr) : json(book.window().delta)},
                {"M_bits", book.message_bits()},
                {"tv", tv_to_channel(book).tv_distance},
                {"K", key.k_measured},
                {"K_formula", key.k_formula ? json(*key.k_formula) : json(nullptr)},
                {"M_upper", nullptr}};
    // Without explicit tolerances, bound at the codebook's own secrecy level and eps = 0.
    const double tol = std::isfinite(ps.delta) ? ps.delta : std::min(row["tv"].get<double>(), std::nextafter(1.0, 0.0));
    const double eps = std::isfinite(ps.eps) ? ps.eps : 0.0;
    row["M_upper"] = upper_bound(ch, n, tol, eps, book.message_bits()).m_upper;
    return row;
}

json codebook_summary(const StegoCodebook& book) {
    json classes = json::array();
    for (const auto& c : book.classes()) {
        classes.push_back({{"weights", std::vector<std::uint32_t>(c.weights.counts().begin(), c.weights.counts().end())},
                           {"class_size", big_string(c.class_size)},
                           {"C_class", big_string(c.c_class)},
                           {"n_subsets", big_string(c.n_subsets)},
                           {"offset", big_string(c.offset)}});
    }
    json dropped = json::array();
    for (const auto& d : book.dropped()) {
        dropped.push_back(std::vector<std::uint32_t>(d.weights.counts().begin(), d.weights.counts().end()));
    }
    return {{"N", book.length()},
            {"channel", book.channel().to_spec()},
            {"delta", book.window().full_support ? json(nullptr) : json(book.window().delta)},
            {"C_total", big_string(book.total())},
            {"C_total_log2", log2_big(book.total())},
            {"M_bits", book.message_bits()},
            {"q_log2", book.q_log().value},
            {"exact", book.exact()},
            {"dropped_classes", dropped},
            {"truncation_mass", book.truncation_mass()},
            {"contains_atypical_members", book.contains_atypical_members()},
            {"classes", classes}};
}

json cmd_sweep(const Params& ps, bool& as_csv) {
    if (ps.channels.empty()) throw UsageError("sweep needs at least one channel spec");
    std::vector<std::uint32_t> ns = ps.ns;
    if (ns.empty() && ps.n > 0) ns.push_back(ps.n);
    if (ns.empty()) throw UsageError("sweep needs --ns or --n");
    std::vector<ChannelModel> channels;
    for (const auto& spec : ps.channels) channels.push_back(ChannelModel::parse(spec));

    std::vector<std::future<json>> jobs;
    for (const auto& ch : channels) {
        for (std::uint32_t n : ns) {
            if (n == 0) throw UsageError("--ns entries must be positive");
            jobs.push_back(std::async(std::launch::async, [&ps, ch, n]() {
                json row;
                if (ps.target == "rate") row = rate_row(ch, n, ps);
                else if (ps.target == "keycost") row = keycost_row(ch, n, ps);
                else if (ps.target == "secrecy") row = secrecy_row(ch, n, ps);
                else if (ps.target == "bound") row = bound_row(ch, n, ps, true);
                else row = grid_row(ch, n, ps);
                json out = {{"channel", ch.to_spec()}, {"N", n}, {"p", ch.error_probability()}};
                out.update(row);
                return out;
            }));
        }
    }
    json rows = json::array();
    for (auto& j : jobs) rows.push_back(j.get());
    as_csv = ps.csv;
    return {{"target", ps.target}, {"rows", rows}};
}

json cmd_simulate(const Params& ps) {
    require_n(ps);
    SimConfig cfg;
    cfg.channel = single_channel(ps);
    cfg.n = ps.n;
    const auto coverage = parse_coverage(ps.d);
    cfg.full_window = !coverage;
    cfg.coverage = coverage.value_or(0.0);
    cfg.allow_wide = ps.allow_wide;
    cfg.blocks = ps.blocks;
    cfg.seed = seed_for(ps, false);
    cfg.otp = ps.otp;
    cfg.eve_test = !ps.no_eve;
    cfg.threads = ps.threads;
    cfg.trace = !ps.trace.empty();
    const SimResult r = run(cfg);
    if (cfg.trace) {
        std::ofstream f(ps.trace);
        if (!f) throw UsageError("cannot write trace file '" + ps.trace + "'");
        f << "block,weight,llr,key_bits\n";
        f.precision(17);
        for (const auto& t : r.trace) f << t.block << ',' << t.weight << ',' << t.llr << ',' << t.key_bits << '\n';
    }
    return to_json(r);
}

json cmd_encode(const Params& ps) {
    require_n(ps);
    const ChannelModel ch = single_channel(ps);
    const StegoCodebook book = book_for(ch, ps.n, ps);
    KeyStream key(seed_for(ps, true), key_stream_id(ps.block));
    const ErrorString e = send_block(book, Message{parse_big(ps.message, "--message")}, key, ps.otp);
    return {{"error_string", e.to_string(ch.alphabet())}, {"key_bits", key.consumed()}, {"block", ps.block}};
}

json cmd_decode(const Params& ps) {
    require_n(ps);
    const ChannelModel ch = single_channel(ps);
    const StegoCodebook book = book_for(ch, ps.n, ps);
    KeyStream key(seed_for(ps, true), key_stream_id(ps.block));
    const Message m = receive_block(book, ErrorString::parse(ps.error_string, ch.alphabet()), key, ps.otp);
    return {{"message", big_string(m.index)}, {"key_bits", key.consumed()}, {"block", ps.block}};
}

void add_channel(CLI::App* sub, Params& ps) {
    sub->add_option("channel,--channel", ps.channels, "Channel spec, e.g. bitflip:p=0.1, depol:p=0.1, ru:p=0.7,0.2,0.1")
        ->expected(1);
}

void add_block_flags(CLI::App* sub, Params& ps) {
    sub->add_option("--n", ps.n, "Block length N");
    sub->add_option("--d", ps.d, "Coverage constant D, or 'full'")->capture_default_str();
    sub->add_flag("--allow-wide-window", ps.allow_wide, "Accept delta >= 1 by clipping the window at zero");
}

void add_config(CLI::App* sub, Params& ps) {
    sub->add_option("--config", ps.config, "JSON file supplying flag values; explicit flags win");
}

}  // namespace

json to_json(const RateReport& r) {
    return {{"M_bits", r.message_bits}, {"asymptote_bits", r.asymptote_bits}, {"ratio", nullable(r.ratio)},
            {"delta", r.full_support ? json(nullptr) : json(r.delta)}, {"full_support", r.full_support}};
}

json to_json(const KeyBudgetReport& r) {
    return {{"K_formula", r.k_formula ? json(*r.k_formula) : json(nullptr)},
            {"K_measured", r.k_measured},
            {"n_subsets_max", big_string(r.n_subsets_max)},
            {"otp_bits", r.otp_bits},
            {"delta", r.delta}};
}

json to_json(const SecrecyReport& r) {
    return {{"tv_distance", r.tv_distance},
            {"truncation_mass", r.truncation_mass},
            {"rounding_residual", r.rounding_residual},
            {"delta_param", r.full_support ? json(nullptr) : json(r.delta_param)},
            {"full_support", r.full_support},
            {"classes_dropped", r.classes_dropped},
            {"contains_atypical_members", r.contains_atypical_members}};
}

json to_json(const BoundReport& r) {
    return {{"h_sigma_e", r.h_sigma_e}, {"proven_maximum", r.proven_maximum}, {"g_term", r.g_term},
            {"f_term", r.f_term},       {"M_upper", r.m_upper},               {"m_achieved", r.m_achieved},
            {"tv_tolerance", r.tv_tolerance}, {"epsilon", r.epsilon}};
}

json to_json(const SimResult& r) {
    return {{"blocks", r.blocks},
            {"blocks_ok", r.blocks_ok},
            {"key_bits_used", r.key_bits_used},
            {"key_bits_per_block", r.key_bits_per_block},
            {"message_bits", r.message_bits},
            {"eve_llr_mean", r.eve_llr_mean},
            {"eve_llr_variance", r.eve_llr_variance},
            {"eve_advantage", r.eve_advantage ? json(*r.eve_advantage) : json(nullptr)},
            {"calibration_uncovered", r.calibration_uncovered ? json(*r.calibration_uncovered) : json(nullptr)},
            {"tv_exact", r.tv_exact}};
}

json to_json(const QeccDemoRecord& r) {
    return {{"p", r.p},
            {"fidelity", r.fidelity},
            {"entangled_fidelity", r.entangled_fidelity},
            {"syndrome_distribution", r.syndrome_distribution},
            {"trace_distance", r.trace_distance},
            {"trace_distance_superposed", r.trace_distance_superposed},
            {"kl_bound_bits", r.kl_bound_bits},
            {"trials", r.trials}};
}

std::string to_csv(const json& rows) {
    if (!rows.is_array() || rows.empty()) return "";
    std::vector<std::string> keys;
    static const std::vector<std::string> kLeading = {"N", "p", "D", "delta", "M_bits", "M_upper", "tv", "K"};
    for (const auto& k : kLeading) {
        if (rows.front().contains(k)) keys.push_back(k);
    }
    for (const auto& [k, v] : rows.front().items()) {
        if (std::find(kLeading.begin(), kLeading.end(), k) == kLeading.end()) keys.push_back(k);
    }
    std::ostringstream out;
    for (std::size_t i = 0; i < keys.size(); ++i) out << (i ? "," : "") << keys[i];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < keys.size(); ++i) {
            const json& v = row.contains(keys[i]) ? row.at(keys[i]) : json(nullptr);
            out << (i ? "," : "");
            if (v.is_string()) {
                const auto s = v.get<std::string>();
                if (s.find(',') != std::string::npos) out << '"' << s << '"';
                else out << s;
            } else if (!v.is_null()) {
                out << v.dump();
            }
        }
        out << '\n';
    }
    return out.str();
}

std::string sha256_hex(std::string_view data) {
    if (sodium_init() < 0) throw IntegrityError("libsodium initialization failed");
    unsigned char digest[crypto_hash_sha256_BYTES];
    crypto_hash_sha256(digest, reinterpret_cast<const unsigned char*>(data.data()), data.size());
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    for (unsigned char b : digest) {
        out += kDigits[b >> 4];
        out += kDigits[b & 15];
    }
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Steganographic coding over emulated quantum channel noise", "qstego"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);
    Params ps;

    auto* rate = app.add_subcommand("rate", "Achievable message bits for one block");
    auto* keycost = app.add_subcommand("keycost", "Key bits consumed per block");
    auto* secrecy = app.add_subcommand("secrecy", "Total-variation distance to the channel");
    auto* bound = app.add_subcommand("bound", "Upper bound on message bits");
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo of the full protocol with an optimal tester");
    auto* demo = app.add_subcommand("demo-qecc", "Five-qubit code syndrome steganography demo");
    auto* encode_cmd = app.add_subcommand("encode", "Map a message to an error string");
    auto* decode_cmd = app.add_subcommand("decode", "Recover a message from an error string");
    auto* sweep = app.add_subcommand("sweep", "Grid over channels and block lengths");
    auto* codebook = app.add_subcommand("codebook", "Compiled codebook summary");

    for (auto* sub : {rate, keycost, secrecy, bound, simulate, encode_cmd, decode_cmd, codebook}) {
        add_channel(sub, ps);
        add_block_flags(sub, ps);
    }
    for (auto* sub : {rate, keycost, secrecy, bound, simulate, demo, encode_cmd, decode_cmd, sweep, codebook}) {
        add_config(sub, ps);
    }
    for (auto* sub : {bound, sweep}) {
        sub->add_option("--delta", ps.delta, "Secrecy tolerance in [0,1)");
        sub->add_option("--eps", ps.eps, "Recoverability error in [0,1)");
    }
    bound->add_flag("--no-compile", "Skip compiling a codebook for m_achieved");
    bound->add_option("--m-achieved", ps.m_achieved, "Check a claimed message size instead of compiling one");

    simulate->add_option("--blocks", ps.blocks, "Blocks to transmit")->capture_default_str();
    for (auto* sub : {simulate, encode_cmd, decode_cmd}) {
        sub->add_option("--seed", ps.seed, "Shared key, 64 hex characters");
        sub->add_flag("--otp", ps.otp, "One-time-pad the message before encoding");
    }
    simulate->add_option("--threads", ps.threads, "Worker threads (0 = all cores)")->capture_default_str();
    simulate->add_flag("--no-eve", ps.no_eve, "Skip the calibration sample and advantage estimate");
    simulate->add_option("--trace", ps.trace, "Write a per-block CSV trace to this file");

    demo->add_option("--p", ps.p, "Depolarizing probability")->capture_default_str();
    demo->add_option("--trials", ps.trials, "Random round-trip trials")->capture_default_str();
    demo->add_option("--demo-seed", ps.block, "Seed for the random trial states")->capture_default_str();

    encode_cmd->add_option("--message", ps.message, "Message index (decimal)");
    decode_cmd->add_option("--string", ps.error_string, "Error string, e.g. IXIIZ");
    for (auto* sub : {encode_cmd, decode_cmd}) {
        sub->add_option("--block", ps.block, "Block position (selects the key substream)")->capture_default_str();
    }

    sweep->add_option("target", ps.target, "grid | rate | keycost | secrecy | bound")
        ->required()
        ->check(CLI::IsMember({"grid", "rate", "keycost", "secrecy", "bound"}));
    sweep->add_option("channels,--channels", ps.channels, "Channel specs");
    sweep->add_option("--ns", ps.ns, "Block lengths")->delimiter(',');
    sweep->add_option("--n", ps.n, "Single block length");
    sweep->add_option("--d", ps.d, "Coverage constant D, or 'full'")->capture_default_str();
    sweep->add_flag("--allow-wide-window", ps.allow_wide, "Accept delta >= 1 by clipping the window at zero");
    sweep->add_flag("--csv", ps.csv, "Emit CSV rows instead of JSON");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    CLI::App* sub = app.get_subcommands().front();
    try {
        json hashes = json::object();
        if (!ps.config.empty()) {
            const std::string text = read_file(ps.config);
            json cfg;
            try {
                cfg = json::parse(text);
            } catch (const json::parse_error& e) {
                throw UsageError(std::string("config file is not valid JSON: ") + e.what());
            }
            apply_config(*sub, cfg);
            hashes["config_file"] = sha256_hex(text);
        }
        if (!ps.seed.empty()) {
            const Seed s = seed_for(ps, true);
            hashes["seed"] = sha256_hex(std::string_view(reinterpret_cast<const char*>(s.bytes.data()), s.bytes.size()));
        }

        const std::string name = sub->get_name();
        json report;
        bool as_csv = false;
        if (name == "rate") {
            require_n(ps);
            report = rate_row(single_channel(ps), ps.n, ps);
        } else if (name == "keycost") {
            require_n(ps);
            report = keycost_row(single_channel(ps), ps.n, ps);
        } else if (name == "secrecy") {
            require_n(ps);
            report = secrecy_row(single_channel(ps), ps.n, ps);
        } else if (name == "bound") {
            require_n(ps);
            report = bound_row(single_channel(ps), ps.n, ps, sub->count("--no-compile") == 0);
        } else if (name == "simulate") {
            report = cmd_simulate(ps);
        } else if (name == "codebook") {
            require_n(ps);
            const ChannelModel ch = single_channel(ps);
            report = codebook_summary(book_for(ch, ps.n, ps));
        } else if (name == "demo-qecc") {
            report = to_json(run_qecc_demo(ps.p, ps.trials, ps.block));
        } else if (name == "encode") {
            report = cmd_encode(ps);
        } else if (name == "decode") {
            report = cmd_decode(ps);
        } else {
            report = cmd_sweep(ps, as_csv);
        }

        if (as_csv) {
            out << to_csv(report.at("rows"));
            return kOk;
        }
        report["manifest"] = {{"tool", "qstego"},
                              {"version", kToolVersion},
                              {"command", name},
                              {"config", resolved_config(*sub)},
                              {"input_hashes", hashes},
                              {"timestamp", utc_timestamp()}};
        out << report.dump(2) << '\n';
        return kOk;
    } catch (const ChannelSpecError& e) {
        err << "usage error: " << e.what() << " (offending token: '" << e.token() << "')\n";
        return kUsage;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const IntegrityError& e) {
        err << "integrity failure: " << e.what() << '\n';
        return kIntegrity;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << '\n';
        return kDomain;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

}  // namespace qstego::cli
