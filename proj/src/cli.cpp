#include "concentrate/cli.hpp"

#include "concentrate/error.hpp"
#include "concentrate/harness.hpp"
#include "concentrate/random.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

namespace concentrate {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_number(std::string_view text, std::string_view what) {
    const std::string t = trim(text);
    T value{};
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
        throw UsageError("invalid " + std::string(what) + " '" + std::string(text) + "'");
    return value;
}

std::vector<std::string_view> split(std::string_view text, std::string_view sep) {
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (true) {
        const auto next = text.find(sep, pos);
        parts.push_back(text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
        if (next == std::string_view::npos) break;
        pos = next + sep.size();
    }
    return parts;
}

std::vector<double> parse_list(std::string_view text, std::string_view what) {
    std::vector<double> out;
    for (auto part : split(text, ",")) out.push_back(parse_number<double>(part, what));
    return out;
}

std::vector<double> read_spectrum_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read spectrum file '" + path + "'");
    std::vector<double> values;
    std::string line;
    while (std::getline(in, line)) {
        const auto text = trim(std::string_view(line).substr(0, line.find('#')));
        if (!text.empty()) values.push_back(parse_number<double>(text, "spectrum entry"));
    }
    return values;
}

std::vector<std::uint32_t> parse_n_list(std::string_view text) {
    std::vector<std::uint32_t> out;
    if (text.find("..") != std::string_view::npos) {
        const auto parts = split(text, "..");
        if (parts.size() != 3) throw UsageError("n-list range must read a..b..step");
        const auto a = parse_number<std::uint32_t>(parts[0], "n-list start");
        const auto b = parse_number<std::uint32_t>(parts[1], "n-list end");
        const auto s = parse_number<std::uint32_t>(parts[2], "n-list step");
        if (s == 0 || a > b) throw UsageError("n-list range needs step > 0 and a <= b");
        for (std::uint64_t n = a; n <= b; n += s) out.push_back(static_cast<std::uint32_t>(n));
    } else {
        for (auto part : split(text, ",")) out.push_back(parse_number<std::uint32_t>(part, "n-list entry"));
    }
    if (std::any_of(out.begin(), out.end(), [](auto n) { return n == 0; }))
        throw UsageError("n-list entries must be >= 1");
    for (std::size_t i = 1; i < out.size(); ++i)
        if (out[i] <= out[i - 1]) throw UsageError("n-list must be strictly increasing");
    return out;
}

std::vector<double> parse_r_grid(std::string_view text) {
    const auto parts = split(text, ":");
    if (parts.size() != 3) throw UsageError("r-grid must read lo:hi:steps");
    const double lo  = parse_number<double>(parts[0], "r-grid lower bound");
    const double hi  = parse_number<double>(parts[1], "r-grid upper bound");
    const auto steps = parse_number<std::size_t>(parts[2], "r-grid step count");
    if (steps == 0 || !(hi >= lo)) throw UsageError("r-grid needs steps >= 1 and lo <= hi");
    return linear_grid(lo, hi, steps);
}

struct Options {
    std::string spectrum;
    std::string spectrum_file;
    std::string sigma;
    bool renormalize = false;
    std::size_t size = 0;
    std::string r;
    double rate = 0.0;
    std::string kind;
    std::string n_list;
    std::string r_grid;
    std::string format = "csv";
    std::string out_path;
    std::uint64_t seed = kDefaultSeed;
    double tolerance   = 0.0;
    double max_types   = kDefaultMaxTypes;
};

SchmidtSpectrum load_spectrum(const Options &o, const CLI::App &sub) {
    const bool inline_given = sub.count("--spectrum") > 0;
    const bool file_given   = sub.count("--spectrum-file") > 0;
    if (inline_given == file_given) throw UsageError("give exactly one of --spectrum or --spectrum-file");
    const auto values = inline_given ? parse_list(o.spectrum, "spectrum entry") : read_spectrum_file(o.spectrum_file);
    return new_spectrum(values, o.renormalize);
}

void emit(const ExperimentRecord &rec, OutputFormat format, const std::string &path, std::ostream &out) {
    if (path.empty()) {
        write_record(rec, format, out);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw UsageError("cannot write '" + path + "'");
    write_record(rec, format, file);
}

} // namespace

int parse_and_dispatch(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Entanglement concentration: finite protocols, exact n-copy exponents and asymptotic yield curves.",
                 "concentrate"};
    app.require_subcommand(1);
    Options o;

    auto add_spectrum = [&](CLI::App *sub) {
        sub->add_option("--spectrum", o.spectrum, "Schmidt coefficients, comma separated");
        sub->add_option("--spectrum-file", o.spectrum_file, "File with one coefficient per line, '#' comments");
        sub->add_flag("--renormalize", o.renormalize, "Divide by the sum instead of rejecting unnormalized input");
    };
    auto add_output = [&](CLI::App *sub) {
        sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", o.out_path, "Output file (default: standard output)");
    };

    auto *info = app.add_subcommand("info", "Entropy, deterministic exponent, saturation point and certain yield");
    add_spectrum(info);
    add_output(info);

    auto *finite = app.add_subcommand("finite", "Optimal single-copy protocol for target size L");
    add_spectrum(finite);
    add_output(finite);
    finite->add_option("--size", o.size, "Target size L")->required();

    auto *yield = app.add_subcommand("yield", "Asymptotic yield at exponent r");
    add_spectrum(yield);
    add_output(yield);
    yield->add_option("--r", o.r, "Exponent r, or a comma list");
    yield->add_option("--r-grid", o.r_grid, "lo:hi:steps");
    yield->add_option("--kind", o.kind, "direct|converse|fidelity-direct|fidelity-converse")->required();

    auto *sweep = app.add_subcommand("sweep", "All four yield curves on an exponent grid");
    add_spectrum(sweep);
    add_output(sweep);
    sweep->add_option("--r-grid", o.r_grid, "lo:hi:steps (default: 200 points)");

    auto *converge = app.add_subcommand("converge", "Exact finite-n exponents against the asymptotic prediction");
    add_spectrum(converge);
    add_output(converge);
    converge->add_option("--rate", o.rate, "Per-copy rate R in bits")->required();
    converge->add_option("--kind", o.kind, "direct or converse (default: from R against H(p))");
    converge->add_option("--n-list", o.n_list, "a,b,c or a..b..step (default 100,200,500,1000,2000)");
    converge->add_option("--tolerance", o.tolerance, "Pass threshold on the final |residual|");
    converge->add_option("--max-types", o.max_types, "Cap on enumerated types");

    auto *nonadd = app.add_subcommand("nonadd", "Yield relations for a product of two spectra");
    add_spectrum(nonadd);
    add_output(nonadd);
    nonadd->add_option("--sigma", o.sigma, "Second spectrum, comma separated")->required();
    nonadd->add_option("--r-grid", o.r_grid, "lo:hi:steps");

    auto *fidelity = app.add_subcommand("fidelity", "Fidelity and probability conversion checks");
    add_spectrum(fidelity);
    add_output(fidelity);
    fidelity->add_option("--size", o.size, "Target size T (default: every T in [2, d])");

    auto *check = app.add_subcommand("check", "Every module invariant on seeded random spectra");
    add_output(check);
    check->add_option("--seed", o.seed, "RNG seed");
    check->add_option("--tolerance", o.tolerance, "Replace every property tolerance");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n" << app.help();
        return kExitUsage;
    }

    CLI::App *sub           = app.get_subcommands().front();
    const OutputFormat fmt  = o.format == "json" ? OutputFormat::Json : OutputFormat::Csv;
    try {
        ExperimentRecord rec;
        bool gate = false; // exit code reflects `passed`
        if (sub == info) {
            rec = info_record(load_spectrum(o, *sub));
        } else if (sub == finite) {
            rec = finite_record(load_spectrum(o, *sub), o.size);
        } else if (sub == yield) {
            const auto kind = [&] {
                try {
                    return parse_yield_kind(o.kind);
                } catch (const Error &e) {
                    throw UsageError(e.what());
                }
            }();
            if ((sub->count("--r") > 0) == (sub->count("--r-grid") > 0))
                throw UsageError("give exactly one of --r or --r-grid");
            const auto r = o.r.empty() ? parse_r_grid(o.r_grid) : parse_list(o.r, "exponent");
            rec          = yield_record(load_spectrum(o, *sub), r, kind);
        } else if (sub == sweep) {
            SweepConfig cfg{load_spectrum(o, *sub), {}};
            cfg.r_grid = o.r_grid.empty() ? default_r_grid(cfg.spectrum) : parse_r_grid(o.r_grid);
            rec        = run_sweep(cfg);
        } else if (sub == converge) {
            ConvergenceConfig cfg{load_spectrum(o, *sub), o.rate, {100, 200, 500, 1000, 2000}};
            if (!o.n_list.empty()) cfg.n_list = parse_n_list(o.n_list);
            if (o.kind.empty())
                cfg.regime = o.rate < shannon_entropy(cfg.spectrum) ? Regime::Direct : Regime::Converse;
            else if (o.kind == "direct")
                cfg.regime = Regime::Direct;
            else if (o.kind == "converse")
                cfg.regime = Regime::Converse;
            else
                throw UsageError("converge --kind must be direct or converse");
            if (sub->count("--tolerance") > 0) cfg.tolerance = o.tolerance;
            cfg.max_types = o.max_types;
            rec           = run_convergence(cfg);
            gate          = true;
        } else if (sub == nonadd) {
            NonAdditivityConfig cfg{load_spectrum(o, *sub), new_spectrum(parse_list(o.sigma, "sigma entry"),
                                                                         o.renormalize),
                                    {}};
            cfg.r_grid = o.r_grid.empty() ? default_r_grid(cfg.rho) : parse_r_grid(o.r_grid);
            rec        = run_nonadditivity(cfg);
            gate       = true;
        } else if (sub == fidelity) {
            std::optional<std::size_t> T;
            if (sub->count("--size") > 0) T = o.size;
            rec  = fidelity_record(load_spectrum(o, *sub), T);
            gate = true;
        } else if (sub == check) {
            CheckSuiteConfig cfg;
            cfg.seed = o.seed;
            if (sub->count("--tolerance") > 0) cfg.tolerance = o.tolerance;
            rec  = run_check_suite(cfg);
            gate = true;
        }
        emit(rec, fmt, o.out_path, out);
        if (gate && !rec.passed) {
            err << sub->get_name() << ": failed\n";
            return kExitDomain;
        }
        return kExitOk;
    } catch (const UsageError &e) {
        err << "error: " << e.what() << "\n" << sub->help();
        return kExitUsage;
    } catch (const Error &e) {
        err << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
        try {
            emit(error_record(to_string(e.code()), e.what()), fmt, o.out_path, out);
        } catch (const UsageError &) {
        }
        return kExitDomain;
    }
}

} // namespace concentrate
