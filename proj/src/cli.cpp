// Copyright 2026 The noonlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "noonlab/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "noonlab/dataset.hpp"
#include "noonlab/error.hpp"
#include "noonlab/fitkit.hpp"
#include "noonlab/fock.hpp"
#include "noonlab/io.hpp"
#include "noonlab/metrology.hpp"
#include "noonlab/projection.hpp"
#include "noonlab/rng.hpp"
#include "noonlab/simkit.hpp"
#include "noonlab/vismodel.hpp"

namespace noonlab {

namespace {

using nlohmann::json;

constexpr std::string_view kAccidentalSeries = "accidental";
constexpr std::string_view kDefaultSeries = "AB,CD,AC,BD,AD,CB,4fold,accidental";
constexpr double kDefaultRepRate = 76e6;

struct Common {
    std::string output_dir;
    std::optional<std::uint64_t> seed;
    std::string format;
};

void add_common(CLI::App *cmd, Common &common, const std::string &default_format) {
    common.format = default_format;
    cmd->add_option("--output-dir", common.output_dir,
                    "Write results and a run manifest here instead of stdout");
    cmd->add_option("--seed", common.seed, "Random seed");
    cmd->add_option("--format", common.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
}

std::string ext_of(const Common &common) { return common.format == "json" ? ".json" : ".csv"; }

void write_file(const std::filesystem::path &path, const std::string &content) {
    std::ofstream f(path);
    if (!f) {
        throw ValidationError("cannot write '" + path.string() + "'");
    }
    f << content;
}

// Prints content, or writes it as `name` plus a manifest under --output-dir.
void emit(const Common &common, std::ostream &out, const std::string &name,
          const std::string &content, const RunManifest &manifest) {
    if (common.output_dir.empty()) {
        out << content;
        return;
    }
    const std::filesystem::path dir(common.output_dir);
    std::filesystem::create_directories(dir);
    write_file(dir / name, content);
    write_file(dir / (manifest.command + ".manifest.json"), manifest.to_json().dump(2) + "\n");
    out << (dir / name).string() << '\n';
}

std::vector<std::string> split_list(const std::string &text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

// ---- simulate ----

struct SimulateArgs {
    Common common;
    std::string config;
};

void cmd_simulate(const SimulateArgs &a, std::ostream &out) {
    SimulationSpec spec = parse_simulation_spec(load_json_file(a.config));
    if (a.common.seed) {
        spec.experiment.seed = *a.common.seed;
    }
    if (spec.background_run && a.common.output_dir.empty()) {
        throw ValidationError("simulate: background_run needs --output-dir");
    }
    const CountDataset counts = simulate_counts(spec.experiment);
    const RunManifest manifest =
        make_manifest("simulate", simulation_spec_to_json(spec), spec.experiment.seed);

    const auto render = [&](const CountDataset &ds) {
        if (a.common.format == "json") {
            return counts_to_json(ds).dump(2) + "\n";
        }
        std::ostringstream s;
        write_counts_csv(s, ds);
        return s.str();
    };
    emit(a.common, out, "counts" + ext_of(a.common), render(counts), manifest);
    if (spec.background_run) {
        ExperimentConfig bg = spec.experiment;
        bg.pair_prob = 0.0;
        std::uint64_t state = spec.experiment.seed;
        splitmix64(state);
        bg.seed = splitmix64(state);
        emit(a.common, out, "background" + ext_of(a.common), render(simulate_counts(bg)),
             manifest);
    }
}

// ---- fit ----

struct FitArgs {
    Common common;
    std::string counts;
    std::string background;
    std::optional<int> harmonic;
    std::string series{kDefaultSeries};
    double rep_rate = kDefaultRepRate;
    std::optional<double> fix_theta;
};

json fit_json(const std::string &series, const FringeFit &f) {
    return {{"series", series},
            {"harmonic", f.harmonic},
            {"n0", f.n0},
            {"vis", f.vis},
            {"theta", f.theta},
            {"bg", f.bg},
            {"sigma_n0", f.sigma_n0},
            {"sigma_vis", f.sigma_vis},
            {"sigma_theta", f.sigma_theta},
            {"residual_rms", f.residual_rms},
            {"chi2", f.chi2},
            {"dof", f.dof},
            {"iterations", f.iterations},
            {"vis_out_of_range", f.vis_out_of_range},
            {"degenerate", f.degenerate}};
}

void cmd_fit(const FitArgs &a, std::ostream &out) {
    const CountDataset signal = load_counts(a.counts);
    std::optional<CorrectedDataset> corrected;
    if (!a.background.empty()) {
        corrected = subtract_background(signal, load_counts(a.background));
    }

    json fits = json::array();
    std::ostringstream csv;
    csv << "series,harmonic,n0,vis,theta,bg,sigma_n0,sigma_vis,sigma_theta,residual_rms,chi2,dof,"
           "degenerate,vis_out_of_range\n";
    for (const auto &name : split_list(a.series)) {
        std::vector<FringePoint> points;
        int harmonic = 4;
        if (name == kAccidentalSeries) {
            const auto acc = corrected ? derive_accidental_dataset(*corrected, a.rep_rate)
                                       : derive_accidental_dataset(signal, a.rep_rate);
            points = accidental_series(acc);
        } else {
            const auto channel = channel_from_name(name);
            if (!channel) {
                throw ValidationError("fit: unknown series '" + name + "'");
            }
            points = corrected ? channel_series(*corrected, *channel)
                               : channel_series(signal, *channel);
            harmonic = natural_harmonic(*channel);
        }
        if (a.harmonic) {
            harmonic = *a.harmonic;
        }
        if (harmonic == 0) {
            throw ValidationError("fit: series '" + name + "' has no fringe; pass --harmonic");
        }
        FitOptions opts;
        opts.harmonic = harmonic;
        opts.fix_theta = a.fix_theta;
        const FringeFit f = fit_fringe(points, opts);
        fits.push_back(fit_json(name, f));
        csv << name << ',' << f.harmonic << ',' << format_double(f.n0) << ','
            << format_double(f.vis) << ',' << format_double(f.theta) << ','
            << format_double(f.bg) << ',' << format_double(f.sigma_n0) << ','
            << format_double(f.sigma_vis) << ',' << format_double(f.sigma_theta) << ','
            << format_double(f.residual_rms) << ',' << format_double(f.chi2) << ',' << f.dof
            << ',' << (f.degenerate ? 1 : 0) << ',' << (f.vis_out_of_range ? 1 : 0) << '\n';
    }
    const json config = {{"counts", a.counts},
                         {"background", a.background},
                         {"harmonic", a.harmonic ? json(*a.harmonic) : json(nullptr)},
                         {"series", a.series},
                         {"rep_rate", a.rep_rate},
                         {"fix_theta", a.fix_theta ? json(*a.fix_theta) : json(nullptr)}};
    const RunManifest manifest = make_manifest("fit", config, a.common.seed.value_or(0));
    const std::string content =
        a.common.format == "json"
            ? json{{"schema_version", kSchemaVersion}, {"fits", fits}}.dump(2) + "\n"
            : csv.str();
    emit(a.common, out, "fit" + ext_of(a.common), content, manifest);
}

// ---- analyze ----

struct AnalyzeArgs {
    Common common;
    std::optional<double> v4;
    double sigma_v4 = 0.0;
    std::optional<double> v2;
    double sigma_v2 = 0.0;
    std::string rates;
    std::optional<double> r4;
    double sigma_r4 = 0.0;
    std::optional<double> r4_counts;
    std::optional<double> r4_duration;
    double rep_rate = kDefaultRepRate;
    std::string counts;
    std::string background;
};

struct Inputs {
    std::optional<Estimate> v4;
    std::optional<Estimate> v2;
    std::optional<Estimate> r4;
    std::optional<Estimate> accidental;
};

// Visibility route from a fringe dataset: V4 from the four-fold fit, v2 the
// mean over the six pair channels. The rate relation holds for single-crystal
// runs only, so a fringe dataset does not feed the rate route.
Inputs inputs_from_counts(const AnalyzeArgs &a) {
    const CountDataset signal = load_counts(a.counts);
    const CorrectedDataset ds = a.background.empty()
                                    ? to_corrected(signal)
                                    : subtract_background(signal, load_counts(a.background));
    Inputs in;
    FitOptions opts;
    opts.harmonic = 4;
    const FringeFit f4 = fit_fringe(channel_series(ds, Channel::kFourfold), opts);
    in.v4 = Estimate{f4.vis, f4.sigma_vis};

    opts.harmonic = 2;
    double sum = 0.0;
    double var = 0.0;
    for (std::size_t c = 0; c < kNumPairChannels; ++c) {
        const FringeFit f = fit_fringe(channel_series(ds, static_cast<Channel>(c)), opts);
        sum += f.vis;
        var += f.sigma_vis * f.sigma_vis;
    }
    const auto n = static_cast<double>(kNumPairChannels);
    in.v2 = Estimate{sum / n, std::sqrt(var) / n};
    return in;
}

void cmd_analyze(const AnalyzeArgs &a, std::ostream &out) {
    Inputs in;
    if (!a.counts.empty()) {
        if (a.v4 || a.v2) {
            throw ValidationError("analyze: give either --counts or --v4/--v2");
        }
        in = inputs_from_counts(a);
    } else if (a.v4 || a.v2) {
        if (!a.v4 || !a.v2) {
            throw ValidationError("analyze: --v4 and --v2 go together");
        }
        in.v4 = Estimate{*a.v4, a.sigma_v4};
        in.v2 = Estimate{*a.v2, a.sigma_v2};
    }
    if (!a.rates.empty()) {
        const auto parts = split_list(a.rates);
        if (parts.size() != kNumPairChannels) {
            throw ValidationError(
                "analyze: --rates needs six values R_AB,R_CD,R_AC,R_BD,R_AD,R_CB");
        }
        std::array<double, kNumPairChannels> r{};
        for (std::size_t i = 0; i < parts.size(); ++i) {
            try {
                std::size_t used = 0;
                r[i] = std::stod(parts[i], &used);
                if (used != parts[i].size()) {
                    throw std::invalid_argument(parts[i]);
                }
            } catch (const std::exception &) {
                throw ValidationError("analyze: bad rate '" + parts[i] + "'");
            }
        }
        PairRates rates{r[0], r[1], r[2], r[3], r[4], r[5], a.rep_rate};
        rates.validate();
        const double acc = accidental_fourfold(rates);
        in.accidental = Estimate{acc, 0.0};
        if (a.r4_counts) {
            if (!a.r4_duration || !(*a.r4_duration > 0.0)) {
                throw ValidationError("analyze: --r4-counts needs a positive --r4-duration");
            }
            in.r4 = Estimate{*a.r4_counts / *a.r4_duration,
                             std::sqrt(*a.r4_counts) / *a.r4_duration};
        } else if (a.r4) {
            in.r4 = Estimate{*a.r4, a.sigma_r4};
        } else {
            throw ValidationError("analyze: --rates needs --r4 or --r4-counts");
        }
    }
    if (!in.v4 && !in.accidental) {
        throw ValidationError("analyze: give --counts, --v4/--v2, or --rates with --r4");
    }

    json result = {{"schema_version", kSchemaVersion}};
    std::optional<Estimate> ea_vis;
    std::optional<Estimate> ea_rates;
    if (in.v4) {
        ea_vis = ea_from_visibility(*in.v4, *in.v2);
        result["visibility_route"] = {{"v4", in.v4->value},     {"sigma_v4", in.v4->sigma},
                                      {"v2", in.v2->value},     {"sigma_v2", in.v2->sigma},
                                      {"ea", ea_vis->value},    {"sigma_ea", ea_vis->sigma}};
    } else {
        result["visibility_route"] = nullptr;
    }
    if (in.accidental) {
        ea_rates = ea_from_rates(*in.r4, *in.accidental);
        result["rate_route"] = {{"r4_measured", in.r4->value},
                                {"sigma_r4_measured", in.r4->sigma},
                                {"r4_accidental", in.accidental->value},
                                {"sigma_r4_accidental", in.accidental->sigma},
                                {"ea", ea_rates->value},
                                {"sigma_ea", ea_rates->sigma}};
    } else {
        result["rate_route"] = nullptr;
    }
    if (ea_vis && ea_rates) {
        result["consistent"] = std::abs(ea_vis->value - ea_rates->value) <=
                               ea_vis->sigma + ea_rates->sigma;
    } else {
        result["consistent"] = nullptr;
    }

    std::string content;
    if (a.common.format == "json") {
        content = result.dump(2) + "\n";
    } else {
        std::ostringstream csv;
        csv << "route,ea,sigma_ea\n";
        if (ea_vis) {
            csv << "visibility," << format_double(ea_vis->value) << ','
                << format_double(ea_vis->sigma) << '\n';
        }
        if (ea_rates) {
            csv << "rates," << format_double(ea_rates->value) << ','
                << format_double(ea_rates->sigma) << '\n';
        }
        content = csv.str();
    }
    const json config = {
        {"counts", a.counts},
        {"background", a.background},
        {"v4", a.v4 ? json(*a.v4) : json(nullptr)},
        {"sigma_v4", a.sigma_v4},
        {"v2", a.v2 ? json(*a.v2) : json(nullptr)},
        {"sigma_v2", a.sigma_v2},
        {"rates", a.rates},
        {"r4", a.r4 ? json(*a.r4) : json(nullptr)},
        {"sigma_r4", a.sigma_r4},
        {"r4_counts", a.r4_counts ? json(*a.r4_counts) : json(nullptr)},
        {"r4_duration", a.r4_duration ? json(*a.r4_duration) : json(nullptr)},
        {"rep_rate", a.rep_rate}};
    emit(a.common, out, "analyze" + ext_of(a.common), content,
         make_manifest("analyze", config, a.common.seed.value_or(0)));
}

// ---- synth ----

struct SynthArgs {
    Common common;
    std::string state;
    std::string preset;
    std::optional<int> random_n;
};

int parse_int(const std::string &text, const std::string &what) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(text, &used);
        if (used == text.size()) {
            return v;
        }
    } catch (const std::exception &) {
    }
    throw ValidationError(what + ": bad integer '" + text + "'");
}

// noon4 | noon:N[:sign] | pdc4 | pdc:PAIRS | basis:N:K
StateVector preset_state(const std::string &name) {
    std::vector<std::string> parts;
    std::stringstream ss(name);
    std::string item;
    while (std::getline(ss, item, ':')) {
        parts.push_back(item);
    }
    const std::string what = "synth: preset '" + name + "'";
    if (name == "noon4") {
        return make_noon(4, -1);
    }
    if (name == "pdc4") {
        return make_pdc4();
    }
    if (parts.size() >= 2 && parts.size() <= 3 && parts[0] == "noon") {
        const int sign = parts.size() == 3 ? parse_int(parts[2], what) : -1;
        return make_noon(parse_int(parts[1], what), sign);
    }
    if (parts.size() == 2 && parts[0] == "pdc") {
        return make_pdc_n(parse_int(parts[1], what));
    }
    if (parts.size() == 3 && parts[0] == "basis") {
        return make_basis(parse_int(parts[1], what), parse_int(parts[2], what));
    }
    throw ValidationError(what + " is not one of noon4, noon:N[:sign], pdc4, pdc:PAIRS, "
                          "basis:N:K");
}

// {"amplitudes": [a0, a1, ...]} with each entry a number or [re, im];
// an optional "n" must equal the list length minus one.
StateVector state_from_json(const json &j) {
    if (!j.is_object() || !j.contains("amplitudes") || !j.at("amplitudes").is_array()) {
        throw ValidationError("$.amplitudes: expected an array");
    }
    const json &list = j.at("amplitudes");
    std::vector<Complex> amps;
    for (std::size_t k = 0; k < list.size(); ++k) {
        const json &v = list[k];
        const std::string at = "$.amplitudes[" + std::to_string(k) + "]";
        if (v.is_number()) {
            amps.emplace_back(v.get<double>(), 0.0);
        } else if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
            amps.emplace_back(v[0].get<double>(), v[1].get<double>());
        } else {
            throw ValidationError(at + ": expected a number or [re, im]");
        }
    }
    if (j.contains("n")) {
        const json &n = j.at("n");
        if (!n.is_number_unsigned() || n.get<std::size_t>() + 1 != amps.size()) {
            throw ValidationError("$.n: must equal the number of amplitudes minus one");
        }
    }
    if (amps.empty()) {
        throw ValidationError("$.amplitudes: empty");
    }
    try {
        return StateVector(std::move(amps));
    } catch (const ValidationError &e) {
        throw ValidationError(std::string("$.amplitudes: ") + e.what());
    }
}

void cmd_synth(const SynthArgs &a, std::ostream &out) {
    const int chosen = (a.state.empty() ? 0 : 1) + (a.preset.empty() ? 0 : 1) +
                       (a.random_n ? 1 : 0);
    if (chosen != 1) {
        throw ValidationError("synth: give exactly one of --state, --preset, --random");
    }
    json source;
    std::optional<StateVector> target;
    const std::uint64_t seed = a.common.seed.value_or(0);
    if (!a.state.empty()) {
        target = state_from_json(load_json_file(a.state));
        source = {{"state", a.state}};
    } else if (!a.preset.empty()) {
        target = preset_state(a.preset);
        source = {{"preset", a.preset}};
    } else {
        if (*a.random_n < 1) {
            throw ValidationError("synth: --random needs N >= 1");
        }
        Rng rng = make_stream(seed, 0);
        std::normal_distribution<double> gauss;
        std::vector<Complex> amps;
        for (int k = 0; k <= *a.random_n; ++k) {
            const double re = gauss(rng);
            amps.emplace_back(re, gauss(rng));
        }
        target = StateVector(std::move(amps));
        source = {{"random", *a.random_n}};
    }
    const SynthesisResult r = synthesize_network(*target);

    json amplitudes = json::array();
    for (const auto &amp : target->amps()) {
        amplitudes.push_back(complex_json(amp));
    }
    json forms = json::array();
    std::ostringstream csv;
    csv << "detector,alpha_re,alpha_im,beta_re,beta_im,root_re,root_im\n";
    for (std::size_t j = 0; j < r.network.size(); ++j) {
        const LinearForm &f = r.network[j];
        const auto &root = r.roots[j];
        forms.push_back({{"alpha", complex_json(f.alpha())},
                         {"beta", complex_json(f.beta())},
                         {"root", root ? complex_json(*root) : json(nullptr)}});
        csv << j << ',' << format_double(f.alpha().real()) << ','
            << format_double(f.alpha().imag()) << ',' << format_double(f.beta().real()) << ','
            << format_double(f.beta().imag()) << ','
            << (root ? format_double(root->real()) : "inf") << ','
            << (root ? format_double(root->imag()) : "inf") << '\n';
    }
    const json result = {
        {"schema_version", kSchemaVersion},
        {"n", target->n_total()},
        {"amplitudes", amplitudes},
        {"kappa", complex_json(r.kappa)},
        {"forms", forms},
        {"clustered_roots", r.clustered_roots},
        {"isometry",
         {{"alpha_norm", r.isometry.alpha_norm},
          {"beta_norm", r.isometry.beta_norm},
          {"cross", complex_json(r.isometry.cross)},
          {"isometric", r.isometry.isometric},
          {"isometric_up_to_scale", r.isometry.isometric_up_to_scale}}}};
    const std::string content = a.common.format == "json" ? result.dump(2) + "\n" : csv.str();
    emit(a.common, out, "synth" + ext_of(a.common), content,
         make_manifest("synth", source, seed));
}

// ---- metrology ----

struct MetrologyArgs {
    Common common;
    std::string state = "pdc";
    int n_min = 2;
    int n_max = 64;
    std::string spacing = "pow2";
};

void cmd_metrology(const MetrologyArgs &a, std::ostream &out) {
    const StateFamily family = family_from_name(a.state);
    if (a.n_min < 1 || a.n_max < a.n_min) {
        throw ValidationError("metrology: empty range [" + std::to_string(a.n_min) + ", " +
                              std::to_string(a.n_max) + "]");
    }
    std::vector<int> ns;
    if (a.spacing == "linear") {
        for (int n = a.n_min; n <= a.n_max; ++n) {
            ns.push_back(n);
        }
    } else {
        for (long long n = a.n_min; n <= a.n_max; n *= 2) {
            ns.push_back(static_cast<int>(n));
        }
    }
    const MetrologySweep sweep = metrology_sweep(family, ns);

    std::string content;
    if (a.common.format == "json") {
        json rows = json::array();
        for (const auto &r : sweep.rows) {
            rows.push_back({{"n", r.n},
                            {"n_photons", r.plan.n_photons},
                            {"p_success", r.plan.p_success},
                            {"phi_orth", r.plan.phi_orth},
                            {"dphi", r.plan.dphi},
                            {"phi_const_photons", r.phi_const_photons},
                            {"phi_const_family", r.phi_const_family}});
        }
        json result = {{"schema_version", kSchemaVersion},
                       {"state", a.state},
                       {"rows", rows},
                       {"exponent", std::isfinite(sweep.exponent) ? json(sweep.exponent)
                                                                  : json(nullptr)}};
        content = result.dump(2) + "\n";
    } else {
        std::ostringstream csv;
        csv << "n,n_photons,p_success,phi_orth,dphi,phi_const_photons,phi_const_family\n";
        for (const auto &r : sweep.rows) {
            csv << r.n << ',' << r.plan.n_photons << ',' << format_double(r.plan.p_success)
                << ',' << format_double(r.plan.phi_orth) << ',' << format_double(r.plan.dphi)
                << ',' << format_double(r.phi_const_photons) << ','
                << format_double(r.phi_const_family) << '\n';
        }
        csv << "# scaling_exponent," << format_double(sweep.exponent) << '\n';
        content = csv.str();
    }
    const json config = {
        {"state", a.state}, {"n_min", a.n_min}, {"n_max", a.n_max}, {"spacing", a.spacing}};
    emit(a.common, out, "metrology" + ext_of(a.common), content,
         make_manifest("metrology", config, a.common.seed.value_or(0)));
}

}  // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"noonlab: NOON-state projection, fringe simulation and analysis"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto *simulate = app.add_subcommand("simulate", "Simulate a counts dataset from a JSON config");
    simulate->add_option("--config", sim.config, "Experiment config (JSON)")->required();
    add_common(simulate, sim.common, "csv");

    FitArgs fit;
    auto *fitc = app.add_subcommand("fit", "Fit fringes to a counts file");
    fitc->add_option("--counts", fit.counts, "Counts file (CSV or .json)")->required();
    fitc->add_option("--background", fit.background, "Background counts to subtract");
    fitc->add_option("--harmonic", fit.harmonic, "Fringe harmonic for every series")
        ->check(CLI::PositiveNumber);
    fitc->add_option("--series", fit.series, "Comma-separated series")
        ->default_str(std::string(kDefaultSeries));
    fitc->add_option("--rep-rate", fit.rep_rate, "Pulse repetition rate (Hz)")
        ->check(CLI::PositiveNumber);
    fitc->add_option("--fix-theta", fit.fix_theta, "Hold the phase offset (rad)");
    add_common(fitc, fit.common, "json");

    AnalyzeArgs an;
    auto *analyze = app.add_subcommand("analyze", "Overlap ratio E/A by both routes");
    analyze->add_option("--v4", an.v4, "Four-photon visibility");
    analyze->add_option("--sigma-v4", an.sigma_v4, "Its uncertainty");
    analyze->add_option("--v2", an.v2, "Two-photon visibility");
    analyze->add_option("--sigma-v2", an.sigma_v2, "Its uncertainty");
    analyze->add_option("--rates", an.rates, "Single-crystal pair rates R_AB,R_CD,R_AC,R_BD,R_AD,R_CB (1/s)");
    analyze->add_option("--r4", an.r4, "Measured four-fold rate (1/s)");
    analyze->add_option("--sigma-r4", an.sigma_r4, "Its uncertainty");
    analyze->add_option("--r4-counts", an.r4_counts, "Measured four-fold counts");
    analyze->add_option("--r4-duration", an.r4_duration, "Their counting time (s)");
    analyze->add_option("--rep-rate", an.rep_rate, "Pulse repetition rate (Hz)")
        ->check(CLI::PositiveNumber);
    analyze->add_option("--counts", an.counts, "Fringe counts file for the visibility route");
    analyze->add_option("--background", an.background, "Background counts to subtract");
    add_common(analyze, an.common, "json");

    SynthArgs syn;
    auto *synth = app.add_subcommand("synth", "Detector network projecting onto a state");
    synth->add_option("--state", syn.state, "State JSON {\"amplitudes\": [...]}");
    synth->add_option("--preset", syn.preset, "noon4, noon:N[:sign], pdc4, pdc:PAIRS, basis:N:K");
    synth->add_option("--random", syn.random_n, "Random state with N photons (uses --seed)");
    add_common(synth, syn.common, "json");

    MetrologyArgs met;
    auto *metrology = app.add_subcommand("metrology", "Phase-uncertainty scaling sweep");
    metrology->add_option("--state", met.state, "State family")
        ->check(CLI::IsMember({"pdc", "noon"}));
    metrology->add_option("--n-min", met.n_min, "Smallest family size");
    metrology->add_option("--n-max", met.n_max, "Largest family size");
    metrology->add_option("--spacing", met.spacing, "linear or pow2")
        ->check(CLI::IsMember({"linear", "pow2"}));
    add_common(metrology, met.common, "csv");

    std::vector<const char *> argv;
    for (const auto &s : args) {
        argv.push_back(s.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (simulate->parsed()) {
            cmd_simulate(sim, out);
        } else if (fitc->parsed()) {
            cmd_fit(fit, out);
        } else if (analyze->parsed()) {
            cmd_analyze(an, out);
        } else if (synth->parsed()) {
            cmd_synth(syn, out);
        } else if (metrology->parsed()) {
            cmd_metrology(met, out);
        }
    } catch (const ValidationError &e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const NumericalError &e) {
        err << "numerical error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::filesystem::filesystem_error &e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return kExitOk;
}

}  // namespace noonlab
