// Command-line front end: channel distances, sweep curves, the four figure
// presets, minimum-time inversion, and brute-force verification.
//
// Exit codes: 0 success, 2 input/validation error, 3 numerical
// non-convergence (a partial result is still emitted).
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qsl/io.hpp"
#include "qsl/oracle.hpp"
#include "qsl/qsl.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;

struct CommonOpts {
    double tol = 1e-8;
    int max_iter = 200;
    bool degrees = false;
    std::string out;
};

double maybe_deg(double radians, bool degrees) {
    return degrees ? radians * 180.0 / kPi : radians;
}

void emit_json(const qsl::json& j, const std::string& out) {
    if (out.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        qsl::save_json_file(out, j);
    }
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::binary);  // LF line endings on all platforms
    if (!os) throw std::invalid_argument("cannot open output file: " + path);
    return os;
}

// Maximum of f over [0, t_max]: coarse grid plus golden-section refinement
// around the best grid point.
double maximize_over_t(const std::function<double(double)>& f, double t_max,
                       std::size_t grid_steps) {
    double best_t = 0.0, best = f(0.0);
    for (std::size_t i = 1; i <= grid_steps; ++i) {
        const double t = t_max * static_cast<double>(i) / static_cast<double>(grid_steps);
        const double v = f(t);
        if (v > best) {
            best = v;
            best_t = t;
        }
    }
    const double h = t_max / static_cast<double>(grid_steps);
    double lo = std::max(0.0, best_t - h), hi = std::min(t_max, best_t + h);
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 60 && hi - lo > 1e-10 * (1.0 + t_max); ++it) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - gr * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + gr * (hi - lo);
            fd = f(d);
        }
    }
    return std::max(best, std::max(fc, fd));
}

qsl::QslResult distance_to_identity(const qsl::KrausChannel& channel, const qsl::SdpOptions& opt) {
    const qsl::KrausChannel id = qsl::pad_identity_kraus(channel.dim(), 1);
    return qsl::channel_distance(id, channel, opt);
}

int cmd_distance(const std::string& a_path, const std::string& b_path, const CommonOpts& common,
                 bool verify, std::size_t samples, std::size_t w_samples, std::uint64_t seed) {
    const qsl::KrausChannel a = qsl::load_channel_file(a_path);
    const qsl::KrausChannel b = qsl::load_channel_file(b_path);
    if (a.dim() != b.dim()) throw std::invalid_argument("distance: channel dimensions differ");

    qsl::SdpOptions opt{common.tol, common.max_iter};
    const qsl::QslResult r = qsl::channel_distance(a, b, opt);
    qsl::json out = qsl::qsl_result_to_json(r, common.degrees);

    if (verify && r.converged) {
        const std::size_t d = std::max(a.kraus_count(), b.kraus_count());
        const qsl::KrausChannel pa = qsl::pad_with_zeros(a, d);
        const qsl::KrausChannel pb = qsl::pad_with_zeros(b, d);
        const auto wrep = qsl::random_w_max(pa, pb, w_samples, seed, r.cos_d);
        out["verify"]["w_max"] = qsl::oracle_report_to_json(wrep);
        out["verify"]["w_max_pass"] = wrep.violation <= 1e-6;
        // Distances from the identity use the cheap pure-output oracle;
        // general pairs go through the mixed-output variant.
        bool id_case = false;
        {
            const auto& ka = a.kraus();
            id_case = ka.size() == 1 &&
                      qsl::max_abs_diff(ka.front(), qsl::ComplexMatrix::identity(a.dim())) < 1e-12;
        }
        const auto frep =
            id_case ? qsl::random_state_min_fidelity(b, b.dim(), samples, seed, r.cos_d)
                    : qsl::random_state_min_fidelity_pair(a, b, a.dim(), samples, seed, r.cos_d);
        out["verify"]["min_fidelity"] = qsl::oracle_report_to_json(frep);
        out["verify"]["min_fidelity_pass"] = frep.violation <= 1e-6;
    }

    emit_json(out, common.out);
    return r.converged ? 0 : 3;
}

int cmd_curve(const std::string& model_name, double gamma, double omega, double t_max,
              std::size_t steps, bool with_sdp, const CommonOpts& common) {
    if (steps < 2) throw std::invalid_argument("curve: need at least 2 steps");
    const qsl::DecayProfile profile = qsl::DecayProfile::constant(gamma);

    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!common.out.empty()) {
        file = open_out(common.out);
        os = &file;
    }
    qsl::CsvWriter csv(*os);
    std::vector<std::string> names{"t", "cos_d", "d"};
    if (with_sdp) {
        names.push_back("cos_d_sdp");
        names.push_back("d_sdp");
    }
    csv.header(names);

    std::vector<std::vector<double>> rows(steps);
#pragma omp parallel for schedule(dynamic)
    for (long long ii = 0; ii < static_cast<long long>(steps); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        const double t = t_max * static_cast<double>(i) / static_cast<double>(steps - 1);
        qsl::QslResult r;
        if (model_name == "ad")
            r = qsl::closed_form_amplitude_damping(profile, t);
        else
            r = qsl::closed_form_dephasing(profile, omega, t);
        std::vector<double> row{t, r.cos_d, maybe_deg(r.d, common.degrees)};
        if (with_sdp) {
            qsl::KrausChannel ch = model_name == "ad" ? qsl::amplitude_damping(profile, t)
                                                      : qsl::dephasing(profile, omega, t);
            const qsl::QslResult s =
                distance_to_identity(ch, qsl::SdpOptions{common.tol, common.max_iter});
            row.push_back(s.cos_d);
            row.push_back(maybe_deg(s.d, common.degrees));
        }
        rows[i] = std::move(row);
    }
    for (const auto& row : rows) csv.row(row);
    return 0;
}

int cmd_figure(int index, double gamma, double omega, std::size_t n_copies, double t_max,
               std::size_t steps, bool with_sdp, bool force_exact, double ratio_min,
               double ratio_max, std::size_t ratio_steps, std::size_t t_grid,
               const CommonOpts& common) {
    if (steps < 2 || t_grid < 2 || ratio_steps < 1)
        throw std::invalid_argument("figure: need steps >= 2, t-grid >= 2, ratio-steps >= 1");
    if (index != 2 && t_max <= 0.0) throw std::invalid_argument("figure: t-max must be positive");
    const qsl::SdpOptions opt{common.tol, common.max_iter};

    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!common.out.empty()) {
        file = open_out(common.out);
        os = &file;
    }

    if (index == 1) {
        const qsl::DecayProfile profile = qsl::DecayProfile::constant(gamma);
        qsl::CsvWriter csv(*os);
        std::vector<std::string> names{"t", "cos_d", "d"};
        if (with_sdp) {
            names.push_back("cos_d_sdp");
            names.push_back("d_sdp");
        }
        csv.header(names);
        std::vector<std::vector<double>> rows(steps);
#pragma omp parallel for schedule(dynamic)
        for (long long ii = 0; ii < static_cast<long long>(steps); ++ii) {
            const std::size_t i = static_cast<std::size_t>(ii);
            const double t = t_max * static_cast<double>(i) / static_cast<double>(steps - 1);
            const qsl::QslResult r = qsl::closed_form_dephasing(profile, omega, t);
            std::vector<double> row{t, r.cos_d, maybe_deg(r.d, common.degrees)};
            if (with_sdp) {
                const qsl::QslResult s = distance_to_identity(qsl::dephasing(profile, omega, t), opt);
                row.push_back(s.cos_d);
                row.push_back(maybe_deg(s.d, common.degrees));
            }
            rows[i] = std::move(row);
        }
        for (const auto& row : rows) csv.row(row);
        return 0;
    }

    if (index == 2) {
        const bool exact_ok = n_copies <= 3 || force_exact;
        if (n_copies > 3 && force_exact)
            std::cerr << "warning: exact curve at N=" << n_copies
                      << " solves large SDPs; expect long runtimes\n";
        (*os) << "ratio,max_theta_sep,max_d_exact,max_alpha_upper,max_theta_ghz\n";
        for (std::size_t ri = 0; ri < ratio_steps; ++ri) {
            const double f = ratio_steps == 1 ? 0.0
                                              : static_cast<double>(ri) /
                                                    static_cast<double>(ratio_steps - 1);
            const double ratio = ratio_min * std::pow(ratio_max / ratio_min, f);
            const double om = ratio * gamma;
            const double window =
                t_max > 0.0 ? t_max : 20.0 * std::max(1.0 / gamma, 1.0 / std::max(om, 1e-12));
            const qsl::DecayProfile profile = qsl::DecayProfile::constant(gamma);

            const double max_sep = maximize_over_t(
                [&](double t) { return qsl::separable_angle(profile, om, t, n_copies); }, window,
                t_grid);
            const double max_alpha = maximize_over_t(
                [&](double t) {
                    const auto a = qsl::alpha_bound(qsl::dephasing(profile, om, t));
                    return a ? std::acos(std::min(1.0, std::pow(*a, (double)n_copies))) : kPi / 2.0;
                },
                window, t_grid);
            const double max_ghz = maximize_over_t(
                [&](double t) { return qsl::ghz_angle(profile, om, t, n_copies); }, window, t_grid);

            std::string exact_cell;
            if (exact_ok) {
                const double max_exact = maximize_over_t(
                    [&](double t) {
                        const auto ch = qsl::tensor_power(qsl::dephasing(profile, om, t), n_copies);
                        return distance_to_identity(ch, opt).d;
                    },
                    window, t_grid);
                exact_cell = qsl::format_double(maybe_deg(max_exact, common.degrees));
            }
            (*os) << qsl::format_double(ratio) << ','
                  << qsl::format_double(maybe_deg(max_sep, common.degrees)) << ',' << exact_cell
                  << ',' << qsl::format_double(maybe_deg(max_alpha, common.degrees)) << ','
                  << qsl::format_double(maybe_deg(max_ghz, common.degrees)) << '\n';
        }
        return 0;
    }

    if (index == 3) {
        const qsl::DecayProfile profile = qsl::DecayProfile::constant(gamma);
        qsl::CsvWriter csv(*os);
        csv.header({"t", "theta_ghz", "theta_sep", "d_exact"});
        std::vector<std::vector<double>> rows(steps);
#pragma omp parallel for schedule(dynamic)
        for (long long ii = 0; ii < static_cast<long long>(steps); ++ii) {
            const std::size_t i = static_cast<std::size_t>(ii);
            const double t = t_max * static_cast<double>(i) / static_cast<double>(steps - 1);
            const double ghz = qsl::ghz_angle(profile, omega, t, n_copies);
            const double sep = qsl::separable_angle(profile, omega, t, n_copies);
            const auto ch = qsl::tensor_power(qsl::dephasing(profile, omega, t), n_copies);
            const double ex = distance_to_identity(ch, opt).d;
            rows[i] = {t, maybe_deg(ghz, common.degrees), maybe_deg(sep, common.degrees),
                       maybe_deg(ex, common.degrees)};
        }
        for (const auto& row : rows) csv.row(row);
        return 0;
    }

    if (index == 4) {
        const qsl::DecayProfile profile = qsl::DecayProfile::constant(gamma);
        qsl::CsvWriter csv(*os);
        csv.header({"t", "entanglement", "ent_first_qubit_cut", "ent_system_ancilla_cut"});
        std::vector<std::vector<double>> rows(steps);
#pragma omp parallel for schedule(dynamic)
        for (long long ii = 0; ii < static_cast<long long>(steps); ++ii) {
            const std::size_t i = static_cast<std::size_t>(ii);
            const double t = t_max * static_cast<double>(i) / static_cast<double>(steps - 1);
            const auto ch = qsl::tensor_power(qsl::dephasing(profile, omega, t), n_copies);
            const auto id = qsl::pad_identity_kraus(ch.dim(), ch.kraus_count());
            const auto sol = qsl::solve_primal(id.kraus(), ch.kraus(), opt);
            const auto rep = qsl::report_optimal_input(id, ch, sol);
            rows[i] = {t, rep.ent_reported, rep.ent_first_qubit, rep.ent_system_ancilla};
        }
        for (const auto& row : rows) csv.row(row);
        return 0;
    }

    throw std::invalid_argument("figure: index must be 1..4");
}

int cmd_mintime(const std::string& model_name, double gamma, double omega, double theta,
                double t_max, double step, const std::string& ham_path,
                const std::string& channel_path, const CommonOpts& common) {
    qsl::ChannelModel model;
    if (model_name == "ad") {
        model.value = qsl::AmplitudeDampingModel{qsl::DecayProfile::constant(gamma)};
    } else if (model_name == "dephasing") {
        model.value = qsl::DephasingModel{qsl::DecayProfile::constant(gamma), omega};
    } else if (model_name == "unitary") {
        if (ham_path.empty()) throw std::invalid_argument("mintime: --ham required for unitary");
        std::ifstream in(ham_path);
        if (!in) throw std::invalid_argument("cannot open hamiltonian file: " + ham_path);
        qsl::json j;
        in >> j;
        model.value = qsl::UnitaryModel{qsl::matrix_from_json(j)};
    } else if (model_name == "custom") {
        if (channel_path.empty())
            throw std::invalid_argument("mintime: --channel required for custom");
        const auto ch = qsl::load_channel_file(channel_path);
        model.value = qsl::CustomModel{ch.kraus(), ch.label()};
    } else {
        throw std::invalid_argument("mintime: unknown model " + model_name);
    }

    const qsl::MinTimeResult r =
        qsl::min_time(model, theta, qsl::MinTimeSearch{t_max, step},
                      qsl::SdpOptions{common.tol, common.max_iter});

    qsl::json out{{"theta", maybe_deg(theta, common.degrees)},
                  {"angle_unit", common.degrees ? "degrees" : "radians"}};
    switch (r.status) {
        case qsl::MinTimeStatus::Found:
            out["status"] = "found";
            out["time"] = *r.time;
            break;
        case qsl::MinTimeStatus::NotReached:
            out["status"] = "not-reached-by-t-max";
            out["time"] = nullptr;
            break;
        case qsl::MinTimeStatus::UnreachableAlphaCertificate:
            out["status"] = "unreachable";
            out["time"] = nullptr;
            out["alpha_certificate"] = *r.alpha_certificate;
            break;
        case qsl::MinTimeStatus::Unbounded:
            out["status"] = "unbounded";
            out["time"] = nullptr;
            break;
    }
    emit_json(out, common.out);
    return 0;
}

int cmd_verify(const std::string& channel_path, std::size_t samples, std::size_t w_samples,
               std::uint64_t seed, const CommonOpts& common) {
    const qsl::KrausChannel ch = qsl::load_channel_file(channel_path);
    const qsl::SdpOptions opt{common.tol, common.max_iter};
    const qsl::QslResult r = distance_to_identity(ch, opt);
    if (!r.converged) {
        emit_json(qsl::json{{"certified", false}, {"message", "solver did not converge"}},
                  common.out);
        return 3;
    }

    const auto frep = qsl::random_state_min_fidelity(ch, ch.dim(), samples, seed, r.cos_d);
    const qsl::KrausChannel id = qsl::pad_identity_kraus(ch.dim(), ch.kraus_count());
    std::vector<qsl::ComplexMatrix> injected;
    if (r.w_opt) injected.push_back(r.w_opt->matrix());
    const auto wrep = qsl::random_w_max(id, ch, w_samples, seed, r.cos_d, injected);

    const bool pass = frep.violation <= 1e-6 && wrep.violation <= 1e-6;
    qsl::json out{{"distance", qsl::qsl_result_to_json(r, common.degrees)},
                  {"min_fidelity", qsl::oracle_report_to_json(frep)},
                  {"w_max", qsl::oracle_report_to_json(wrep)},
                  {"pass", pass}};
    emit_json(out, common.out);
    return pass ? 0 : 1;
}

int cmd_channel(const std::string& model_name, double gamma, double omega, double t,
                const std::string& ham_path, const CommonOpts& common) {
    qsl::KrausChannel ch = [&]() {
        if (model_name == "ad")
            return qsl::amplitude_damping(qsl::DecayProfile::constant(gamma), t);
        if (model_name == "dephasing")
            return qsl::dephasing(qsl::DecayProfile::constant(gamma), omega, t);
        if (model_name == "unitary") {
            if (ham_path.empty())
                throw std::invalid_argument("channel: --ham required for unitary");
            std::ifstream in(ham_path);
            if (!in) throw std::invalid_argument("cannot open hamiltonian file: " + ham_path);
            qsl::json j;
            in >> j;
            return qsl::unitary_channel(qsl::HermitianMatrix(qsl::matrix_from_json(j)), t);
        }
        if (model_name == "identity2") return qsl::pad_identity_kraus(2, 1);
        throw std::invalid_argument("channel: unknown model " + model_name);
    }();
    emit_json(qsl::channel_to_json(ch), common.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact rotation-angle limits for noisy quantum channels"};
    app.require_subcommand(1);

    CommonOpts common;

    // distance
    std::string a_path, b_path;
    bool verify_flag = false;
    std::size_t samples = 10000, w_samples = 1000;
    std::uint64_t seed = 12345;
    auto* dist = app.add_subcommand("distance", "exact distance between two channel files");
    dist->add_option("--a", a_path, "first channel JSON")->required();
    dist->add_option("--b", b_path, "second channel JSON")->required();
    dist->add_option("--tol", common.tol, "solver tolerance");
    dist->add_option("--max-iter", common.max_iter, "iteration cap");
    dist->add_flag("--verify", verify_flag, "run the sampling oracles");
    dist->add_option("--samples", samples, "fidelity oracle samples");
    dist->add_option("--w-samples", w_samples, "contraction oracle samples");
    dist->add_option("--seed", seed, "oracle seed");
    dist->add_option("--out", common.out, "output JSON path (default stdout)");
    dist->add_flag("--degrees", common.degrees, "emit angles in degrees");

    // curve
    std::string model_name = "dephasing";
    double gamma = 0.1, omega = 1.0, t_max = 4.0 * kPi;
    std::size_t steps = 100;
    bool with_sdp = false;
    auto* curve = app.add_subcommand("curve", "d(I, K_t) sweep for a noise model");
    curve->add_option("--model", model_name, "ad | dephasing")->required();
    curve->add_option("--gamma", gamma, "decay/dephasing rate");
    curve->add_option("--omega", omega, "rotation frequency");
    curve->add_option("--t-max", t_max, "sweep end");
    curve->add_option("--steps", steps, "number of grid points");
    curve->add_flag("--sdp", with_sdp, "add SDP columns next to the closed form");
    curve->add_option("--tol", common.tol, "solver tolerance");
    curve->add_option("--out", common.out, "output CSV path (default stdout)");
    curve->add_flag("--degrees", common.degrees, "emit angles in degrees");

    // figure
    int fig_index = 1;
    std::size_t n_copies = 0;
    bool force_exact = false;
    double ratio_min = 0.1, ratio_max = 10.0;
    std::size_t ratio_steps = 13, t_grid = 160;
    double fig_tmax = -1.0;
    auto* fig = app.add_subcommand("figure", "reproduce one of the four figure datasets");
    fig->add_option("index", fig_index, "figure index 1..4")->required();
    fig->add_option("--gamma", gamma, "rate");
    fig->add_option("--omega", omega, "frequency");
    fig->add_option("--n", n_copies, "composite copies (figure defaults: 2, figure 2: 5)");
    fig->add_option("--t-max", fig_tmax, "time window");
    fig->add_option("--steps", steps, "rows for figures 1/3/4");
    fig->add_flag("--sdp", with_sdp, "figure 1: add SDP columns");
    fig->add_flag("--force-exact", force_exact, "figure 2: exact curve beyond N=3");
    fig->add_option("--ratio-min", ratio_min, "figure 2: smallest omega/gamma");
    fig->add_option("--ratio-max", ratio_max, "figure 2: largest omega/gamma");
    fig->add_option("--ratio-steps", ratio_steps, "figure 2: ratio grid size");
    fig->add_option("--t-grid", t_grid, "figure 2: inner maximization grid");
    fig->add_option("--tol", common.tol, "solver tolerance");
    fig->add_option("--out", common.out, "output CSV path (default stdout)");
    fig->add_flag("--degrees", common.degrees, "emit angles in degrees");

    // mintime
    double theta = 0.0, mt_tmax = 50.0, mt_step = 0.01;
    std::string ham_path, channel_path;
    auto* mt = app.add_subcommand("mintime", "minimum time to reach a rotation angle");
    mt->add_option("--model", model_name, "ad | dephasing | unitary | custom")->required();
    mt->add_option("--theta", theta, "target angle (radians)")->required();
    mt->add_option("--gamma", gamma, "rate");
    mt->add_option("--omega", omega, "frequency");
    mt->add_option("--t-max", mt_tmax, "search window");
    mt->add_option("--step", mt_step, "scan step");
    mt->add_option("--ham", ham_path, "hamiltonian JSON (unitary model)");
    mt->add_option("--channel", channel_path, "channel JSON (custom model)");
    mt->add_option("--tol", common.tol, "solver tolerance");
    mt->add_option("--out", common.out, "output JSON path (default stdout)");
    mt->add_flag("--degrees", common.degrees, "emit theta in degrees");

    // verify
    auto* ver = app.add_subcommand("verify", "pinch the SDP value between the two oracles");
    ver->add_option("--channel", channel_path, "channel JSON")->required();
    ver->add_option("--samples", samples, "fidelity oracle samples");
    ver->add_option("--w-samples", w_samples, "contraction oracle samples");
    ver->add_option("--seed", seed, "oracle seed");
    ver->add_option("--tol", common.tol, "solver tolerance");
    ver->add_option("--out", common.out, "output JSON path (default stdout)");

    // channel
    double ch_t = 0.0;
    auto* chc = app.add_subcommand("channel", "emit a model channel as JSON");
    chc->add_option("--model", model_name, "ad | dephasing | unitary | identity2")->required();
    chc->add_option("--gamma", gamma, "rate");
    chc->add_option("--omega", omega, "frequency");
    chc->add_option("--t", ch_t, "evaluation time");
    chc->add_option("--ham", ham_path, "hamiltonian JSON (unitary model)");
    chc->add_option("--out", common.out, "output JSON path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (dist->parsed())
            return cmd_distance(a_path, b_path, common, verify_flag, samples, w_samples, seed);
        if (curve->parsed()) {
            if (model_name != "ad" && model_name != "dephasing")
                throw std::invalid_argument("curve: model must be ad or dephasing");
            return cmd_curve(model_name, gamma, omega, t_max, steps, with_sdp, common);
        }
        if (fig->parsed()) {
            if (n_copies == 0) n_copies = (fig_index == 2) ? 5 : 2;
            const double tm = fig_tmax > 0.0 ? fig_tmax : (fig_index == 2 ? -1.0 : 4.0 * kPi);
            return cmd_figure(fig_index, gamma, omega, n_copies, tm, steps, with_sdp, force_exact,
                              ratio_min, ratio_max, ratio_steps, t_grid, common);
        }
        if (mt->parsed())
            return cmd_mintime(model_name, gamma, omega, theta, mt_tmax, mt_step, ham_path,
                               channel_path, common);
        if (ver->parsed()) return cmd_verify(channel_path, samples, w_samples, seed, common);
        if (chc->parsed()) return cmd_channel(model_name, gamma, omega, ch_t, ham_path, common);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
