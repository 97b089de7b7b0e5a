#include "qsl/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace qsl {

namespace {

constexpr double kRadToDeg = 57.295779513082320877;

}  // namespace

json matrix_to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.cols(); ++j)
            row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexMatrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix json: expected row array");
    const std::size_t rows = j.size();
    const std::size_t cols = j.front().is_array() ? j.front().size() : 0;
    if (cols == 0) throw std::invalid_argument("matrix json: empty rows");
    ComplexMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        const json& row = j.at(i);
        if (!row.is_array() || row.size() != cols)
            throw std::invalid_argument("matrix json: ragged rows");
        for (std::size_t c = 0; c < cols; ++c) {
            const json& e = row.at(c);
            if (!e.is_array() || e.size() != 2)
                throw std::invalid_argument("matrix json: entries must be [re, im]");
            m(i, c) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
        }
    }
    return m;
}

json channel_to_json(const KrausChannel& channel) {
    json ops = json::array();
    for (const auto& f : channel.kraus()) ops.push_back(matrix_to_json(f));
    return json{{"dim", channel.dim()}, {"kraus", std::move(ops)}, {"label", channel.label()}};
}

KrausChannel channel_from_json(const json& j) {
    if (!j.contains("dim") || !j.contains("kraus"))
        throw std::invalid_argument("channel json: missing dim or kraus");
    const std::size_t n = j.at("dim").get<std::size_t>();
    std::vector<ComplexMatrix> ops;
    for (const auto& op : j.at("kraus")) {
        ComplexMatrix f = matrix_from_json(op);
        if (f.rows() != n || f.cols() != n)
            throw std::invalid_argument("channel json: operator dimension disagrees with dim");
        ops.push_back(std::move(f));
    }
    std::string label = j.value("label", std::string{});
    return KrausChannel(std::move(ops), std::move(label));
}

json pure_state_to_json(const PureState& psi, std::size_t ancilla_dim) {
    json amp = json::array();
    for (const auto& a : psi.amplitudes()) amp.push_back(json::array({a.real(), a.imag()}));
    return json{{"dim", psi.dim()}, {"ancilla_dim", ancilla_dim}, {"amplitudes", std::move(amp)}};
}

json sdp_solution_to_json(const SdpSolution& sol) {
    json res = json::object();
    for (const auto& [k, v] : sol.residuals) res[k] = v;
    json out{{"primal_value", sol.primal_value},
             {"dual_value", sol.dual_value},
             {"gap", sol.gap},
             {"iterations", sol.iterations},
             {"converged", sol.converged},
             {"message", sol.message},
             {"residuals", std::move(res)},
             {"W", matrix_to_json(sol.w_opt)}};
    if (sol.rho_opt.rows()) out["rho"] = matrix_to_json(sol.rho_opt);
    if (sol.p_opt.rows()) out["P"] = matrix_to_json(sol.p_opt);
    if (sol.q_opt.rows()) out["Q"] = matrix_to_json(sol.q_opt);
    return out;
}

json qsl_result_to_json(const QslResult& r, bool degrees) {
    json out{{"cos_d", r.cos_d},
             {"d", degrees ? r.d * kRadToDeg : r.d},
             {"angle_unit", degrees ? "degrees" : "radians"},
             {"method", method_name(r.method)},
             {"certified", r.converged}};
    if (r.gap) out["gap"] = *r.gap;
    if (r.saturation_error) out["saturation_error"] = *r.saturation_error;
    if (r.w_opt) out["W"] = matrix_to_json(r.w_opt->matrix());
    if (r.optimal_input)
        out["optimal_input"] = pure_state_to_json(r.optimal_input->state,
                                                  r.optimal_input->ancilla_dim);
    if (r.sdp) out["sdp"] = sdp_solution_to_json(*r.sdp);
    return out;
}

json oracle_report_to_json(const OracleReport& rep) {
    json out{{"samples", rep.samples},
             {"seed", rep.seed},
             {"best_value", rep.best_value},
             {"violation", rep.violation}};
    if (rep.witness_state)
        out["witness_state"] = pure_state_to_json(*rep.witness_state, 1);
    if (rep.witness_w) out["witness_W"] = matrix_to_json(*rep.witness_w);
    return out;
}

KrausChannel load_channel_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open channel file: " + path);
    json j;
    in >> j;
    return channel_from_json(j);
}

void save_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open output file: " + path);
    out << j.dump(2) << "\n";
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void CsvWriter::header(const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) os_ << ',';
        os_ << names[i];
    }
    os_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) os_ << ',';
        os_ << format_double(values[i]);
    }
    os_ << '\n';
}

}  // namespace qsl
