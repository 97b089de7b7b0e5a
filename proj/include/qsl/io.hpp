// JSON (de)serialization for channels, matrices and results, and the CSV
// writer used by the sweep commands. Complex numbers are nested [re, im]
// pairs; matrices are kraus[op][row][col] style nested arrays.
#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsl/channels.hpp"
#include "qsl/oracle.hpp"
#include "qsl/qsl.hpp"

namespace qsl {

using json = nlohmann::json;

json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const json& j);

// {"dim": n, "kraus": [...], "label": "..."}; validation re-runs on load.
json channel_to_json(const KrausChannel& channel);
KrausChannel channel_from_json(const json& j);

json pure_state_to_json(const PureState& psi, std::size_t ancilla_dim);

json sdp_solution_to_json(const SdpSolution& sol);
json qsl_result_to_json(const QslResult& r, bool degrees);
json oracle_report_to_json(const OracleReport& rep);

KrausChannel load_channel_file(const std::string& path);
void save_json_file(const std::string& path, const json& j);

// Comma-separated, 17-significant-digit floats, LF line endings.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}
    void header(const std::vector<std::string>& names);
    void row(const std::vector<double>& values);

private:
    std::ostream& os_;
};

std::string format_double(double v);  // %.17g

}  // namespace qsl
