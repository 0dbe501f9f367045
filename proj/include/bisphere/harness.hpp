#ifndef BISPHERE_HARNESS_HPP
#define BISPHERE_HARNESS_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "bisphere/asymptotic.hpp"
#include "bisphere/exact.hpp"

namespace bisphere::harness {

enum class Command {
    q_table,
    c_h,
    exact_profile,
    blowup_profile,
    compare,
    field_map,
    rate_study,
    invariants,
};

enum class OutputFormat { csv, json };

const char* command_name(Command c);
const char* format_name(OutputFormat f);

/// Everything a run depends on. Identical configs produce byte-identical
/// output files.
struct RunConfig {
    Command command = Command::invariants;
    double r1 = 3.0;
    double r2 = 2.0;
    std::vector<double> r2_list;          // q-table sweeps r2; empty -> {r2}
    std::vector<double> eps_list = {0.1};
    std::vector<double> field_b = {1.0};  // b_1..b_K
    double field_h0 = 0.0;
    double e0 = 1.0;
    double tol = 1e-8;
    long terms_cap = exact::default_term_cap;
    OutputFormat format = OutputFormat::csv;
    std::string out_path;                  // empty -> stdout
    int grid_nx = 41;
    int grid_ny = 81;
    std::vector<double> theta_list;        // units of pi; empty -> default profile grid
    int k_max = 6;
    int precision = 6;

    exact::AxialField field() const { return {field_h0, field_b}; }
    std::vector<double> thetas_or_default() const;
};

/// Column-labelled table with cells pre-formatted at the configured precision.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

struct InvariantResult {
    std::string name;
    double residual = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

Table q_table(const RunConfig& rc);
Table compare_table(const RunConfig& rc);
Table exact_profile_table(const RunConfig& rc);
Table blowup_profile_table(const RunConfig& rc);
Table field_map_table(const RunConfig& rc);
Table rate_study_table(const RunConfig& rc);
Table c_h_table(const RunConfig& rc);

std::vector<InvariantResult> run_invariants(const geometry::SphereConfig& cfg,
                                            const exact::AxialField& field);
Table invariants_table(const RunConfig& rc, bool& all_pass);

/// Serializes the table in the configured format with the full RunConfig and
/// library version embedded for provenance.
void write_output(const RunConfig& rc, const Table& table, std::ostream& os);

/// Dispatches rc, writing data to the output path (or `out` when no path is
/// set) and progress to `err`. Returns the process exit code: 0 success,
/// 1 invariant failure, 2 convergence failure, 3 usage error.
int run(const RunConfig& rc, std::ostream& out, std::ostream& err);

/// Deterministic "%.*g" float formatting used for every table cell.
std::string format_double(double v, int precision);

} // namespace bisphere::harness

#endif
