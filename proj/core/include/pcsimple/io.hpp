#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "pcsimple/dataset.hpp"
#include "pcsimple/evaluation.hpp"
#include "pcsimple/model.hpp"
#include "pcsimple/oracle.hpp"
#include "pcsimple/pc_simple.hpp"

namespace pcsimple::io {

// Formats a double with 17 significant digits ("%.17g").
std::string format_double(double v);

// CSV with header x1,...,xp,<response>; one row per observation.
void write_dataset_csv(std::ostream& out, const Dataset& data);

// Comma-separated, header required, '.' decimal. The column named `response`
// becomes y; every other column is a covariate in file order. Throws DataError
// naming the row/column on malformed, missing or non-numeric values.
Dataset read_dataset_csv(std::istream& in, std::string_view response = "y");

// {p, peff, beta[], support[], sigma_kind, rho, sigma2, delta, seed[, fixture]}
std::string truth_to_json(const TruthRecord& truth);
TruthRecord truth_from_json(std::string_view text);

// {p, mu_x[], sigma_x[][], beta[], delta, sigma2}
std::string model_to_json(const ModelSpec& model);
ModelSpec model_from_json(std::string_view text);

// Selected indices and names, m_reach, alpha, n, p, max_order, stage sets.
std::string selection_to_json(const SelectionResult& result,
                              const std::vector<std::string>& names, std::string_view mode);
// Only the selected indices are needed downstream (eval).
ActiveSet selected_from_json(std::string_view text);

// Array of {stage, j, S[], rho_hat, statistic, decision}.
std::string trace_to_json(const SelectionResult& result);

// {tpr, fpr, mse_coeff, mse_pred}; undefined quantities are null.
std::string metrics_to_json(const Metrics& metrics);

// alpha,mean_tpr,mean_fpr,sd_tpr,sd_fpr,replicates
void write_roc_csv(std::ostream& out, const RocTable& table);

std::string suite_report_to_json(const SuiteReport& report);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace pcsimple::io
