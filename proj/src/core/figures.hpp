#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace collspin {

// One CSV-shaped payload: column names plus numeric rows.
struct DataTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void write_csv(std::ostream& os) const;
};

// A single PASS/FAIL gate attached to a figure target.  `value` is the
// measured quantity and the gate is |value - target| <= tolerance.
struct FigureCheck {
  std::string name;
  double value = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct FigureResult {
  std::string id;
  std::vector<DataTable> tables;
  std::vector<FigureCheck> checks;
  double seconds = 0.0;
  std::vector<std::string> notes;  // cutoffs and solver choices, for metadata

  bool pass() const;
};

const std::vector<std::string>& figure_ids();

// Runs one figure target.  n_values overrides the default system sizes
// (rejected with std::invalid_argument for targets without a size axis).
FigureResult run_figure(const std::string& id,
                        const std::vector<int>& n_values = {});

}  // namespace collspin
