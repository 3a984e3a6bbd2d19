#ifndef HBA_TRACE_IO_HPP_
#define HBA_TRACE_IO_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "hba/solver.hpp"

namespace hba {

// Column contract of trace CSV files.
const std::vector<std::string>& trace_columns();

// Header plus one row per iterate; numbers use %.17g so output is exact.
void write_trace_csv(std::ostream& os, const IterateTrace& trace);

// Formats a double the same way the trace writer does.
std::string format_number(double v);

}  // namespace hba

#endif  // HBA_TRACE_IO_HPP_
