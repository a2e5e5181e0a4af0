#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace shimura::cli {

enum ExitCode { Ok = 0, DomainFailure = 2, BudgetExceeded = 3, BadInput = 4 };

/// Parses argv (without the program name), runs the selected subcommand and
/// writes its JSON document to out. Input documents are read from --input or
/// from in. Diagnostics go to err only.
int run(const std::vector<std::string> &args, std::istream &in, std::ostream &out, std::ostream &err);

} // namespace shimura::cli
