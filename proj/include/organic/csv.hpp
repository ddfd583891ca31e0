#pragma once

#include <iosfwd>
#include <string>

#include "organic/types.hpp"

namespace organic {

/// Reads a dataset from CSV with the mandatory header
///   a,c1..ck,l1..lp,m,y
/// (k and p inferred from the header; k = p = 0 is valid). `a` must parse
/// as an integer, the remaining columns as decimal reals. Row order is
/// preserved. Throws MalformedHeader, ParseError (naming row and column),
/// or ValidationError.
Dataset read_csv(std::istream& in);
Dataset read_csv_file(const std::string& path);

/// Writes the canonical header and one row per record, numbers with up to
/// 17 significant digits so values round-trip exactly.
void write_csv(std::ostream& out, const Dataset& dataset);
void write_csv_file(const std::string& path, const Dataset& dataset);

}  // namespace organic
