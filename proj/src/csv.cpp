#include "organic/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "organic/errors.hpp"

namespace organic {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
  std::size_t start = 0;
  while (start < s.size() && (s[start] == ' ' || s[start] == '\t')) ++start;
  return s.substr(start);
}

// header must be exactly a, c1..ck, l1..lp, m, y
std::pair<Index, Index> parse_header(const std::vector<std::string>& columns) {
  if (columns.empty() || trim(columns[0]) != "a") {
    throw MalformedHeader("first column must be 'a'");
  }
  std::size_t pos = 1;
  Index k = 0;
  while (pos < columns.size() && trim(columns[pos]) == "c" + std::to_string(k + 1)) {
    ++k;
    ++pos;
  }
  Index p = 0;
  while (pos < columns.size() && trim(columns[pos]) == "l" + std::to_string(p + 1)) {
    ++p;
    ++pos;
  }
  if (pos + 2 != columns.size() || trim(columns[pos]) != "m" || trim(columns[pos + 1]) != "y") {
    throw MalformedHeader("expected columns a,c1..ck,l1..lp,m,y; got unexpected column '" +
                          (pos < columns.size() ? trim(columns[pos]) : std::string("<none>")) +
                          "'");
  }
  return {k, p};
}

double parse_double(const std::string& field, int line_number, const std::string& column) {
  const std::string text = trim(field);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError("line " + std::to_string(line_number) + ", column " + column +
                     ": cannot parse '" + text + "' as a number");
  }
  return value;
}

int parse_treatment(const std::string& field, int line_number) {
  const std::string text = trim(field);
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError("line " + std::to_string(line_number) +
                     ", column a: cannot parse '" + text + "' as an integer");
  }
  return value;
}

}  // namespace

Dataset read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw MalformedHeader("empty input: missing header row");
  const auto [k, p] = parse_header(split_line(trim(line)));

  Dataset dataset;
  dataset.k = k;
  dataset.p = p;
  const std::size_t expected = static_cast<std::size_t>(3 + k + p);  // a, c, l, m, y

  int line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string trimmed = trim(line);
    if (trimmed.empty()) continue;
    const auto fields = split_line(trimmed);
    if (fields.size() != expected) {
      throw ParseError("line " + std::to_string(line_number) + ": expected " +
                       std::to_string(expected) + " fields, got " + std::to_string(fields.size()));
    }
    ObservedRecord rec;
    std::size_t pos = 0;
    rec.a = parse_treatment(fields[pos++], line_number);
    rec.c.resize(k);
    for (Index i = 0; i < k; ++i) {
      rec.c[i] = parse_double(fields[pos++], line_number, "c" + std::to_string(i + 1));
    }
    rec.l.resize(p);
    for (Index j = 0; j < p; ++j) {
      rec.l[j] = parse_double(fields[pos++], line_number, "l" + std::to_string(j + 1));
    }
    rec.m = parse_double(fields[pos++], line_number, "m");
    rec.y = parse_double(fields[pos++], line_number, "y");
    dataset.records.push_back(std::move(rec));
  }

  require_valid(dataset);
  return dataset;
}

Dataset read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "' for reading");
  return read_csv(in);
}

namespace {

std::string format_number(double v) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", v);
  return buffer;
}

}  // namespace

void write_csv(std::ostream& out, const Dataset& dataset) {
  out << "a";
  for (Index i = 0; i < dataset.k; ++i) out << ",c" << (i + 1);
  for (Index j = 0; j < dataset.p; ++j) out << ",l" << (j + 1);
  out << ",m,y\n";
  for (const auto& rec : dataset.records) {
    out << rec.a;
    for (Index i = 0; i < dataset.k; ++i) out << "," << format_number(rec.c[i]);
    for (Index j = 0; j < dataset.p; ++j) out << "," << format_number(rec.l[j]);
    out << "," << format_number(rec.m) << "," << format_number(rec.y) << "\n";
  }
}

void write_csv_file(const std::string& path, const Dataset& dataset) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  write_csv(out, dataset);
}

}  // namespace organic
