#include "kgsim/sample_table.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "kgsim/error.hpp"

namespace kgsim::traces {

SampleTable::SampleTable(std::size_t user_count, std::size_t category_count)
    : users_(user_count), categories_(category_count) {
  if (user_count == 0 || category_count == 0) {
    throw Error(Errc::InvalidConfig, "sample table needs at least one user and one category");
  }
}

void SampleTable::push_row(std::span<const Category> row) {
  if (row.size() != users_) {
    throw Error(Errc::MalformedSamples, "row has " + std::to_string(row.size()) +
                                            " entries, expected " + std::to_string(users_));
  }
  for (Category c : row) {
    if (c >= categories_) {
      throw Error(Errc::OutOfRange, "category " + std::to_string(c) + " outside alphabet of size " +
                                        std::to_string(categories_));
    }
  }
  cells_.insert(cells_.end(), row.begin(), row.end());
}

std::span<const Category> SampleTable::row(std::size_t t) const {
  return std::span<const Category>(cells_).subspan(t * users_, users_);
}

void write_sample_table(std::ostream& out, const SampleTable& table) {
  out << table.user_count() << ',' << table.category_count() << ',' << table.row_count() << '\n';
  std::string line;
  for (std::size_t t = 0; t < table.row_count(); ++t) {
    line.clear();
    for (Category c : table.row(t)) {
      if (!line.empty()) line += ',';
      line += std::to_string(c);
    }
    line += '\n';
    out << line;
  }
}

namespace {

std::vector<std::uint64_t> split_integers(std::string_view line, std::size_t line_no) {
  std::vector<std::uint64_t> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = line.find(',', pos);
    const std::string_view field =
        line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
      throw Error(Errc::ParseError, "expected a non-negative integer, got '" + std::string(field) + "'",
                  line_no);
    }
    out.push_back(value);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

SampleTable read_sample_table(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(Errc::ParseError, "missing header", 1);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_integers(line, 1);
  if (header.size() != 3) throw Error(Errc::ParseError, "header must be M,v,T", 1);
  SampleTable table(header[0], header[1]);
  std::vector<Category> row;
  for (std::uint64_t t = 0; t < header[2]; ++t) {
    const std::size_t line_no = t + 2;
    if (!std::getline(in, line)) throw Error(Errc::ParseError, "fewer rows than the header declares", line_no);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto values = split_integers(line, line_no);
    for (std::uint64_t v : values) {
      if (v >= header[1]) throw Error(Errc::OutOfRange, "category outside alphabet", line_no);
    }
    row.assign(values.begin(), values.end());
    try {
      table.push_row(row);
    } catch (const Error& e) {
      throw Error(e.code(), "bad row", line_no);
    }
  }
  while (std::getline(in, line)) {
    if (!line.empty() && line != "\r") throw Error(Errc::ParseError, "trailing data after declared rows");
  }
  return table;
}

}  // namespace kgsim::traces
