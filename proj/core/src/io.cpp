#include "rankreg/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rankreg/errors.hpp"

namespace rankreg {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string indexed_header(std::string_view prefix, Eigen::Index count) {
  std::string out;
  for (Eigen::Index k = 0; k < count; ++k) {
    if (k > 0) out += ',';
    out += prefix;
    out += std::to_string(k + 1);
  }
  return out;
}

void append_vector(std::string& out, const Vector& v) {
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (k > 0) out += ',';
    out += format_double(v(k));
  }
}

std::size_t require_column(const CsvTable& table, const std::string& name) {
  auto col = table.column(name);
  if (!col) throw ParseError(table.source, 1, "missing column '" + name + "'");
  return *col;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw Error("failed to format a floating-point value");
  return std::string(buf, ptr);
}

double parse_double(std::string_view text, const std::string& source, std::size_t line) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw ParseError(source, line, "expected a finite number, got '" + std::string(text) + "'");
  }
  return value;
}

std::int64_t parse_int(std::string_view text, const std::string& source, std::size_t line) {
  std::int64_t value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last) {
    throw ParseError(source, line, "expected an integer, got '" + std::string(text) + "'");
  }
  return value;
}

std::optional<std::size_t> CsvTable::column(std::string_view name) const {
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (header[k] == name) return k;
  }
  return std::nullopt;
}

CsvTable read_csv(std::istream& in, const std::string& source) {
  CsvTable table;
  table.source = source;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_fields(line);
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw ParseError(source, line_no,
                       "expected " + std::to_string(table.header.size()) + " fields, got " +
                           std::to_string(fields.size()));
    }
    table.rows.push_back(std::move(fields));
    table.lines.push_back(line_no);
  }
  if (!have_header) throw ParseError(source, 0, "missing header row");
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return read_csv(in, path.string());
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string samples_to_csv(const SampleSet& samples) {
  std::string out = indexed_header("x_", samples.dim());
  out += '\n';
  for (Eigen::Index r = 0; r < samples.features.rows(); ++r) {
    append_vector(out, samples.features.row(r).transpose());
    out += '\n';
  }
  return out;
}

SampleSet read_samples_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const auto d = static_cast<Eigen::Index>(table.header.size());
  for (Eigen::Index k = 0; k < d; ++k) {
    if (table.header[k] != "x_" + std::to_string(k + 1)) {
      throw ParseError(table.source, 1, "expected header x_1..x_d");
    }
  }
  const auto rows = static_cast<Eigen::Index>(table.rows.size());
  if (rows == 0 || rows % 2 != 0) {
    throw ParseError(table.source, 0, "sample file must hold an even, non-zero number of rows (2N)");
  }
  SampleSet samples{rows / 2, FeatureMatrix(rows, d)};
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) {
      samples.features(r, c) = parse_double(table.rows[r][c], table.source, table.lines[r]);
    }
  }
  return samples;
}

std::string comparisons_to_csv(const ComparisonDataset& dataset) {
  std::string out = "i,j,y\n";
  for (const Comparison& c : dataset.triples) {
    out += std::to_string(c.i + 1);
    out += ',';
    out += std::to_string(c.j + 1);
    out += ',';
    out += std::to_string(static_cast<int>(c.y));
    out += '\n';
  }
  return out;
}

ComparisonDataset read_comparisons_csv(const std::filesystem::path& path, Eigen::Index pool_size) {
  const CsvTable table = read_csv(path);
  if (table.header != std::vector<std::string>{"i", "j", "y"}) {
    throw ParseError(table.source, 1, "expected header i,j,y");
  }
  ComparisonDataset dataset{pool_size, {}};
  dataset.triples.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const std::size_t line = table.lines[r];
    const std::int64_t i = parse_int(table.rows[r][0], table.source, line);
    const std::int64_t j = parse_int(table.rows[r][1], table.source, line);
    const std::int64_t y = parse_int(table.rows[r][2], table.source, line);
    if (i < 1 || i > pool_size || j < 1 || j > pool_size) {
      throw ParseError(table.source, line, "index outside 1.." + std::to_string(pool_size));
    }
    if (y != 1 && y != -1) throw ParseError(table.source, line, "label must be -1 or 1");
    dataset.triples.push_back(
        {static_cast<std::uint32_t>(i - 1), static_cast<std::uint32_t>(j - 1), static_cast<std::int8_t>(y)});
  }
  if (dataset.triples.empty()) throw ParseError(table.source, 0, "no comparisons");
  return dataset;
}

std::string estimate_to_csv(const Estimate& estimate) {
  std::string out = "n,m," + indexed_header("beta_hat_", estimate.beta_hat.size()) + "\n";
  out += std::to_string(estimate.n_used) + "," + std::to_string(estimate.m_used) + ",";
  append_vector(out, estimate.beta_hat);
  out += '\n';
  return out;
}

std::string truth_to_csv(const TruthRecord& truth) {
  const Eigen::Index d = truth.beta.size();
  std::string out = indexed_header("beta_", d) + "," + indexed_header("mu_", d);
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) out += ",sigma_" + std::to_string(r + 1) + "_" + std::to_string(c + 1);
  }
  out += ",link,alpha,c1\n";
  append_vector(out, truth.beta);
  out += ',';
  append_vector(out, truth.mu);
  for (Eigen::Index r = 0; r < d; ++r) {
    for (Eigen::Index c = 0; c < d; ++c) out += "," + format_double(truth.sigma(r, c));
  }
  switch (truth.link.kind()) {
    case LinkFunction::Kind::logistic:
      out += ",logistic," + format_double(truth.link.slope());
      break;
    case LinkFunction::Kind::probit:
      out += ",probit," + format_double(truth.link.slope());
      break;
    case LinkFunction::Kind::deterministic:
      out += ",deterministic,";
      break;
  }
  out += ',';
  if (truth.c1) out += format_double(*truth.c1);
  out += '\n';
  return out;
}

TruthRecord read_truth_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  if (table.rows.size() != 1) throw ParseError(table.source, 0, "truth file must hold exactly one data row");
  const auto& row = table.rows[0];
  const std::size_t line = table.lines[0];
  Eigen::Index d = 0;
  while (table.column("beta_" + std::to_string(d + 1))) ++d;
  if (d == 0) throw ParseError(table.source, 1, "missing column 'beta_1'");

  TruthRecord truth{Vector(d), Vector(d), Matrix(d, d), LinkFunction::deterministic(), std::nullopt};
  for (Eigen::Index k = 0; k < d; ++k) {
    const std::string idx = std::to_string(k + 1);
    truth.beta(k) = parse_double(row[require_column(table, "beta_" + idx)], table.source, line);
    truth.mu(k) = parse_double(row[require_column(table, "mu_" + idx)], table.source, line);
    for (Eigen::Index c = 0; c < d; ++c) {
      const std::string name = "sigma_" + idx + "_" + std::to_string(c + 1);
      truth.sigma(k, c) = parse_double(row[require_column(table, name)], table.source, line);
    }
  }
  const std::string& link = row[require_column(table, "link")];
  const std::string& alpha = row[require_column(table, "alpha")];
  if (link == "deterministic") {
    truth.link = LinkFunction::deterministic();
  } else if (link == "logistic" || link == "probit") {
    const double slope = parse_double(alpha, table.source, line);
    try {
      truth.link = link == "logistic" ? LinkFunction::logistic(slope) : LinkFunction::probit(slope);
    } catch (const DomainError& e) {
      throw ParseError(table.source, line, e.what());
    }
  } else {
    throw ParseError(table.source, line, "unknown link '" + link + "'");
  }
  const std::string& c1 = row[require_column(table, "c1")];
  if (!c1.empty()) truth.c1 = parse_double(c1, table.source, line);
  return truth;
}

}  // namespace rankreg
